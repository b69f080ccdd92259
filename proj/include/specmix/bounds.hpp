#pragma once

// Influence bounds for uniform list colourings: the marginal Condition, the
// easy-coupling and self-avoiding-walk bounds, the recursive coupling with
// its split-vertex construction, the single-disagreement TV identity, the
// star tightness example and the monotonicity check behind the 1.763 constant.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "specmix/error.hpp"
#include "specmix/exact.hpp"
#include "specmix/glauber.hpp"
#include "specmix/instance.hpp"

namespace specmix {

struct ColouringParams {
  int chi = 1;
  double eps1 = 0.5;
  double eps2 = 0.5;
  double delta = 0.0;

  /// Fixed point of x <- exp(1/x), about 1.76322.
  static double alpha_star() {
    static const double value = [] {
      double x = 1.76;
      for (int i = 0; i < 200; ++i) {
        const double next = std::exp(1.0 / x);
        if (std::abs(next - x) < 1e-15) return next;
        x = next;
      }
      return x;
    }();
    return value;
  }

  /// chi = max degree, eps1 = 1 - delta/(alpha* + delta), eps2 = 0.4 + delta.
  static ColouringParams verified_instantiation(int max_degree, double delta) {
    if (!(delta > 0.0)) throw ParameterError("delta must be positive");
    if (max_degree < 1) throw ParameterError("max degree must be positive");
    const double a = alpha_star();
    return {max_degree, 1.0 - delta / (a + delta), 0.4 + delta, delta};
  }

  void validate() const {
    if (chi <= 0) throw ParameterError("chi must be positive");
    if (!(eps1 > 0.0 && eps1 < 1.0)) throw ParameterError("eps1 must lie in (0, 1)");
    if (!(eps2 > 0.0)) throw ParameterError("eps2 must be positive");
  }

  double upper_marginal() const { return 1.0 / (eps2 * chi + 1.0); }
};

/// Marginals of every vertex of an unpinned instance, from one enumeration.
/// Entry [v][i] belongs to colour list(v)[i]. Empty when infeasible.
inline std::vector<std::vector<double>> all_marginals(const ListColouringInstance& inst,
                                                      std::uint64_t cap = kDefaultEnumerationCap) {
  const int n = inst.size();
  std::vector<std::vector<std::uint64_t>> counts(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) counts[static_cast<std::size_t>(v)].assign(inst.list(v).size(), 0);
  std::uint64_t total = 0;
  for_each_colouring(
      inst, {},
      [&](const std::vector<Colour>& col) {
        ++total;
        for (Vertex v = 0; v < n; ++v)
          ++counts[static_cast<std::size_t>(v)][static_cast<std::size_t>(inst.colour_index(v, col[static_cast<std::size_t>(v)]))];
      },
      cap);
  std::vector<std::vector<double>> out;
  if (total == 0) return out;
  out.resize(static_cast<std::size_t>(n));
  for (std::size_t v = 0; v < counts.size(); ++v)
    for (std::uint64_t k : counts[v]) out[v].push_back(static_cast<double>(k) / static_cast<double>(total));
  return out;
}

struct ConditionWitness {
  Pinning pinning;  // on the original instance
  Vertex vertex = -1;  // original index
  Colour colour = -1;
  std::string bound;  // "eps1/deg" or "1/(eps2*chi+1)" or "feasible"
  double marginal = 0.0;
  double limit = 0.0;
};

struct ConditionReport {
  bool max_degree_ok = false;
  bool feasible_ok = true;
  bool marginal_ok = true;
  std::size_t images = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  ConditionWitness witness;

  bool ok() const { return max_degree_ok && feasible_ok && marginal_ok; }
};

/// Checks the Condition on the instance and every distinct pin-image
/// Pin(Lambda, sigma) with |Lambda| <= n-1 and sigma drawn from the lists.
inline ConditionReport verify_condition(const ListColouringInstance& inst, const ColouringParams& params,
                                        std::uint64_t cap = kDefaultEnumerationCap) {
  params.validate();
  ConditionReport r;
  r.max_degree_ok = inst.graph().max_degree() <= params.chi;
  std::set<std::string> seen;
  const double upper = params.upper_marginal();
  for (int k = 0; k < std::max(inst.size(), 1); ++k) {
    for_each_pinning(inst, k, [&](const Pinning& p) {
      const PinResult img = pin(inst, p);
      if (!seen.insert(img.instance.key()).second) return;
      ++r.images;
      const auto marg = all_marginals(img.instance, cap);
      if (marg.empty()) {
        if (r.feasible_ok || r.worst_margin > -1.0) {
          r.worst_margin = -1.0;
          r.witness = {p, -1, -1, "feasible", 0.0, 0.0};
        }
        r.feasible_ok = false;
        return;
      }
      const auto& g = img.instance.graph();
      for (Vertex v = 0; v < img.instance.size(); ++v) {
        const int deg = g.degree(v);
        for (std::size_t i = 0; i < marg[static_cast<std::size_t>(v)].size(); ++i) {
          const double m = marg[static_cast<std::size_t>(v)][i];
          const Colour c = img.instance.list(v)[i];
          auto check = [&](double limit, const char* name) {
            const double margin = limit - m;
            if (margin < 0.0) r.marginal_ok = false;
            if (margin < r.worst_margin) {
              r.worst_margin = margin;
              r.witness = {p, img.to_original[static_cast<std::size_t>(v)], c, name, m, limit};
            }
          };
          if (deg >= 1 && deg <= params.chi - 1) check(params.eps1 / deg, "eps1/deg");
          check(upper, "1/(eps2*chi+1)");
        }
      }
    });
  }
  return r;
}

struct Eq2DReport {
  bool ok = false;
  bool triangle_free = false;
  double required_slack = 0.0;  // (alpha* + delta - 1) chi
  std::vector<Vertex> violators;
};

/// |L(v)| - deg(v) >= (alpha* + delta - 1) chi for every v, and no triangles.
inline Eq2DReport check_eq2D(const ListColouringInstance& inst, const ColouringParams& params) {
  Eq2DReport r;
  r.triangle_free = inst.graph().triangle_free();
  r.required_slack = (ColouringParams::alpha_star() + params.delta - 1.0) * params.chi;
  for (Vertex v = 0; v < inst.size(); ++v) {
    const double slack = static_cast<double>(inst.list(v).size()) - inst.graph().degree(v);
    if (slack < r.required_slack) r.violators.push_back(v);
  }
  r.ok = r.triangle_free && r.violators.empty();
  return r;
}

/// (1 - 1/(3 e^{1/eps2})) (n - 1).
inline double easy_coupling_bound(double eps2, int n) {
  if (!(eps2 > 0.0)) throw ParameterError("eps2 must be positive");
  if (n < 1) throw ParameterError("n must be positive");
  return (1.0 - 1.0 / (3.0 * std::exp(1.0 / eps2))) * (n - 1);
}
inline double easy_coupling_bound(const ColouringParams& params, int n) { return easy_coupling_bound(params.eps2, n); }

/// 1 / ((1 - eps1) eps2).
inline double one_to_all_bound(const ColouringParams& params) {
  params.validate();
  return 1.0 / ((1.0 - params.eps1) * params.eps2);
}

struct SAWBound {
  Vertex source = -1;
  std::vector<double> per_target;  // indexed by vertex; 0 for the source
  double total = 0.0;
  std::vector<double> layer_sums;  // [l-1] = sum over SAWs with l vertices
  bool layers_ok = true;
  std::uint64_t walks = 0;
  std::uint64_t pruned = 0;
};

inline constexpr double kSAWPruneWeight = 1e-18;

/// Enumerates the self-avoiding walks from u. A walk (v_1..v_l) has weight
/// prod_{k<l} eps1 / |N(v_k) \ {v_1..v_{k-1}}|.
inline SAWBound saw_influence_bound(const ListColouringInstance& inst, Vertex u, const ColouringParams& params) {
  params.validate();
  const auto& g = inst.graph();
  if (!g.contains(u)) throw ContractError("vertex out of range");
  const int n = g.vertex_count();
  SAWBound b;
  b.source = u;
  b.per_target.assign(static_cast<std::size_t>(n), 0.0);
  b.layer_sums.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<char> on_path(static_cast<std::size_t>(n), 0);

  auto walk = [&](auto&& self, Vertex end, int length, double weight) -> void {
    ++b.walks;
    b.layer_sums[static_cast<std::size_t>(length - 1)] += weight;
    if (length >= 2) b.per_target[static_cast<std::size_t>(end)] += weight;
    int open = 0;
    for (Vertex w : g.neighbours(end))
      if (!on_path[static_cast<std::size_t>(w)]) ++open;
    if (open == 0) return;
    const double next = weight * params.eps1 / open;
    if (next < kSAWPruneWeight) {
      b.pruned += static_cast<std::uint64_t>(open);
      return;
    }
    for (Vertex w : g.neighbours(end)) {
      if (on_path[static_cast<std::size_t>(w)]) continue;
      on_path[static_cast<std::size_t>(w)] = 1;
      self(self, w, length + 1, next);
      on_path[static_cast<std::size_t>(w)] = 0;
    }
  };
  on_path[static_cast<std::size_t>(u)] = 1;
  walk(walk, u, 1, 1.0);

  const double prefactor = 1.0 / (params.eps1 * params.eps2);
  for (auto& x : b.per_target) {
    x *= prefactor;
    b.total += x;
  }
  for (std::size_t l = 0; l < b.layer_sums.size(); ++l)
    if (b.layer_sums[l] > std::pow(params.eps1, static_cast<double>(l)) + 1e-12) b.layers_ok = false;
  return b;
}

struct SingleDisagreement {
  double closed_form = 0.0;
  double direct = 0.0;
  std::map<Colour, std::uint64_t> counts;  // n(c) on the common instance
  std::uint64_t N = 0;
};

/// Instance equal to `common` except that w's list loses `c` (if present).
inline ListColouringInstance without_colour(const ListColouringInstance& common, Vertex w, Colour c) {
  std::vector<ColourList> lists = common.lists();
  std::erase(lists[static_cast<std::size_t>(w)], c);
  return {common.graph(), std::move(lists)};
}

/// TV between w's marginals in the instances where w's list is T \ {c2} and
/// T \ {c1} (T = w's list in `common`), in closed form from the colour
/// counts n(c) of `common` and directly by enumeration of both instances.
inline SingleDisagreement single_disagreement_tv(const ListColouringInstance& common, Vertex w, Colour c1, Colour c2,
                                                 std::uint64_t cap = kDefaultEnumerationCap) {
  if (!common.graph().contains(w)) throw ContractError("vertex out of range");
  if (c1 == c2) throw ContractError("the two disagreeing colours must differ");
  SingleDisagreement out;
  for_each_colouring(
      common, {}, [&](const std::vector<Colour>& col) { ++out.counts[col[static_cast<std::size_t>(w)]]; }, cap);
  auto n_of = [&](Colour c) {
    auto it = out.counts.find(c);
    return it == out.counts.end() ? std::uint64_t{0} : it->second;
  };
  for (const auto& [c, k] : out.counts)
    if (c != c1 && c != c2) out.N += k;
  const std::uint64_t mx = std::max(n_of(c1), n_of(c2));
  const ListColouringInstance a = without_colour(common, w, c2);
  const ListColouringInstance b = without_colour(common, w, c1);
  if (!is_feasible(a, {}, cap) || !is_feasible(b, {}, cap)) {
    throw InfeasibleError("a single-disagreement instance admits no proper colouring");
  }
  out.closed_form = static_cast<double>(mx) / static_cast<double>(out.N + mx);
  out.direct = tv_distance(marginal(a, {}, w, cap), marginal(b, {}, w, cap));
  return out;
}

/// Two-instance form: `a` and `b` share the graph and all lists except at w,
/// where a(w) \ b(w) = {c1} and b(w) \ a(w) = {c2}.
inline SingleDisagreement single_disagreement_tv(const ListColouringInstance& a, const ListColouringInstance& b,
                                                 Vertex w, std::uint64_t cap = kDefaultEnumerationCap) {
  if (!(a.graph() == b.graph())) throw ContractError("instances must share the graph");
  if (!a.graph().contains(w)) throw ContractError("vertex out of range");
  for (Vertex v = 0; v < a.size(); ++v)
    if (v != w && a.list(v) != b.list(v)) throw ContractError("instances differ away from the disagreement vertex");
  ColourList only_a;
  ColourList only_b;
  ColourList both;
  const auto& la = a.list(w);
  const auto& lb = b.list(w);
  std::set_difference(la.begin(), la.end(), lb.begin(), lb.end(), std::back_inserter(only_a));
  std::set_difference(lb.begin(), lb.end(), la.begin(), la.end(), std::back_inserter(only_b));
  std::set_union(la.begin(), la.end(), lb.begin(), lb.end(), std::back_inserter(both));
  if (only_a.size() != 1 || only_b.size() != 1) {
    throw ContractError("each list must miss exactly one colour of the other");
  }
  std::vector<ColourList> lists = a.lists();
  lists[static_cast<std::size_t>(w)] = both;
  return single_disagreement_tv(ListColouringInstance(a.graph(), std::move(lists)), w, only_a[0], only_b[0], cap);
}

/// Instance (G - u, L_{u,k}^{c1,c2}): u removed, neighbours w_l of u with
/// l < k lose c1, those with l > k lose c2 (k is 1-based; k = 0 makes every
/// neighbour lose c2). Vertex x of the result is x (x < u) or x + 1.
inline ListColouringInstance recursion_instance(const ListColouringInstance& inst, Vertex u, int k, Colour c1,
                                                Colour c2) {
  std::vector<Vertex> keep;
  for (Vertex x = 0; x < inst.size(); ++x)
    if (x != u) keep.push_back(x);
  std::vector<ColourList> lists;
  const auto nbrs = inst.graph().neighbours(u);
  for (Vertex x : keep) {
    ColourList l = inst.list(x);
    const auto it = std::find(nbrs.begin(), nbrs.end(), x);
    if (it != nbrs.end()) {
      const int pos = static_cast<int>(it - nbrs.begin()) + 1;
      if (pos < k) std::erase(l, c1);
      if (pos > k) std::erase(l, c2);
    }
    lists.push_back(std::move(l));
  }
  return {inst.graph().induced(keep), std::move(lists)};
}

struct CertifiedInfluenceBound {
  Vertex u = -1;
  Vertex v = -1;
  double value = 0.0;
  bool conservative = false;  // some branch hit an infeasible instance and used 1
  std::size_t nodes = 0;
  std::size_t memo_hits = 0;
};

/// Evaluates R(u,v) <= sum_k alpha_k R_{G_u, L_{u,k}^{c1,c2}}(w_k, v) down to
/// the base cases, with (c1, c2) the lexicographically first maximising pair.
class RecursiveInfluence {
 public:
  explicit RecursiveInfluence(ColouringParams params, std::uint64_t cap = kDefaultEnumerationCap)
      : params_(params), cap_(cap) {
    params_.validate();
  }

  CertifiedInfluenceBound operator()(const ListColouringInstance& inst, Vertex u, Vertex v) {
    if (!inst.graph().contains(u) || !inst.graph().contains(v)) throw ContractError("vertex out of range");
    CertifiedInfluenceBound out;
    out.u = u;
    out.v = v;
    conservative_ = false;
    nodes_ = 0;
    hits_ = 0;
    out.value = eval(inst, u, v, inst.size());
    out.conservative = conservative_;
    out.nodes = nodes_;
    out.memo_hits = hits_;
    return out;
  }

 private:
  const InfluenceMatrix* r_of(const ListColouringInstance& inst) {
    const std::string key = inst.key();
    auto it = r_cache_.find(key);
    if (it == r_cache_.end()) {
      std::optional<InfluenceMatrix> r;
      if (is_feasible(inst, {}, cap_)) r = r_matrix(inst, cap_);
      it = r_cache_.emplace(key, std::move(r)).first;
    }
    return it->second ? &*it->second : nullptr;
  }

  double eval(const ListColouringInstance& inst, Vertex u, Vertex v, int budget) {
    ++nodes_;
    if (u == v) return 1.0;
    if (!inst.graph().connected(u, v)) return 0.0;
    if (budget <= 0) {
      conservative_ = true;
      return 1.0;
    }
    const std::string key = inst.key() + '#' + std::to_string(u) + '#' + std::to_string(v);
    if (auto it = memo_.find(key); it != memo_.end()) {
      ++hits_;
      if (it->second.second) conservative_ = true;
      return it->second.first;
    }
    const bool outer = conservative_;
    conservative_ = false;
    double value = 1.0;
    if (const InfluenceMatrix* r = r_of(inst)) {
      const auto [c1, c2] = r->argmax[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
      const auto nbrs = inst.graph().neighbours(u);
      auto reduced = [&](Vertex x) { return x < u ? x : x - 1; };
      value = 0.0;
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        const Vertex w = nbrs[k];
        const int deg = inst.graph().degree(w) - 1;
        const double cap_term = params_.upper_marginal();
        const double alpha = deg == 0 ? cap_term : std::min(params_.eps1 / deg, cap_term);
        const ListColouringInstance sub = recursion_instance(inst, u, static_cast<int>(k) + 1, c1, c2);
        value += alpha * eval(sub, reduced(w), reduced(v), budget - 1);
      }
    } else {
      conservative_ = true;
    }
    memo_.emplace(key, std::make_pair(value, conservative_));
    conservative_ = conservative_ || outer;
    return value;
  }

  ColouringParams params_;
  std::uint64_t cap_;
  std::map<std::string, std::pair<double, bool>> memo_;
  std::map<std::string, std::optional<InfluenceMatrix>> r_cache_;
  bool conservative_ = false;
  std::size_t nodes_ = 0;
  std::size_t hits_ = 0;
};

inline CertifiedInfluenceBound recursive_influence_bound(const ListColouringInstance& inst, Vertex u, Vertex v,
                                                         const ColouringParams& params,
                                                         std::uint64_t cap = kDefaultEnumerationCap) {
  RecursiveInfluence rec(params, cap);
  return rec(inst, u, v);
}

/// G' from G: u replaced by copies u_1..u_m, u_k attached only to w_k, each
/// copy carrying L(u). Vertices of G other than u come first, in order.
struct SplitVertex {
  ListColouringInstance instance;
  Vertex split = -1;
  std::vector<int> from_original;  // -1 for the split vertex
  std::vector<Vertex> neighbours;  // w_1..w_m, original indices
  std::vector<Vertex> copies;      // u_1..u_m in the new instance

  /// sigma_k: u_j <- c1 for j <= k, u_j <- c2 for j > k.
  Pinning sigma(int k, Colour c1, Colour c2) const {
    Pinning p;
    for (std::size_t j = 0; j < copies.size(); ++j) p.assign(copies[j], static_cast<int>(j) < k ? c1 : c2);
    return p;
  }
};

inline SplitVertex split_vertex(const ListColouringInstance& inst, Vertex u) {
  const auto& g = inst.graph();
  if (!g.contains(u)) throw ContractError("vertex out of range");
  SplitVertex s;
  s.split = u;
  s.from_original.assign(static_cast<std::size_t>(inst.size()), -1);
  std::vector<ColourList> lists;
  int next = 0;
  for (Vertex x = 0; x < inst.size(); ++x) {
    if (x == u) continue;
    s.from_original[static_cast<std::size_t>(x)] = next++;
    lists.push_back(inst.list(x));
  }
  for (Vertex w : g.neighbours(u)) {
    s.neighbours.push_back(w);
    s.copies.push_back(next++);
    lists.push_back(inst.list(u));
  }
  Graph h(next);
  for (const auto& [a, b] : g.edges()) {
    if (a == u || b == u) continue;
    h.add_edge(s.from_original[static_cast<std::size_t>(a)], s.from_original[static_cast<std::size_t>(b)]);
  }
  for (std::size_t k = 0; k < s.copies.size(); ++k)
    h.add_edge(s.copies[k], s.from_original[static_cast<std::size_t>(s.neighbours[k])]);
  s.instance = ListColouringInstance(std::move(h), std::move(lists));
  return s;
}

struct TelescopingReport {
  double direct = 0.0;               // TV(mu_v^{u<-c1}, mu_v^{u<-c2}) in G
  double endpoint_residual = 0.0;    // sigma_m / sigma_0 marginals vs u <- c1 / c2
  std::vector<double> steps;         // TV(mu_v^{sigma_{k-1}}, mu_v^{sigma_k}) in G'
  std::vector<double> w_tv;          // TV(mu_{w_k}^{sigma_{k-1}}, mu_{w_k}^{sigma_k}) in G'
  std::vector<double> w_formula;     // closed form on L_{u,k}^{c1,c2}
  std::vector<double> r_sub;         // R_{G_u, L_{u,k}^{c1,c2}}(w_k, v)
  bool feasible = true;
  bool triangle_ok = false;          // direct <= sum of steps
  bool coupling_ok = false;          // step_k <= w_tv_k * r_sub_k
  bool formula_ok = false;           // w_tv_k == w_formula_k
  double step_sum() const {
    double s = 0.0;
    for (double x : steps) s += x;
    return s;
  }
  bool ok(double tol = 1e-12) const {
    return feasible && triangle_ok && coupling_ok && formula_ok && endpoint_residual <= tol;
  }
};

/// Checks each link of the split-vertex telescoping argument by enumeration.
inline TelescopingReport telescoping_report(const ListColouringInstance& inst, Vertex u, Vertex v, Colour c1,
                                            Colour c2, double tol = 1e-12,
                                            std::uint64_t cap = kDefaultEnumerationCap) {
  if (u == v) throw ContractError("telescoping needs distinct vertices");
  if (!inst.has_colour(u, c1) || !inst.has_colour(u, c2)) throw ContractError("colours must lie in L(u)");
  const SplitVertex s = split_vertex(inst, u);
  const Vertex v2 = s.from_original[static_cast<std::size_t>(v)];
  const int m = static_cast<int>(s.copies.size());
  TelescopingReport r;

  std::vector<Pinning> sig;
  for (int k = 0; k <= m; ++k) {
    sig.push_back(s.sigma(k, c1, c2));
    if (!is_feasible(s.instance, sig.back(), cap)) r.feasible = false;
  }
  if (!is_feasible(inst, {{u, c1}}, cap) || !is_feasible(inst, {{u, c2}}, cap)) r.feasible = false;
  if (!r.feasible) return r;

  const MarginalVector g1 = marginal(inst, {{u, c1}}, v, cap);
  const MarginalVector g2 = marginal(inst, {{u, c2}}, v, cap);
  r.direct = tv_distance(g1, g2);
  r.endpoint_residual = std::max(tv_distance(marginal(s.instance, sig[static_cast<std::size_t>(m)], v2, cap), g1),
                                 tv_distance(marginal(s.instance, sig[0], v2, cap), g2));
  r.coupling_ok = true;
  r.formula_ok = true;
  for (int k = 1; k <= m; ++k) {
    const Pinning& before = sig[static_cast<std::size_t>(k - 1)];
    const Pinning& after = sig[static_cast<std::size_t>(k)];
    const Vertex w = s.neighbours[static_cast<std::size_t>(k - 1)];
    const Vertex w2 = s.from_original[static_cast<std::size_t>(w)];
    r.steps.push_back(tv_distance(marginal(s.instance, before, v2, cap), marginal(s.instance, after, v2, cap)));
    r.w_tv.push_back(tv_distance(marginal(s.instance, before, w2, cap), marginal(s.instance, after, w2, cap)));

    const ListColouringInstance sub = recursion_instance(inst, u, k, c1, c2);
    auto reduced = [&](Vertex x) { return x < u ? x : x - 1; };
    r.w_formula.push_back(single_disagreement_tv(sub, reduced(w), c1, c2, cap).closed_form);
    const InfluenceMatrix rs = r_matrix(sub, cap);
    r.r_sub.push_back(rs.entries(static_cast<std::size_t>(reduced(w)), static_cast<std::size_t>(reduced(v))));

    const std::size_t i = static_cast<std::size_t>(k - 1);
    if (r.steps[i] > r.w_tv[i] * r.r_sub[i] + tol) r.coupling_ok = false;
    if (std::abs(r.w_tv[i] - r.w_formula[i]) > tol) r.formula_ok = false;
  }
  r.triangle_ok = r.direct <= r.step_sum() + tol;
  return r;
}

struct StarTightness {
  int delta = 0;
  int q = 0;
  double value = 0.0;
  bool below_threshold = false;  // q < alpha* Delta - 3
  bool exceeds_inverse_degree = false;  // value > 1/Delta
};

/// Centre marginal of colour q-1 on the star with centre list [q] and leaf
/// lists [q-1]: (q-1)^D / ((q-1)(q-2)^D + (q-1)^D).
inline StarTightness star_tightness(int delta, int q) {
  if (delta < 1 || q < 3) throw ParameterError("star tightness needs Delta >= 1 and q >= 3");
  StarTightness s{delta, q};
  const double ratio = std::pow(static_cast<double>(q - 2) / static_cast<double>(q - 1), delta);
  s.value = 1.0 / ((q - 1) * ratio + 1.0);
  s.below_threshold = q < ColouringParams::alpha_star() * delta - 3.0;
  s.exceeds_inverse_degree = s.value > 1.0 / delta;
  return s;
}

struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
};

/// Exact unreduced form of the star marginal; throws on 64-bit overflow.
inline Fraction star_tightness_rational(int delta, int q) {
  if (delta < 1 || q < 3) throw ParameterError("star tightness needs Delta >= 1 and q >= 3");
  auto ipow = [](std::uint64_t b, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i)
      if (__builtin_mul_overflow(r, b, &r)) throw ParameterError("star fraction overflows 64 bits");
    return r;
  };
  const std::uint64_t a = ipow(static_cast<std::uint64_t>(q - 1), delta);
  std::uint64_t b = ipow(static_cast<std::uint64_t>(q - 2), delta);
  if (__builtin_mul_overflow(b, static_cast<std::uint64_t>(q - 1), &b) || __builtin_add_overflow(b, a, &b)) {
    throw ParameterError("star fraction overflows 64 bits");
  }
  return {a, b};
}

/// The star used by star_tightness: centre 0 with list [q], leaves 1..D with [q-1].
inline ListColouringInstance star_instance(int delta, int q) {
  Graph g(delta + 1);
  for (Vertex v = 1; v <= delta; ++v) g.add_edge(0, v);
  std::vector<ColourList> lists;
  ColourList centre(static_cast<std::size_t>(q));
  for (int c = 0; c < q; ++c) centre[static_cast<std::size_t>(c)] = c;
  lists.push_back(centre);
  centre.pop_back();
  for (int v = 1; v <= delta; ++v) lists.push_back(centre);
  return {std::move(g), std::move(lists)};
}

inline std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) throw ParameterError("log grid needs 0 < lo < hi and count >= 2");
  std::vector<double> xs;
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) xs.push_back(i + 1 == count ? hi : lo * std::exp(step * i));
  return xs;
}

/// f(x) = ((a*+d) x + 1/2)/x * (1 - 1/((a*+d-1) x + 1/2))^{x ((a*+d-1) x + 1/2)/((a*+d) x + 1/2)}.
inline long double f_value(long double delta, long double x) {
  const long double s = static_cast<long double>(ColouringParams::alpha_star()) + delta;
  const long double inner = (s - 1.0L) * x + 0.5L;
  const long double expo = x * inner / (s * x + 0.5L);
  return (s * x + 0.5L) / x * std::exp(expo * std::log1p(-1.0L / inner));
}

inline long double f_limit(long double delta) {
  const long double s = static_cast<long double>(ColouringParams::alpha_star()) + delta;
  return s * std::exp(-1.0L / s);
}

namespace detail {
inline long double b_poly_k(long double a, long double x) {
  return -1.0L + 8.0L * a * a * a * x * x * x - 2.0L * a * x * (1.0L + 2.0L * x) + 4.0L * a * a * x * x * (1.0L + 2.0L * x);
}
inline long double b_head(long double a, long double x) {
  return 1.0L + 2.0L * x - 4.0L * a * a * x * x + 8.0L * a * (1.0L + a) * x * x * x;
}
}  // namespace detail

/// Factor B of f'(x) = A B with the exact logarithm, a = alpha* + delta - 1.
inline long double b_factor(long double delta, long double x) {
  const long double a = static_cast<long double>(ColouringParams::alpha_star()) + delta - 1.0L;
  const long double z = 1.0L + 2.0L * a * x;
  return detail::b_head(a, x) + x * detail::b_poly_k(a, x) * std::log1p(-2.0L / z);
}

/// B with the logarithm replaced by its four-term Taylor upper bound.
inline long double b_upper(long double delta, long double x) {
  const long double a = static_cast<long double>(ColouringParams::alpha_star()) + delta - 1.0L;
  const long double z = 1.0L + 2.0L * a * x;
  const long double series = -2.0L / z - 2.0L / (z * z) - (8.0L / 3.0L) / (z * z * z) - 4.0L / (z * z * z * z);
  return detail::b_head(a, x) + x * detail::b_poly_k(a, x) * series;
}

struct FCheckReport {
  double delta = 0.0;
  std::vector<double> xs;
  std::vector<long double> fs;
  std::vector<long double> b_values;
  std::vector<long double> b_bounds;
  long double limit = 0.0L;
  bool strictly_decreasing = true;
  bool above_limit = true;
  bool b_negative = true;  // every Taylor bound < -1e-9
  bool b_dominated = true;  // exact B <= Taylor bound
  bool ok() const { return strictly_decreasing && above_limit && b_negative && b_dominated; }
};

inline FCheckReport check_f_monotone(double delta, const std::vector<double>& grid) {
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  FCheckReport r;
  r.delta = delta;
  r.xs = grid;
  r.limit = f_limit(delta);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 3.0)) throw ParameterError("grid must lie in [3, inf)");
    const long double x = grid[i];
    r.fs.push_back(f_value(delta, x));
    r.b_values.push_back(b_factor(delta, x));
    r.b_bounds.push_back(b_upper(delta, x));
    if (i > 0 && !(r.fs[i] < r.fs[i - 1])) r.strictly_decreasing = false;
    if (!(r.fs[i] >= r.limit)) r.above_limit = false;
    if (!(r.b_bounds[i] < -1e-9L)) r.b_negative = false;
    if (!(r.b_values[i] <= r.b_bounds[i] + 1e-12L * std::abs(r.b_bounds[i]))) r.b_dominated = false;
  }
  return r;
}

struct OneToAllReport {
  std::vector<double> row_sums;  // sum_{v != u} R(u, v)
  double easy_bound = 0.0;
  double saw_bound = 0.0;
  double bound = 0.0;
  bool condition_ok = false;
  bool ok = false;
};

inline OneToAllReport one_to_all_check(const ListColouringInstance& inst, const ColouringParams& params,
                                       double tol = 1e-9, std::uint64_t cap = kDefaultEnumerationCap) {
  OneToAllReport r;
  r.condition_ok = verify_condition(inst, params, cap).ok();
  r.easy_bound = easy_coupling_bound(params, std::max(inst.size(), 1));
  r.saw_bound = one_to_all_bound(params);
  r.bound = std::min(r.easy_bound, r.saw_bound);
  r.ok = true;
  if (inst.size() == 0) return r;
  const InfluenceMatrix rm = r_matrix(inst, cap);
  for (std::size_t u = 0; u < rm.order.size(); ++u) {
    double s = 0.0;
    for (std::size_t v = 0; v < rm.order.size(); ++v)
      if (u != v) s += rm.entries(u, v);
    r.row_sums.push_back(s);
    if (s > r.bound + tol) r.ok = false;
  }
  return r;
}

}  // namespace specmix
