#pragma once

// Brute-force oracle: exact uniform distribution over proper list colourings,
// conditional marginals, total-variation distances and influence matrices.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "specmix/error.hpp"
#include "specmix/instance.hpp"
#include "specmix/matrix.hpp"

namespace specmix {

/// Uniform distribution over every proper completion of a pinning.
struct DistributionTable {
  std::vector<ColouringState> support;
  std::vector<double> mass;

  bool feasible() const { return !support.empty(); }
};

inline DistributionTable enumerate(const ListColouringInstance& inst, const Pinning& p = {},
                                   std::uint64_t cap = kDefaultEnumerationCap) {
  DistributionTable table;
  for_each_colouring(
      inst, p, [&](const std::vector<Colour>& colours) { table.support.push_back(ColouringState{colours}); },
      cap);
  const double m = table.support.empty() ? 0.0 : 1.0 / static_cast<double>(table.support.size());
  table.mass.assign(table.support.size(), m);
  return table;
}

/// Number of proper list colourings extending `p`.
inline std::uint64_t count_colourings(const ListColouringInstance& inst, const Pinning& p = {},
                                      std::uint64_t cap = kDefaultEnumerationCap) {
  std::uint64_t count = 0;
  for_each_colouring(inst, p, [&](const std::vector<Colour>&) { ++count; }, cap);
  return count;
}

struct MarginalVector {
  Vertex vertex = -1;
  std::map<Colour, double> probs;

  double operator()(Colour c) const {
    auto it = probs.find(c);
    return it == probs.end() ? 0.0 : it->second;
  }
};

/// Half the l1 distance, over the union of supports.
inline double tv_distance(const MarginalVector& a, const MarginalVector& b) {
  double s = 0.0;
  auto i = a.probs.begin();
  auto j = b.probs.begin();
  while (i != a.probs.end() || j != b.probs.end()) {
    if (j == b.probs.end() || (i != a.probs.end() && i->first < j->first)) {
      s += std::abs(i->second);
      ++i;
    } else if (i == a.probs.end() || j->first < i->first) {
      s += std::abs(j->second);
      ++j;
    } else {
      s += std::abs(i->second - j->second);
      ++i;
      ++j;
    }
  }
  return 0.5 * s;
}

/// Conditional marginal of v given p.
inline MarginalVector marginal(const ListColouringInstance& inst, const Pinning& p, Vertex v,
                               std::uint64_t cap = kDefaultEnumerationCap) {
  if (!inst.graph().contains(v)) throw ContractError("vertex out of range");
  if (p.contains(v)) throw ContractError("marginal of a pinned vertex");
  std::map<Colour, std::uint64_t> counts;
  std::uint64_t total = 0;
  for_each_colouring(
      inst, p,
      [&](const std::vector<Colour>& colours) {
        ++counts[colours[static_cast<std::size_t>(v)]];
        ++total;
      },
      cap);
  if (total == 0) throw InfeasibleError("pinning " + p.to_string() + " admits no proper colouring");
  MarginalVector out{v, {}};
  for (const auto& [c, k] : counts) out.probs[c] = static_cast<double>(k) / static_cast<double>(total);
  return out;
}

/// mu_v(c) evaluated through the neighbour recursion: remove v, and for the
/// i-th neighbour delete c from the lists of the earlier neighbours. Each
/// inner marginal is computed by enumeration on the modified instance.
inline double marginal_recursion(const ListColouringInstance& inst, Vertex v, Colour c,
                                 std::uint64_t cap = kDefaultEnumerationCap) {
  if (!inst.graph().contains(v)) throw ContractError("vertex out of range");
  if (!inst.has_colour(v, c)) throw ContractError("colour is not in the list of the vertex");

  std::vector<Vertex> keep;
  for (Vertex u = 0; u < inst.size(); ++u)
    if (u != v) keep.push_back(u);
  const Graph rest = inst.graph().induced(keep);
  auto reduced = [&](Vertex u) { return u < v ? u : u - 1; };
  const auto nbrs = inst.graph().neighbours(v);

  // prod_i (1 - mu_{v_i,(G_v, L_{i,b})}(b)); zero once a factor vanishes,
  // since every later sub-instance then has no colouring at all.
  auto weight = [&](Colour b) {
    double prod = 1.0;
    std::vector<ColourList> lists;
    for (Vertex u : keep) lists.push_back(inst.list(u));
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      const Vertex vi = reduced(nbrs[i]);
      if (i > 0) std::erase(lists[static_cast<std::size_t>(reduced(nbrs[i - 1]))], b);
      const ListColouringInstance sub(rest, lists);
      std::uint64_t total = 0;
      std::uint64_t hit = 0;
      for_each_colouring(
          sub, {},
          [&](const std::vector<Colour>& col) {
            ++total;
            if (col[static_cast<std::size_t>(vi)] == b) ++hit;
          },
          cap);
      if (total == 0) {
        throw InfeasibleError("recursion reached an infeasible sub-instance with a nonzero prefix");
      }
      prod *= 1.0 - static_cast<double>(hit) / static_cast<double>(total);
      if (prod == 0.0) return 0.0;
    }
    return prod;
  };

  double denom = 0.0;
  double numer = 0.0;
  for (Colour b : inst.list(v)) {
    const double w = weight(b);
    denom += w;
    if (b == c) numer = w;
  }
  if (denom == 0.0) throw InfeasibleError("instance admits no proper colouring");
  return numer / denom;
}

/// Marginals of every free vertex, and of every free vertex conditional on a
/// second free vertex taking each of its feasible colours.
struct PairwiseMarginals {
  std::vector<Vertex> free;                    // original indices, increasing
  std::vector<ColourList> support;             // Omega_u: colours with positive marginal
  std::vector<std::vector<double>> marginal;   // [u][i] over support[u]
  // cond[u][i][v][j] = mu_v^{p, u <- support[u][i]}(support[v][j])
  std::vector<std::vector<std::vector<std::vector<double>>>> cond;
  std::uint64_t states = 0;

  std::size_t free_count() const { return free.size(); }

  MarginalVector conditional(std::size_t u, std::size_t i, std::size_t v) const {
    MarginalVector m{free[v], {}};
    for (std::size_t j = 0; j < support[v].size(); ++j) {
      if (cond[u][i][v][j] > 0.0) m.probs[support[v][j]] = cond[u][i][v][j];
    }
    return m;
  }
};

inline PairwiseMarginals pairwise_marginals(const ListColouringInstance& inst, const Pinning& p,
                                            std::uint64_t cap = kDefaultEnumerationCap) {
  validate_pinning(inst, p);
  PairwiseMarginals pm;
  for (Vertex v = 0; v < inst.size(); ++v)
    if (!p.contains(v)) pm.free.push_back(v);
  const std::size_t f = pm.free.size();

  std::vector<std::vector<Colour>> states;
  for_each_colouring(inst, p, [&](const std::vector<Colour>& col) { states.push_back(col); }, cap);
  if (states.empty()) throw InfeasibleError("pinning " + p.to_string() + " admits no proper colouring");
  pm.states = states.size();

  // Local colour index per (free vertex, list position) -> support position.
  std::vector<std::vector<int>> to_support(f);
  std::vector<std::vector<std::uint64_t>> count(f);
  for (std::size_t a = 0; a < f; ++a) count[a].assign(inst.list(pm.free[a]).size(), 0);
  std::vector<std::vector<int>> idx(states.size(), std::vector<int>(f));
  for (std::size_t s = 0; s < states.size(); ++s)
    for (std::size_t a = 0; a < f; ++a) {
      const int li = inst.colour_index(pm.free[a], states[s][static_cast<std::size_t>(pm.free[a])]);
      idx[s][a] = li;
      ++count[a][static_cast<std::size_t>(li)];
    }

  pm.support.resize(f);
  pm.marginal.resize(f);
  for (std::size_t a = 0; a < f; ++a) {
    const auto& list = inst.list(pm.free[a]);
    to_support[a].assign(list.size(), -1);
    for (std::size_t li = 0; li < list.size(); ++li) {
      if (count[a][li] > 0) {
        to_support[a][li] = static_cast<int>(pm.support[a].size());
        pm.support[a].push_back(list[li]);
        pm.marginal[a].push_back(static_cast<double>(count[a][li]) / static_cast<double>(states.size()));
      }
    }
  }
  for (auto& row : idx)
    for (std::size_t a = 0; a < f; ++a) row[a] = to_support[a][static_cast<std::size_t>(row[a])];

  // joint counts, then normalise by the conditioning count
  pm.cond.resize(f);
  for (std::size_t a = 0; a < f; ++a) {
    pm.cond[a].resize(pm.support[a].size());
    for (auto& per_colour : pm.cond[a]) {
      per_colour.resize(f);
      for (std::size_t b = 0; b < f; ++b) per_colour[b].assign(pm.support[b].size(), 0.0);
    }
  }
  for (const auto& row : idx)
    for (std::size_t a = 0; a < f; ++a) {
      auto& slot = pm.cond[a][static_cast<std::size_t>(row[a])];
      for (std::size_t b = 0; b < f; ++b) slot[b][static_cast<std::size_t>(row[b])] += 1.0;
    }
  for (std::size_t a = 0; a < f; ++a)
    for (std::size_t i = 0; i < pm.support[a].size(); ++i) {
      const double denom = pm.marginal[a][i] * static_cast<double>(states.size());
      for (std::size_t b = 0; b < f; ++b)
        for (double& x : pm.cond[a][i][b]) x /= std::round(denom);
    }
  return pm;
}

enum class DiagonalConvention {
  psi_zero,     ///< influence matrix: diagonal identically 0
  r_indicator,  ///< R matrix: diagonal 1 iff the (pinned) list has more than one colour
};

struct InfluenceMatrix {
  std::vector<Vertex> order;  // free vertices, original indices
  Matrix entries;
  DiagonalConvention convention = DiagonalConvention::psi_zero;
  /// Colour pair (c1 < c2) attaining entry (u, v), lexicographically smallest
  /// among ties; (c, c) when u has a single feasible colour.
  std::vector<std::vector<std::pair<Colour, Colour>>> argmax;
};

/// Worst-case TV influence of each free u on each free v under pinning p.
/// The maximum ranges over the colours of u that remain feasible; for the R
/// convention those are exactly the colours of the pinned list that extend
/// to a proper colouring.
inline InfluenceMatrix influence_matrix(const ListColouringInstance& inst, const Pinning& p,
                                        DiagonalConvention convention = DiagonalConvention::psi_zero,
                                        std::uint64_t cap = kDefaultEnumerationCap) {
  if (!p.empty() && static_cast<long long>(p.size()) + 2 > inst.size()) {
    throw ContractError("influence matrix needs at least two unpinned vertices");
  }
  const PairwiseMarginals pm = pairwise_marginals(inst, p, cap);
  const std::size_t f = pm.free_count();
  InfluenceMatrix out;
  out.order = pm.free;
  out.convention = convention;
  out.entries = Matrix(f, f);
  out.argmax.assign(f, std::vector<std::pair<Colour, Colour>>(f));

  for (std::size_t u = 0; u < f; ++u) {
    const auto& colours = pm.support[u];
    for (std::size_t v = 0; v < f; ++v) {
      if (u == v) continue;
      double best = -1.0;
      std::pair<Colour, Colour> arg{colours.front(), colours.front()};
      for (std::size_t i = 0; i < colours.size(); ++i)
        for (std::size_t j = i + 1; j < colours.size(); ++j) {
          double d = 0.0;
          for (std::size_t k = 0; k < pm.support[v].size(); ++k) d += std::abs(pm.cond[u][i][v][k] - pm.cond[u][j][v][k]);
          d *= 0.5;
          if (d > best + 1e-14) {
            best = d;
            arg = {colours[i], colours[j]};
          }
        }
      best = std::max(best, 0.0);
      out.entries(u, v) = best;
      out.argmax[u][v] = arg;
    }
  }
  if (convention == DiagonalConvention::r_indicator) {
    for (std::size_t u = 0; u < f; ++u) {
      std::size_t pinned_list = 0;
      const Vertex ou = pm.free[u];
      for (Colour c : inst.list(ou)) {
        bool removed = false;
        for (Vertex w : inst.graph().neighbours(ou))
          if (p.contains(w) && p.at(w) == c) removed = true;
        if (!removed) ++pinned_list;
      }
      out.entries(u, u) = pinned_list > 1 ? 1.0 : 0.0;
      if (pinned_list > 1) {
        const auto& l = inst.list(ou);
        out.argmax[u][u] = {l.front(), l.back()};
      }
    }
  }
  return out;
}

/// R_{G,L}: influence matrix of the unpinned instance with the indicator diagonal.
inline InfluenceMatrix r_matrix(const ListColouringInstance& inst, std::uint64_t cap = kDefaultEnumerationCap) {
  return influence_matrix(inst, {}, DiagonalConvention::r_indicator, cap);
}

}  // namespace specmix
