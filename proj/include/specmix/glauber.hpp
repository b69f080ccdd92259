#pragma once

// Glauber dynamics for uniform list colourings: a seeded sampler, the exact
// transition matrix, the down-up walk on the colouring complex, spectral
// independence certificates, and the gap / mixing-time bounds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "specmix/error.hpp"
#include "specmix/exact.hpp"
#include "specmix/instance.hpp"
#include "specmix/matrix.hpp"

namespace specmix {

inline constexpr std::size_t kGlauberStateCap = 5000;

/// SplitMix64 in counter form: the k-th output is mix(seed + k * gamma).
/// `below(n)` reduces modulo n; the bias is at most n / 2^64, which is
/// under 2^-53 for every n <= 2048.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31U);
  }

  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw ContractError("empty range");
    return next() % n;
  }

  std::uint64_t state() const { return state_; }
  friend bool operator==(const SplitMix64&, const SplitMix64&) = default;

 private:
  std::uint64_t state_;
};

/// Colours of L(v) not used by any neighbour of v in `colours`. The current
/// colour of v is included.
inline ColourList available_colours(const ListColouringInstance& inst, const std::vector<Colour>& colours, Vertex v) {
  ColourList out;
  for (Colour c : inst.list(v)) {
    bool used = false;
    for (Vertex w : inst.graph().neighbours(v)) {
      if (colours[static_cast<std::size_t>(w)] == c) {
        used = true;
        break;
      }
    }
    if (!used) out.push_back(c);
  }
  return out;
}

struct GlauberChain {
  ListColouringInstance instance;
  ColouringState current;
  SplitMix64 rng;
  std::uint64_t step_count = 0;

  /// Starts from `start`, or from the first colouring in enumeration order.
  static GlauberChain start(ListColouringInstance inst, std::uint64_t seed,
                            std::optional<ColouringState> start = std::nullopt) {
    ColouringState s;
    if (start) {
      s = ColouringState::checked(inst, start->colours);
    } else {
      struct Found {};
      try {
        for_each_colouring(inst, {}, [&](const std::vector<Colour>& c) {
          s.colours = c;
          throw Found{};
        });
      } catch (const Found&) {
      }
      if (s.colours.size() != static_cast<std::size_t>(inst.size())) {
        throw InfeasibleError("instance admits no proper colouring");
      }
    }
    return GlauberChain{std::move(inst), std::move(s), SplitMix64(seed), 0};
  }
};

/// Resamples v uniformly from its available colours using one RNG draw.
inline void resample_vertex(GlauberChain& chain, Vertex v) {
  const ColourList avail = available_colours(chain.instance, chain.current.colours, v);
  if (avail.empty()) throw ContractError("chain state is not proper");
  chain.current.colours[static_cast<std::size_t>(v)] = avail[chain.rng.below(avail.size())];
}

/// One heat-bath update: a uniform vertex, then a uniform available colour.
inline GlauberChain& glauber_step(GlauberChain& chain) {
  if (chain.instance.size() > 0) {
    const auto v = static_cast<Vertex>(chain.rng.below(static_cast<std::uint64_t>(chain.instance.size())));
    resample_vertex(chain, v);
  }
  ++chain.step_count;
  return chain;
}

inline GlauberChain glauber_step(const GlauberChain& chain) {
  GlauberChain next = chain;
  glauber_step(next);
  return next;
}

/// Proper colourings in enumeration (lexicographic) order with an index map.
struct StateSpace {
  std::vector<std::vector<Colour>> states;
  std::map<std::vector<Colour>, std::size_t> index;
};

inline StateSpace state_space(const ListColouringInstance& inst, std::size_t state_cap = kGlauberStateCap,
                              std::uint64_t cap = kDefaultEnumerationCap) {
  StateSpace s;
  for_each_colouring(
      inst, {},
      [&](const std::vector<Colour>& c) {
        if (s.states.size() >= state_cap) throw CapacityError("state space exceeds the matrix cap");
        s.index.emplace(c, s.states.size());
        s.states.push_back(c);
      },
      cap);
  if (s.states.empty()) throw InfeasibleError("instance admits no proper colouring");
  return s;
}

/// Exact Glauber transition matrix over the proper colourings.
inline Matrix transition_matrix(const ListColouringInstance& inst, const StateSpace& space) {
  const std::size_t n_states = space.states.size();
  const double n = inst.size();
  Matrix p(n_states, n_states);
  for (std::size_t x = 0; x < n_states; ++x) {
    std::vector<Colour> y = space.states[x];
    for (Vertex v = 0; v < inst.size(); ++v) {
      const ColourList avail = available_colours(inst, space.states[x], v);
      const Colour keep = y[static_cast<std::size_t>(v)];
      for (Colour c : avail) {
        y[static_cast<std::size_t>(v)] = c;
        p(x, space.index.at(y)) += 1.0 / (n * static_cast<double>(avail.size()));
      }
      y[static_cast<std::size_t>(v)] = keep;
    }
  }
  return p;
}

inline Matrix transition_matrix(const ListColouringInstance& inst, std::size_t state_cap = kGlauberStateCap) {
  return transition_matrix(inst, state_space(inst, state_cap));
}

/// Down-up walk on the colouring complex. Maximal faces are the proper
/// colourings, weighted by mu; an (n-1)-face is a colouring with one vertex
/// left out, weighted by the sum over the maximal faces containing it.
/// P(a, a) = sum_{t in a} Pi(a) / (n Pi(t)); P(a, b) = Pi(b) / (n Pi(a cap b)).
inline Matrix down_up_matrix(const ListColouringInstance& inst, const StateSpace& space) {
  const std::size_t n_states = space.states.size();
  const int n = inst.size();
  const double weight = 1.0 / static_cast<double>(n_states);
  auto face = [&](const std::vector<Colour>& s, Vertex v) {
    std::vector<Colour> f = s;
    f[static_cast<std::size_t>(v)] = -1;
    return std::make_pair(v, std::move(f));
  };
  std::map<std::pair<Vertex, std::vector<Colour>>, double> face_weight;
  std::map<std::pair<Vertex, std::vector<Colour>>, std::vector<std::size_t>> cofaces;
  for (std::size_t x = 0; x < n_states; ++x)
    for (Vertex v = 0; v < n; ++v) {
      auto f = face(space.states[x], v);
      face_weight[f] += weight;
      cofaces[f].push_back(x);
    }

  Matrix p(n_states, n_states);
  for (std::size_t a = 0; a < n_states; ++a)
    for (Vertex v = 0; v < n; ++v) {
      const auto f = face(space.states[a], v);
      const double pt = face_weight.at(f);
      for (std::size_t b : cofaces.at(f)) p(a, b) += weight / (static_cast<double>(n) * pt);
    }
  return p;
}

inline Matrix down_up_matrix(const ListColouringInstance& inst, std::size_t state_cap = kGlauberStateCap) {
  return down_up_matrix(inst, state_space(inst, state_cap));
}

struct SpectrumReport {
  std::vector<double> eigenvalues;
  double gap = 0.0;
  double absolute_gap = 0.0;
  bool irreducible() const { return absolute_gap > 1e-12; }
};

/// Spectrum of a chain reversible with respect to the uniform distribution.
inline SpectrumReport spectrum(const Matrix& p) {
  SpectrumReport r;
  const std::vector<double> pi(p.rows(), 1.0 / static_cast<double>(p.rows()));
  r.eigenvalues = symmetric_eigenvalues(p, pi);
  if (r.eigenvalues.size() < 2) {
    r.gap = 1.0;
    r.absolute_gap = 1.0;
    return r;
  }
  r.gap = 1.0 - r.eigenvalues[1];
  double star = 0.0;
  for (std::size_t i = 1; i < r.eigenvalues.size(); ++i) star = std::max(star, std::abs(r.eigenvalues[i]));
  r.absolute_gap = 1.0 - star;
  return r;
}

struct SpectralIndependenceCertificate {
  int n = 0;
  std::vector<double> etas;          // eta_k, k = 0..n-2
  std::vector<Pinning> argmax;       // pinning attaining eta_k
  std::vector<std::size_t> pinnings; // feasible pinnings examined per k
  double C = 0.0;
  double eta = 0.0;
};

/// Calls visit(p) for every pinning of exactly k vertices with colours from
/// the vertex lists (feasible or not), in lexicographic order.
template <class Visitor>
void for_each_pinning(const ListColouringInstance& inst, int k, Visitor&& visit) {
  const int n = inst.size();
  if (k < 0 || k > n) return;
  std::vector<Vertex> subset(static_cast<std::size_t>(k));
  auto choose = [&](auto&& self, int start, int depth) -> void {
    if (depth == k) {
      Pinning p;
      auto assign = [&](auto&& inner, int i) -> void {
        if (i == k) {
          visit(std::as_const(p));
          return;
        }
        const Vertex v = subset[static_cast<std::size_t>(i)];
        for (Colour c : inst.list(v)) {
          p.assign(v, c);
          inner(inner, i + 1);
        }
      };
      assign(assign, 0);
      return;
    }
    for (int v = start; v < n; ++v) {
      subset[static_cast<std::size_t>(depth)] = v;
      self(self, v + 1, depth + 1);
    }
  };
  choose(choose, 0, 0);
}

/// eta_k = max over feasible pinnings of size k of rho(Psi^p).
inline SpectralIndependenceCertificate certify_spectral_independence(const ListColouringInstance& inst,
                                                                     std::uint64_t cap = kDefaultEnumerationCap) {
  if (!is_feasible(inst, {}, cap)) throw InfeasibleError("instance admits no proper colouring");
  SpectralIndependenceCertificate cert;
  cert.n = inst.size();
  for (int k = 0; k + 2 <= cert.n; ++k) {
    double best = 0.0;
    Pinning arg;
    std::size_t count = 0;
    bool first = true;
    for_each_pinning(inst, k, [&](const Pinning& p) {
      if (!is_feasible(inst, p, cap)) return;
      ++count;
      const double rho = spectral_radius(influence_matrix(inst, p, DiagonalConvention::psi_zero, cap).entries).value;
      if (first || rho > best + 1e-14) {
        best = rho;
        arg = p;
        first = false;
      }
    });
    cert.etas.push_back(best);
    cert.argmax.push_back(arg);
    cert.pinnings.push_back(count);
    cert.C = std::max(cert.C, best);
    cert.eta = std::max(cert.eta, best / static_cast<double>(cert.n - k - 1));
  }
  return cert;
}

struct GapBound {
  double value = 0.0;
  bool vacuous = false;
};

/// (1/n) prod_{k=0}^{n-2} (1 - eta_k/(n-k-1)); vacuous when a factor is <= 0.
inline GapBound theoretical_gap_bound(std::span<const double> etas, int n) {
  if (n < 1) throw ParameterError("gap bound needs n >= 1");
  if (static_cast<int>(etas.size()) < n - 1) throw ParameterError("gap bound needs eta_k for k = 0..n-2");
  double prod = 1.0;
  for (int k = 0; k + 2 <= n; ++k) {
    const double factor = 1.0 - etas[static_cast<std::size_t>(k)] / static_cast<double>(n - k - 1);
    if (factor <= 0.0) return {0.0, true};
    prod *= factor;
  }
  return {prod / static_cast<double>(n), false};
}

inline GapBound theoretical_gap_bound(const SpectralIndependenceCertificate& cert, int n) {
  return theoretical_gap_bound(cert.etas, n);
}

/// n^{1+2C} / (1-eta)^{2+2C} * log(1/(eps mu_min)).
inline double mixing_time_bound(double C, double eta, int n, double mu_min, double eps) {
  if (!(C >= 0.0)) throw ParameterError("C must be nonnegative");
  if (!(eta >= 0.0 && eta < 1.0)) throw ParameterError("eta must lie in [0, 1)");
  if (n < 1) throw ParameterError("n must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  if (!(mu_min > 0.0 && mu_min <= 1.0)) throw ParameterError("mu_min must lie in (0, 1]");
  const double nn = n;
  return std::pow(nn, 1.0 + 2.0 * C) / std::pow(1.0 - eta, 2.0 + 2.0 * C) * std::log(1.0 / (eps * mu_min));
}

struct ColouringMixingBound {
  double q_variant = 0.0;     // (9 e^5 n)^{2+9/delta} log(q/eps)
  double list_variant = 0.0;  // (9 e^5 n)^{1+9/delta} log(M/eps)
};

inline ColouringMixingBound colouring_mixing_bound(int n, double delta, double q_or_m, double eps) {
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  if (n < 1) throw ParameterError("n must be positive");
  if (!(eps > 0.0)) throw ParameterError("eps must be positive");
  const double base = 9.0 * std::exp(5.0) * n;
  const double log_term = std::log(q_or_m / eps);
  return {std::pow(base, 2.0 + 9.0 / delta) * log_term, std::pow(base, 1.0 + 9.0 / delta) * log_term};
}

struct MixingEstimate {
  std::vector<int> t_values;
  std::vector<double> tv_values;
};

/// Worst-start TV distance of the rows of `pt` from the uniform distribution.
inline double worst_start_tv(const Matrix& pt) {
  const double u = 1.0 / static_cast<double>(pt.cols());
  double worst = 0.0;
  for (std::size_t x = 0; x < pt.rows(); ++x) {
    double s = 0.0;
    for (double v : pt.row(x)) s += std::abs(v - u);
    worst = std::max(worst, 0.5 * s);
  }
  return worst;
}

inline double worst_start_tv(const Matrix& p, unsigned long long t) { return worst_start_tv(power(p, t)); }

inline MixingEstimate empirical_tv_curve(const Matrix& p, int t_max) {
  MixingEstimate est;
  Matrix pt = Matrix::identity(p.rows());
  for (int t = 0; t <= t_max; ++t) {
    est.t_values.push_back(t);
    est.tv_values.push_back(worst_start_tv(pt));
    pt = pt * p;
  }
  return est;
}

inline MixingEstimate empirical_tv_curve(const ListColouringInstance& inst, int t_max,
                                         std::size_t state_cap = kGlauberStateCap) {
  return empirical_tv_curve(transition_matrix(inst, state_cap), t_max);
}

}  // namespace specmix
