#pragma once

// Local random walks on (vertex, colour) pairs under a pinning, the lazy
// variant, the coupling matrix, and the chain of spectral inequalities
// relating them to the influence matrix.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "specmix/error.hpp"
#include "specmix/exact.hpp"
#include "specmix/instance.hpp"
#include "specmix/matrix.hpp"

namespace specmix {

inline constexpr std::size_t kLocalWalkStateCap = 2000;

struct LocalState {
  Vertex vertex;
  Colour colour;
  friend bool operator==(const LocalState&, const LocalState&) = default;
};

struct LocalWalk {
  std::vector<LocalState> states;
  Matrix transition;
  std::vector<double> stationary;
  int free_count = 0;
};

struct LazyWalk {
  LocalWalk base;
  Matrix transition;
};

struct CouplingMatrix {
  std::vector<Vertex> order;
  Matrix matrix;
};

namespace detail {

inline int checked_free_count(const ListColouringInstance& inst, const Pinning& p) {
  validate_pinning(inst, p);
  const int free = inst.size() - static_cast<int>(p.size());
  if (free < 2) throw ContractError("local walk needs at least two free vertices");
  return free;
}

inline LocalWalk local_walk_from(const PairwiseMarginals& pm) {
  LocalWalk walk;
  walk.free_count = static_cast<int>(pm.free_count());
  const double m = walk.free_count;
  std::vector<std::size_t> offset;
  for (std::size_t u = 0; u < pm.free_count(); ++u) {
    offset.push_back(walk.states.size());
    for (std::size_t i = 0; i < pm.support[u].size(); ++i) {
      walk.states.push_back({pm.free[u], pm.support[u][i]});
      walk.stationary.push_back(pm.marginal[u][i] / m);
    }
  }
  if (walk.states.size() > kLocalWalkStateCap) throw CapacityError("local walk exceeds the state cap");
  walk.transition = Matrix(walk.states.size(), walk.states.size());
  for (std::size_t u = 0; u < pm.free_count(); ++u)
    for (std::size_t i = 0; i < pm.support[u].size(); ++i)
      for (std::size_t v = 0; v < pm.free_count(); ++v) {
        if (u == v) continue;
        for (std::size_t j = 0; j < pm.support[v].size(); ++j)
          walk.transition(offset[u] + i, offset[v] + j) = pm.cond[u][i][v][j] / (m - 1.0);
      }
  return walk;
}

}  // namespace detail

/// P((u,i),(v,j)) = [u != v] / (n - |p| - 1) * mu_v^{p, u<-i}(j) over the
/// pairs with positive conditional marginal.
inline LocalWalk build_local_walk(const ListColouringInstance& inst, const Pinning& p,
                                  std::uint64_t cap = kDefaultEnumerationCap) {
  detail::checked_free_count(inst, p);
  return detail::local_walk_from(pairwise_marginals(inst, p, cap));
}

inline LazyWalk lazy(const LocalWalk& walk) {
  const double m = walk.free_count;
  LazyWalk out{walk, walk.transition * ((m - 1.0) / m)};
  for (std::size_t i = 0; i < out.transition.rows(); ++i) out.transition(i, i) += 1.0 / m;
  return out;
}

/// Second largest eigenvalue of a matrix reversible with respect to `pi`.
inline double lambda2(const Matrix& transition, std::span<const double> pi) {
  const auto eig = symmetric_eigenvalues(transition, pi);
  if (eig.size() < 2) throw ContractError("second eigenvalue of a chain with one state");
  return eig[1];
}
inline double lambda2(const LocalWalk& walk) { return lambda2(walk.transition, walk.stationary); }
inline double lambda2(const LazyWalk& walk) { return lambda2(walk.transition, walk.base.stationary); }

inline CouplingMatrix coupling_matrix_from(const InfluenceMatrix& psi) {
  const double m = static_cast<double>(psi.order.size());
  CouplingMatrix out{psi.order, psi.entries.transpose()};
  out.matrix += Matrix::identity(psi.order.size());
  out.matrix *= 1.0 / m;
  return out;
}

/// A = (Psi^T + I) / (n - |p|).
inline CouplingMatrix coupling_matrix(const ListColouringInstance& inst, const Pinning& p,
                                      std::uint64_t cap = kDefaultEnumerationCap) {
  detail::checked_free_count(inst, p);
  return coupling_matrix_from(influence_matrix(inst, p, DiagonalConvention::psi_zero, cap));
}

/// max over ordered state pairs of TV(M(x, .), M(y, .)).
inline double max_row_tv(const Matrix& m) {
  double worst = 0.0;
  for (std::size_t x = 0; x < m.rows(); ++x)
    for (std::size_t y = x + 1; y < m.rows(); ++y) {
      double s = 0.0;
      for (std::size_t k = 0; k < m.cols(); ++k) s += std::abs(m(x, k) - m(y, k));
      worst = std::max(worst, 0.5 * s);
    }
  return worst;
}

struct CouplingStep {
  int t = 0;
  double lower = 0.0;  // |lambda2(Q)|^t
  double d = 0.0;      // exact max_{x,y} TV(Q^t(x,.), Q^t(y,.))
  double upper = 0.0;  // ||A^{t-1}||_1
  bool lower_ok = false;
  bool upper_ok = false;
};

struct LocalChainReport {
  Pinning pinning;
  int free_count = 0;
  std::size_t state_count = 0;
  double row_sum_residual = 0.0;
  double stationary_sum_residual = 0.0;
  double balance_residual = 0.0;
  double lambda2_p = 0.0;
  double lambda2_q = 0.0;
  double rho = 0.0;
  double lazy_identity_residual = 0.0;  // |lambda2(Q) - ((m-1) lambda2(P) + 1)/m|
  bool balance_ok = false;
  bool lazy_identity_ok = false;
  bool q_bound_ok = false;  // lambda2(Q) <= (rho + 1)/m
  bool p_bound_ok = false;  // lambda2(P) <= rho/(m - 1)
  std::vector<CouplingStep> steps;

  bool ok() const {
    return balance_ok && lazy_identity_ok && q_bound_ok && p_bound_ok &&
           std::all_of(steps.begin(), steps.end(), [](const CouplingStep& s) { return s.lower_ok && s.upper_ok; });
  }
};

struct LocalChainTolerances {
  double balance = 1e-10;
  double spectral = 1e-9;
};

inline LocalChainReport verify_local_chain(const ListColouringInstance& inst, const Pinning& p, int t_max = 10,
                                           LocalChainTolerances tol = {},
                                           std::uint64_t cap = kDefaultEnumerationCap) {
  detail::checked_free_count(inst, p);
  const PairwiseMarginals pm = pairwise_marginals(inst, p, cap);
  const LocalWalk walk = detail::local_walk_from(pm);
  const LazyWalk q = lazy(walk);
  const InfluenceMatrix psi = influence_matrix(inst, p, DiagonalConvention::psi_zero, cap);
  const CouplingMatrix a = coupling_matrix_from(psi);
  const double m = walk.free_count;

  LocalChainReport r;
  r.pinning = p;
  r.free_count = walk.free_count;
  r.state_count = walk.states.size();
  for (std::size_t i = 0; i < walk.transition.rows(); ++i) {
    double s = 0.0;
    for (double x : walk.transition.row(i)) s += x;
    r.row_sum_residual = std::max(r.row_sum_residual, std::abs(s - 1.0));
  }
  double pi_sum = 0.0;
  for (double x : walk.stationary) pi_sum += x;
  r.stationary_sum_residual = std::abs(pi_sum - 1.0);
  r.balance_residual = detailed_balance_residual(walk.transition, walk.stationary);
  r.balance_ok = r.balance_residual <= tol.balance;

  r.lambda2_p = lambda2(walk);
  r.lambda2_q = lambda2(q);
  r.rho = spectral_radius(psi.entries).value;
  r.lazy_identity_residual = std::abs(r.lambda2_q - ((m - 1.0) * r.lambda2_p + 1.0) / m);
  r.lazy_identity_ok = r.lazy_identity_residual <= tol.spectral;
  r.q_bound_ok = r.lambda2_q <= (r.rho + 1.0) / m + tol.spectral;
  r.p_bound_ok = r.lambda2_p <= r.rho / (m - 1.0) + tol.spectral;

  Matrix qt = q.transition;
  Matrix at = Matrix::identity(a.matrix.rows());
  const double lam = std::abs(r.lambda2_q);
  for (int t = 1; t <= t_max; ++t) {
    CouplingStep s;
    s.t = t;
    s.lower = std::pow(lam, t);
    s.d = max_row_tv(qt);
    s.upper = induced_norm(at, NormKind::one);
    s.lower_ok = s.lower <= s.d + tol.spectral;
    s.upper_ok = s.d <= s.upper + tol.spectral;
    r.steps.push_back(s);
    qt = qt * q.transition;
    at = at * a.matrix;
  }
  return r;
}

}  // namespace specmix
