#pragma once

// Invariant checks run per instance by `specmix verify` and the acceptance
// driver. Each check reports a value, the bound it must not exceed, and the
// verdict value <= bound.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "specmix/bounds.hpp"
#include "specmix/exact.hpp"
#include "specmix/glauber.hpp"
#include "specmix/instance.hpp"
#include "specmix/localwalk.hpp"
#include "specmix/matrix.hpp"

namespace specmix {

struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

inline Check make_check(std::string name, double value, double bound) {
  return {std::move(name), value, bound, value <= bound};
}

struct Tolerances {
  double enumeration = 1e-12;
  double balance = 1e-10;
  double spectral = 1e-9;
  double gelfand = 1e-3;
};

inline bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

/// Marginal recursion against enumeration, over every vertex and colour.
inline std::vector<Check> oracle_checks(const ListColouringInstance& inst, const Tolerances& tol = {}) {
  double worst = 0.0;
  double sum_residual = 0.0;
  for (Vertex v = 0; v < inst.size(); ++v) {
    const MarginalVector m = marginal(inst, {}, v);
    double s = 0.0;
    for (const auto& [c, p] : m.probs) s += p;
    sum_residual = std::max(sum_residual, std::abs(s - 1.0));
    for (Colour c : inst.list(v)) worst = std::max(worst, std::abs(marginal_recursion(inst, v, c) - m(c)));
  }
  return {make_check("marginal_recursion_residual", worst, tol.enumeration),
          make_check("marginal_sum_residual", sum_residual, tol.enumeration)};
}

/// Calls visit(p) for every feasible pinning with |p| <= n - 2.
template <class Visitor>
void for_each_feasible_pinning(const ListColouringInstance& inst, Visitor&& visit) {
  for (int k = 0; k + 2 <= inst.size(); ++k)
    for_each_pinning(inst, k, [&](const Pinning& p) {
      if (is_feasible(inst, p)) visit(p);
    });
}

struct LocalChainSummary {
  std::size_t pinnings = 0;
  double row_sum = 0.0;
  double stationary_sum = 0.0;
  double balance = 0.0;
  double lazy_identity = 0.0;
  double p_excess = -1.0;  // max lambda2(P) - rho/(m-1)
  double q_excess = -1.0;  // max lambda2(Q) - (rho+1)/m
  double lower_excess = -1.0;  // max |lambda2(Q)|^t - d(t)
  double upper_excess = -1.0;  // max d(t) - ||A^{t-1}||_1
};

inline LocalChainSummary summarize_local_chains(const ListColouringInstance& inst, int t_max = 10) {
  LocalChainSummary s;
  for_each_feasible_pinning(inst, [&](const Pinning& p) {
    const LocalChainReport r = verify_local_chain(inst, p, t_max);
    ++s.pinnings;
    const double m = r.free_count;
    s.row_sum = std::max(s.row_sum, r.row_sum_residual);
    s.stationary_sum = std::max(s.stationary_sum, r.stationary_sum_residual);
    s.balance = std::max(s.balance, r.balance_residual);
    s.lazy_identity = std::max(s.lazy_identity, r.lazy_identity_residual);
    s.p_excess = std::max(s.p_excess, r.lambda2_p - r.rho / (m - 1.0));
    s.q_excess = std::max(s.q_excess, r.lambda2_q - (r.rho + 1.0) / m);
    for (const auto& st : r.steps) {
      s.lower_excess = std::max(s.lower_excess, st.lower - st.d);
      s.upper_excess = std::max(s.upper_excess, st.d - st.upper);
    }
  });
  return s;
}

inline std::vector<Check> local_chain_checks(const ListColouringInstance& inst, int t_max = 10,
                                             const Tolerances& tol = {}) {
  const LocalChainSummary s = summarize_local_chains(inst, t_max);
  return {make_check("local_row_sum_residual", s.row_sum, tol.enumeration),
          make_check("local_stationary_sum_residual", s.stationary_sum, tol.enumeration),
          make_check("local_detailed_balance", s.balance, tol.balance),
          make_check("lazy_lambda2_identity", s.lazy_identity, tol.spectral),
          make_check("lambda2_P_minus_rho_over_m_minus_1", s.p_excess, tol.spectral),
          make_check("lambda2_Q_minus_rho_plus_1_over_m", s.q_excess, tol.spectral),
          make_check("lambda2_Q_pow_t_minus_d_t", s.lower_excess, tol.spectral),
          make_check("d_t_minus_norm_A_pow_t_minus_1", s.upper_excess, tol.spectral)};
}

struct GlobalSummary {
  std::size_t states = 0;
  double down_up_diff = 0.0;
  double min_eigenvalue = 0.0;
  double top_eigenvalue_residual = 0.0;
  double gap = 0.0;
  GapBound bound;
  SpectralIndependenceCertificate certificate;
  double absolute_gap = 0.0;
  bool irreducible = false;
  unsigned long long t_star = 0;
  double tv_at_t_star = 0.0;
};

inline GlobalSummary summarize_global(const ListColouringInstance& inst, double eps = 0.25) {
  GlobalSummary g;
  const StateSpace space = state_space(inst);
  g.states = space.states.size();
  const Matrix p = transition_matrix(inst, space);
  g.down_up_diff = p.max_abs_diff(down_up_matrix(inst, space));
  const SpectrumReport spec = spectrum(p);
  g.min_eigenvalue = spec.eigenvalues.back();
  g.top_eigenvalue_residual = std::abs(spec.eigenvalues.front() - 1.0);
  g.gap = spec.gap;
  g.absolute_gap = spec.absolute_gap;
  g.irreducible = spec.irreducible();
  g.certificate = certify_spectral_independence(inst);
  g.bound = theoretical_gap_bound(g.certificate, inst.size());
  if (g.irreducible) {
    const double mu_min = 1.0 / static_cast<double>(g.states);
    g.t_star = static_cast<unsigned long long>(std::ceil(std::log(1.0 / (eps * mu_min)) / g.absolute_gap));
    g.tv_at_t_star = worst_start_tv(p, g.t_star);
  }
  return g;
}

inline std::vector<Check> global_checks(const GlobalSummary& g, double eps = 0.25, const Tolerances& tol = {}) {
  std::vector<Check> out{
      make_check("down_up_minus_glauber", g.down_up_diff, tol.enumeration),
      make_check("glauber_negative_eigenvalue", -g.min_eigenvalue, tol.spectral),
      make_check("glauber_top_eigenvalue_residual", g.top_eigenvalue_residual, 1e-10),
      make_check("gap_bound_minus_gap", g.bound.value - g.gap, tol.spectral),
  };
  if (g.irreducible) out.push_back(make_check("worst_tv_at_t_star", g.tv_at_t_star, eps));
  return out;
}

/// Norm and Gelfand checks on the influence matrix of every feasible pinning.
struct SpectralUtilitySummary {
  std::size_t matrices = 0;
  double norm1_excess = -1.0;    // max rho - ||M||_1
  double norminf_excess = -1.0;  // max rho - ||M||_inf
  double gelfand_gap = 0.0;      // max | ||M^64||_1^{1/64} - rho |
};

inline double gelfand_estimate(const Matrix& m, unsigned long long k = 64) {
  return std::pow(induced_norm(power(m, k), NormKind::one), 1.0 / static_cast<double>(k));
}

inline SpectralUtilitySummary summarize_spectral_utilities(const ListColouringInstance& inst) {
  SpectralUtilitySummary s;
  for_each_feasible_pinning(inst, [&](const Pinning& p) {
    const Matrix psi = influence_matrix(inst, p).entries;
    const double rho = spectral_radius(psi).value;
    ++s.matrices;
    s.norm1_excess = std::max(s.norm1_excess, rho - induced_norm(psi, NormKind::one));
    s.norminf_excess = std::max(s.norminf_excess, rho - induced_norm(psi, NormKind::infinity));
    s.gelfand_gap = std::max(s.gelfand_gap, std::abs(gelfand_estimate(psi) - rho));
  });
  return s;
}

inline std::vector<Check> spectral_utility_checks(const SpectralUtilitySummary& s, const Tolerances& tol = {}) {
  return {make_check("rho_minus_norm_1", s.norm1_excess, tol.spectral),
          make_check("rho_minus_norm_inf", s.norminf_excess, tol.spectral),
          make_check("gelfand_64_minus_rho", s.gelfand_gap, tol.gelfand)};
}

/// Row sums of R, recursive and SAW bounds against the exact R, SAW layers.
inline std::vector<Check> bounds_checks(const ListColouringInstance& inst, const ColouringParams& params,
                                        const Tolerances& tol = {}) {
  std::vector<Check> out;
  const ConditionReport cond = verify_condition(inst, params);
  out.push_back(make_check("condition_worst_margin_negated", -cond.worst_margin, 0.0));
  out.push_back(make_check("condition_violations", cond.ok() ? 0.0 : 1.0, 0.0));

  const OneToAllReport ota = one_to_all_check(inst, params, tol.spectral);
  double worst_row = 0.0;
  for (double s : ota.row_sums) worst_row = std::max(worst_row, s);
  out.push_back(make_check("R_row_sum_minus_min_bound", worst_row - ota.bound, tol.spectral));

  const InfluenceMatrix r = r_matrix(inst);
  RecursiveInfluence rec(params);
  double rec_deficit = -1.0;
  double saw_deficit = -1.0;
  double layer_excess = -1.0;
  for (Vertex u = 0; u < inst.size(); ++u) {
    const SAWBound saw = saw_influence_bound(inst, u, params);
    for (std::size_t l = 0; l < saw.layer_sums.size(); ++l)
      layer_excess = std::max(layer_excess, saw.layer_sums[l] - std::pow(params.eps1, static_cast<double>(l)));
    for (Vertex v = 0; v < inst.size(); ++v) {
      const double exact = r.entries(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
      rec_deficit = std::max(rec_deficit, exact - rec(inst, u, v).value);
      if (u != v) saw_deficit = std::max(saw_deficit, exact - saw.per_target[static_cast<std::size_t>(v)]);
    }
  }
  out.push_back(make_check("R_minus_recursive_bound", rec_deficit, tol.spectral));
  out.push_back(make_check("R_minus_saw_bound", saw_deficit, tol.spectral));
  out.push_back(make_check("saw_layer_sum_minus_eps1_pow", layer_excess, tol.enumeration));
  return out;
}

}  // namespace specmix
