#pragma once

// Command implementations behind the `specmix` executable. Each command
// writes JSON lines (or CSV for curves) to a stream and returns the exit
// code: 0 when every check passes, 2 when a mathematical check fails,
// 1 on usage, input or capacity errors.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "specmix/bounds.hpp"
#include "specmix/corpus.hpp"
#include "specmix/error.hpp"
#include "specmix/exact.hpp"
#include "specmix/glauber.hpp"
#include "specmix/instance.hpp"
#include "specmix/json_io.hpp"
#include "specmix/localwalk.hpp"
#include "specmix/suite.hpp"

namespace specmix {

inline constexpr const char* kVersion = "0.1.0";

/// Parses "v=c,v=c,..." against an instance. Errors carry the character
/// position of the offending entry.
inline Pinning parse_pinning(const std::string& spec, const ListColouringInstance& inst) {
  Pinning p;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t end = spec.find(',', pos);
    if (end == std::string::npos) end = spec.size();
    const std::string item = spec.substr(pos, end - pos);
    auto fail = [&](const std::string& why) {
      throw ParseError("pinning entry '" + item + "' at position " + std::to_string(pos) + ": " + why);
    };
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail("expected v=c");
    long long v = 0;
    long long c = 0;
    try {
      std::size_t used = 0;
      v = std::stoll(item.substr(0, eq), &used);
      if (used != eq) fail("vertex is not an integer");
      const std::string cs = item.substr(eq + 1);
      c = std::stoll(cs, &used);
      if (used != cs.size()) fail("colour is not an integer");
    } catch (const std::logic_error&) {
      fail("expected integers v=c");
    }
    if (v < 0 || v >= inst.size()) fail("unknown vertex " + std::to_string(v));
    if (p.contains(static_cast<Vertex>(v))) fail("duplicate vertex " + std::to_string(v));
    if (!inst.has_colour(static_cast<Vertex>(v), static_cast<Colour>(c))) {
      fail("colour " + std::to_string(c) + " is not in the list of vertex " + std::to_string(v));
    }
    p.assign(static_cast<Vertex>(v), static_cast<Colour>(c));
    pos = end + 1;
  }
  return p;
}

struct RunConfig {
  std::string subcommand;
  std::string instance_path;
  std::string pin_spec;
  std::string corpus;
  std::string family;
  std::string out_path;
  std::string convention = "psi";
  std::string grid = "3:1000:log";
  std::string format = "json";
  std::uint64_t seed = 0;
  std::uint64_t steps = 0;
  int exact_curve = -1;
  int t_max = 10;
  double delta = 0.23;
  int chi = 0;  // 0: maximum degree of the instance
  int saw_source = -1;
  std::optional<std::pair<int, int>> pair;
  int delta_min = 4;
  int delta_max = 30;
  std::uint64_t cap = kDefaultEnumerationCap;
  std::size_t matrix_cap = kGlauberStateCap;
  Tolerances tol;
  bool golden = false;

  void validate() const {
    if (cap == 0 || matrix_cap == 0) throw ParameterError("caps must be positive");
    for (double t : {tol.enumeration, tol.balance, tol.spectral, tol.gelfand})
      if (!(t > 0.0 && t <= 1e-3)) throw ParameterError("tolerances must lie in (0, 1e-3]");
    if (format != "json" && format != "csv") throw ParameterError("format must be json or csv");
  }
};

/// Applies SPECMIX_CAP from the environment, if set.
inline void apply_environment(RunConfig& config) {
  if (const char* env = std::getenv("SPECMIX_CAP")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size() || v == 0) throw ParseError("");
      config.cap = v;
    } catch (const std::exception&) {
      throw ParseError(std::string("SPECMIX_CAP must be a positive integer, got '") + env + "'");
    }
  }
}

namespace detail {

inline json checks_json(const std::vector<Check>& checks) {
  json arr = json::array();
  for (const auto& c : checks) arr.push_back({{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"pass", c.pass}});
  return arr;
}

class Emitter {
 public:
  Emitter(std::ostream& out, const RunConfig& config) : out_(out), config_(config) {}

  void report(const std::string& command, json inputs, json result, const std::vector<Check>& checks,
              std::chrono::steady_clock::time_point started) {
    json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["inputs"] = std::move(inputs);
    j["result"] = std::move(result);
    j["checks"] = checks_json(checks);
    j["pass"] = all_pass(checks);
    if (!config_.golden) {
      j["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    }
    out_ << j.dump() << '\n';
    if (!all_pass(checks)) failed_ = true;
  }

  void line(const json& j) { out_ << j.dump() << '\n'; }
  std::ostream& raw() { return out_; }
  bool failed() const { return failed_; }

 private:
  std::ostream& out_;
  const RunConfig& config_;
  bool failed_ = false;
};

inline ListColouringInstance load_instance(const RunConfig& config) {
  if (config.instance_path.empty()) throw ParseError("--instance is required");
  return read_instance(config.instance_path);
}

inline ColouringParams params_for(const ListColouringInstance& inst, const RunConfig& config) {
  const int chi = config.chi > 0 ? config.chi : std::max(inst.graph().max_degree(), 1);
  return ColouringParams::verified_instantiation(chi, config.delta);
}

inline json params_json(const ColouringParams& p) {
  return {{"chi", p.chi}, {"eps1", p.eps1}, {"eps2", p.eps2}, {"delta", p.delta}, {"alpha_star", ColouringParams::alpha_star()}};
}

inline std::vector<double> parse_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() < 3 || parts.size() > 4) throw ParseError("grid must look like lo:hi:log[:count]");
  const double lo = parse_double(parts[0], "grid lower end");
  const double hi = parse_double(parts[1], "grid upper end");
  const int count = parts.size() == 4 ? static_cast<int>(parse_int(parts[3], "grid count")) : 200;
  if (parts[2] == "log") return log_grid(lo, hi, count);
  if (parts[2] == "lin") {
    if (count < 2 || !(hi > lo)) throw ParseError("linear grid needs lo < hi and count >= 2");
    std::vector<double> xs;
    for (int i = 0; i < count; ++i) xs.push_back(lo + (hi - lo) * i / (count - 1));
    return xs;
  }
  throw ParseError("grid kind must be log or lin");
}

// ---------------------------------------------------------------- verify

inline std::vector<Check> instance_suite(const ListColouringInstance& inst, const RunConfig& config, json& result) {
  std::vector<Check> checks = oracle_checks(inst, config.tol);
  const auto local = local_chain_checks(inst, 10, config.tol);
  checks.insert(checks.end(), local.begin(), local.end());
  const auto util = summarize_spectral_utilities(inst);
  result["influence_matrices"] = util.matrices;
  const auto uc = spectral_utility_checks(util, config.tol);
  checks.insert(checks.end(), uc.begin(), uc.end());
  try {
    const GlobalSummary g = summarize_global(inst);
    result["states"] = g.states;
    result["etas"] = g.certificate.etas;
    result["gap"] = g.gap;
    result["gap_bound"] = g.bound.value;
    result["gap_bound_vacuous"] = g.bound.vacuous;
    result["absolute_gap"] = g.absolute_gap;
    result["irreducible"] = g.irreducible;
    if (g.irreducible) result["t_star"] = g.t_star;
    const auto gc = global_checks(g, 0.25, config.tol);
    checks.insert(checks.end(), gc.begin(), gc.end());
  } catch (const CapacityError&) {
    result["global"] = "skipped: state space exceeds the matrix cap";
  }
  const ColouringParams params = params_for(inst, config);
  const Eq2DReport eq = check_eq2D(inst, params);
  result["eq2D"] = eq.ok;
  if (eq.ok) {
    result["params"] = params_json(params);
    const auto bc = bounds_checks(inst, params, config.tol);
    checks.insert(checks.end(), bc.begin(), bc.end());
  }
  return checks;
}

inline int cmd_verify(const RunConfig& config, Emitter& em) {
  std::vector<std::pair<std::string, ListColouringInstance>> items;
  std::vector<std::pair<std::string, BoundsCase>> bounds_items;
  if (!config.instance_path.empty()) {
    items.emplace_back(config.instance_path, load_instance(config));
  } else if (config.corpus == "small") {
    items = quick_corpus();
  } else if (config.corpus == "full") {
    for (auto& inst : small_corpus()) items.emplace_back(inst.key(), std::move(inst));
  } else {
    throw ParseError("verify needs --instance or --corpus small|full");
  }
  std::size_t failed = 0;
  for (const auto& [name, inst] : items) {
    const auto t0 = std::chrono::steady_clock::now();
    json result = json::object();
    const auto checks = instance_suite(inst, config, result);
    if (!all_pass(checks)) ++failed;
    em.report("verify", {{"instance", name}, {"delta", config.delta}}, result, checks, t0);
  }
  if (config.instance_path.empty()) {
    for (const auto& bc : bounds_corpus()) {
      const auto t0 = std::chrono::steady_clock::now();
      ColouringParams params = ColouringParams::verified_instantiation(bc.chi, bc.delta);
      json result = {{"params", params_json(params)}, {"eq2D", check_eq2D(bc.instance, params).ok}};
      const auto checks = bounds_checks(bc.instance, params, config.tol);
      if (!all_pass(checks)) ++failed;
      em.report("verify-bounds", {{"instance", bc.name}}, result, checks, t0);
    }
  }
  em.line({{"command", "verify-summary"},
           {"instances", items.size()},
           {"failed", failed},
           {"pass", failed == 0}});
  return em.failed() ? 2 : 0;
}

// ---------------------------------------------------------------- influence

inline int cmd_influence(const RunConfig& config, Emitter& em) {
  const auto t0 = std::chrono::steady_clock::now();
  const ListColouringInstance inst = load_instance(config);
  const Pinning p = parse_pinning(config.pin_spec, inst);
  if (static_cast<int>(p.size()) > inst.size() - 2) throw ContractError("influence matrices need |pinning| <= n - 2");
  DiagonalConvention conv = DiagonalConvention::psi_zero;
  if (config.convention == "r") {
    conv = DiagonalConvention::r_indicator;
  } else if (config.convention != "psi") {
    throw ParseError("convention must be psi or r");
  }
  if (!is_feasible(inst, p, config.cap)) throw InfeasibleError("pinning " + p.to_string() + " is infeasible");
  const InfluenceMatrix im = influence_matrix(inst, p, conv, config.cap);
  const SpectralRadius rho = spectral_radius(im.entries);
  const double n1 = induced_norm(im.entries, NormKind::one);
  const double ninf = induced_norm(im.entries, NormKind::infinity);
  json result = to_json(im);
  result["norm_1"] = n1;
  result["norm_inf"] = ninf;
  result["rho"] = rho.value;
  result["rho_residual"] = rho.residual;
  result["rho_converged"] = rho.converged;
  std::vector<Check> checks{make_check("rho_minus_norm_1", rho.value - n1, config.tol.spectral),
                            make_check("rho_minus_norm_inf", rho.value - ninf, config.tol.spectral)};
  em.report("influence", {{"instance", config.instance_path}, {"pin", p.to_string()}, {"convention", config.convention}},
            result, checks, t0);
  return em.failed() ? 2 : 0;
}

// ---------------------------------------------------------------- localwalk

inline int cmd_localwalk(const RunConfig& config, Emitter& em) {
  const auto t0 = std::chrono::steady_clock::now();
  const ListColouringInstance inst = load_instance(config);
  const Pinning p = parse_pinning(config.pin_spec, inst);
  if (!is_feasible(inst, p, config.cap)) throw InfeasibleError("pinning " + p.to_string() + " is infeasible");
  LocalChainTolerances lt{config.tol.balance, config.tol.spectral};
  const LocalChainReport r = verify_local_chain(inst, p, config.t_max, lt, config.cap);
  json steps = json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"t", s.t}, {"lower", s.lower}, {"d", s.d}, {"upper", s.upper},
                     {"lower_ok", s.lower_ok}, {"upper_ok", s.upper_ok}});
  }
  const double m = r.free_count;
  json result = {{"free_count", r.free_count},   {"states", r.state_count},
                 {"lambda2_P", r.lambda2_p},     {"lambda2_Q", r.lambda2_q},
                 {"rho", r.rho},                 {"balance_residual", r.balance_residual},
                 {"row_sum_residual", r.row_sum_residual}, {"steps", steps}};
  std::vector<Check> checks{
      make_check("local_detailed_balance", r.balance_residual, config.tol.balance),
      make_check("lazy_lambda2_identity", r.lazy_identity_residual, config.tol.spectral),
      make_check("lambda2_P_minus_rho_over_m_minus_1", r.lambda2_p - r.rho / (m - 1.0), config.tol.spectral),
      make_check("lambda2_Q_minus_rho_plus_1_over_m", r.lambda2_q - (r.rho + 1.0) / m, config.tol.spectral)};
  for (const auto& s : r.steps) {
    checks.push_back(make_check("lower_t" + std::to_string(s.t), s.lower - s.d, config.tol.spectral));
    checks.push_back(make_check("upper_t" + std::to_string(s.t), s.d - s.upper, config.tol.spectral));
  }
  em.report("localwalk", {{"instance", config.instance_path}, {"pin", p.to_string()}, {"t_max", config.t_max}}, result,
            checks, t0);
  return em.failed() ? 2 : 0;
}

// ---------------------------------------------------------------- glauber

inline int cmd_glauber(const RunConfig& config, Emitter& em) {
  const ListColouringInstance inst = load_instance(config);
  if (config.steps > 0) {
    GlauberChain chain = GlauberChain::start(inst, config.seed);
    em.line({{"step", 0}, {"state", chain.current.colours}});
    for (std::uint64_t t = 1; t <= config.steps; ++t) {
      glauber_step(chain);
      em.line({{"step", t}, {"state", chain.current.colours}});
    }
  }
  if (config.exact_curve >= 0) {
    const MixingEstimate est = empirical_tv_curve(transition_matrix(inst, config.matrix_cap), config.exact_curve);
    if (config.format == "csv") {
      std::ostream& os = em.raw();
      os << "t,tv_worst\n";
      for (std::size_t i = 0; i < est.t_values.size(); ++i) {
        std::ostringstream v;
        v << std::setprecision(17) << est.tv_values[i];
        os << est.t_values[i] << ',' << v.str() << '\n';
      }
    } else {
      em.line({{"t", est.t_values}, {"tv_worst", est.tv_values}});
    }
  }
  return 0;
}

// ---------------------------------------------------------------- bounds

inline int cmd_bounds(const RunConfig& config, Emitter& em) {
  const auto t0 = std::chrono::steady_clock::now();
  const ListColouringInstance inst = load_instance(config);
  const ColouringParams params = params_for(inst, config);
  json result;
  result["params"] = params_json(params);
  const Eq2DReport eq = check_eq2D(inst, params);
  result["eq2D"] = {{"ok", eq.ok}, {"triangle_free", eq.triangle_free}, {"required_slack", eq.required_slack},
                    {"violators", eq.violators}};
  const ConditionReport cond = verify_condition(inst, params, config.cap);
  result["condition"] = {{"ok", cond.ok()},
                         {"max_degree_ok", cond.max_degree_ok},
                         {"feasible_ok", cond.feasible_ok},
                         {"images", cond.images},
                         {"worst_margin", cond.worst_margin},
                         {"witness",
                          {{"pinning", cond.witness.pinning.to_string()},
                           {"vertex", cond.witness.vertex},
                           {"colour", cond.witness.colour},
                           {"bound", cond.witness.bound},
                           {"marginal", cond.witness.marginal},
                           {"limit", cond.witness.limit}}}};
  std::vector<Check> checks{make_check("condition_worst_margin_negated", -cond.worst_margin, 0.0),
                            make_check("condition_violations", cond.ok() ? 0.0 : 1.0, 0.0)};

  const OneToAllReport ota = one_to_all_check(inst, params, config.tol.spectral, config.cap);
  result["easy_coupling_bound"] = ota.easy_bound;
  result["one_to_all_bound"] = ota.saw_bound;
  result["R_row_sums"] = ota.row_sums;
  double worst_row = 0.0;
  for (double s : ota.row_sums) worst_row = std::max(worst_row, s);
  checks.push_back(make_check("R_row_sum_minus_min_bound", worst_row - ota.bound, config.tol.spectral));

  if (config.saw_source >= 0) {
    const SAWBound saw = saw_influence_bound(inst, config.saw_source, params);
    result["saw"] = {{"source", saw.source}, {"per_target", saw.per_target}, {"total", saw.total},
                     {"layer_sums", saw.layer_sums}, {"walks", saw.walks}, {"pruned", saw.pruned}};
    double excess = -1.0;
    for (std::size_t l = 0; l < saw.layer_sums.size(); ++l)
      excess = std::max(excess, saw.layer_sums[l] - std::pow(params.eps1, static_cast<double>(l)));
    checks.push_back(make_check("saw_layer_sum_minus_eps1_pow", excess, config.tol.enumeration));
  }
  if (config.pair) {
    const auto [u, v] = *config.pair;
    if (!inst.graph().contains(u) || !inst.graph().contains(v)) throw ParseError("--pair vertex out of range");
    const InfluenceMatrix r = r_matrix(inst, config.cap);
    const CertifiedInfluenceBound b = recursive_influence_bound(inst, u, v, params, config.cap);
    const double exact = r.entries(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
    const auto [c1, c2] = r.argmax[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
    result["pair"] = {{"u", u}, {"v", v}, {"R", exact}, {"recursive_bound", b.value},
                      {"conservative", b.conservative}, {"nodes", b.nodes}, {"colours", {c1, c2}}};
    checks.push_back(make_check("R_minus_recursive_bound", exact - b.value, config.tol.spectral));
    if (u != v && c1 != c2) {
      const TelescopingReport tr = telescoping_report(inst, u, v, c1, c2, config.tol.enumeration, config.cap);
      result["telescoping"] = {{"feasible", tr.feasible}, {"direct", tr.direct}, {"steps", tr.steps},
                               {"w_tv", tr.w_tv}, {"w_formula", tr.w_formula}, {"r_sub", tr.r_sub},
                               {"endpoint_residual", tr.endpoint_residual}};
      if (tr.feasible) checks.push_back(make_check("telescoping_violations", tr.ok(config.tol.enumeration) ? 0.0 : 1.0, 0.0));
    }
  }
  em.report("bounds", {{"instance", config.instance_path}, {"delta", config.delta}, {"chi", params.chi}}, result, checks,
            t0);
  return em.failed() ? 2 : 0;
}

// ---------------------------------------------------------------- star

inline int cmd_star(const RunConfig& config, Emitter& em) {
  const auto t0 = std::chrono::steady_clock::now();
  if (config.delta_min < 1 || config.delta_max < config.delta_min) throw ParameterError("bad Delta range");
  json rows = json::array();
  std::size_t below = 0;
  std::size_t not_exceeding = 0;
  for (int d = config.delta_min; d <= config.delta_max; ++d) {
    for (int q = 3; q < ColouringParams::alpha_star() * d - 3.0; ++q) {
      const StarTightness s = star_tightness(d, q);
      ++below;
      if (!s.exceeds_inverse_degree) ++not_exceeding;
      rows.push_back({{"delta", d}, {"q", q}, {"value", s.value}, {"exceeds_inverse_degree", s.exceeds_inverse_degree}});
    }
  }
  const Fraction f = star_tightness_rational(4, 4);
  const double enumerated = marginal(star_instance(4, 4), {}, 0, config.cap)(3);
  json result = {{"rows", rows},
                 {"star_4_4", {{"numerator", f.num}, {"denominator", f.den}, {"value", star_tightness(4, 4).value},
                               {"enumerated", enumerated}}}};
  std::vector<Check> checks{
      make_check("below_threshold_not_exceeding_1_over_delta", static_cast<double>(not_exceeding), 0.0),
      make_check("star_4_4_rational_mismatch", (f.num == 81 && f.den == 129) ? 0.0 : 1.0, 0.0),
      make_check("star_4_4_enumeration_residual", std::abs(enumerated - 81.0 / 129.0), config.tol.enumeration)};
  em.report("star", {{"delta_min", config.delta_min}, {"delta_max", config.delta_max}}, result, checks, t0);
  return em.failed() ? 2 : 0;
}

// ---------------------------------------------------------------- fcheck

inline int cmd_fcheck(const RunConfig& config, Emitter& em) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> grid = parse_grid(config.grid);
  const FCheckReport r = check_f_monotone(config.delta, grid);
  std::vector<double> fs(r.fs.begin(), r.fs.end());
  std::vector<double> bs(r.b_bounds.begin(), r.b_bounds.end());
  const double a = ColouringParams::alpha_star();
  json result = {{"alpha_star", a},
                 {"alpha_star_residual", std::abs(a - std::exp(1.0 / a))},
                 {"limit", static_cast<double>(r.limit)},
                 {"x", r.xs},
                 {"f", fs},
                 {"b_upper", bs},
                 {"strictly_decreasing", r.strictly_decreasing},
                 {"above_limit", r.above_limit},
                 {"b_negative", r.b_negative}};
  std::vector<Check> checks{
      make_check("f_not_strictly_decreasing", r.strictly_decreasing ? 0.0 : 1.0, 0.0),
      make_check("f_below_limit", r.above_limit ? 0.0 : 1.0, 0.0),
      make_check("b_upper_max", static_cast<double>(*std::max_element(r.b_bounds.begin(), r.b_bounds.end())), -1e-9),
      make_check("alpha_star_residual", std::abs(a - std::exp(1.0 / a)), 1e-13)};
  em.report("fcheck", {{"delta", config.delta}, {"grid", config.grid}}, result, checks, t0);
  return em.failed() ? 2 : 0;
}

// ---------------------------------------------------------------- gen

inline int cmd_gen(const RunConfig& config, Emitter& em) {
  if (config.family.empty()) throw ParseError("gen needs --family");
  const json j = to_json(generate_instance(config.family));
  if (config.out_path.empty()) {
    em.line(j);
  } else {
    std::ofstream out(config.out_path);
    if (!out) throw ParseError("cannot write '" + config.out_path + "'");
    out << j.dump() << '\n';
  }
  return 0;
}

}  // namespace detail

/// Runs one subcommand, writing reports to `out` and diagnostics to `err`.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    detail::Emitter em(out, config);
    const std::string& c = config.subcommand;
    if (c == "verify") return detail::cmd_verify(config, em);
    if (c == "influence") return detail::cmd_influence(config, em);
    if (c == "localwalk") return detail::cmd_localwalk(config, em);
    if (c == "glauber") return detail::cmd_glauber(config, em);
    if (c == "bounds") return detail::cmd_bounds(config, em);
    if (c == "star") return detail::cmd_star(config, em);
    if (c == "fcheck") return detail::cmd_fcheck(config, em);
    if (c == "gen") return detail::cmd_gen(config, em);
    throw ParseError("unknown subcommand '" + c + "'");
  } catch (const Error& e) {
    err << "specmix: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace specmix
