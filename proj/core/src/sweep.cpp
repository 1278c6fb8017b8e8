#include "fsoqkd/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "fsoqkd/linkmodel.hpp"
#include "fsoqkd/oracle.hpp"
#include "fsoqkd/transmission.hpp"

namespace fsoqkd::sweep {

namespace {

namespace tx = transmission;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

bool needs_theta_d(Target t) { return t != Target::Tpe; }
bool needs_theta_e(Target t) { return t != Target::Tplr; }

bool method_allowed(Target t, Method m) {
  switch (t) {
    case Target::Tplr:
      return m == Method::Ghq || m == Method::Robust || m == Method::Asymptotic ||
             m == Method::Exact || m == Method::Turbulence;
    case Target::Tpe:
      return m == Method::Ghq || m == Method::Robust || m == Method::Asymptotic;
    case Target::Tpre:
      return m == Method::Ghq || m == Method::Robust || m == Method::RobustConsistent ||
             m == Method::Asymptotic;
    case Target::TpreRayleigh:
      return m == Method::Legendre || m == Method::Simplified || m == Method::Exact;
  }
  return false;
}

bool variable_allowed(Target t, Variable v) {
  if (v == Variable::ThetaD) return needs_theta_d(t);
  if (v == Variable::ThetaE) return needs_theta_e(t);
  return true;
}

int hermite_order(const SweepSpec& s) { return s.order.value_or(quadrature::kDefaultHermiteOrder); }
int legendre_order(const SweepSpec& s) {
  return s.order.value_or(quadrature::kDefaultLegendreOrder);
}

double theta_d_default(const config::ScenarioConfig& cfg) {
  if (cfg.theta_d) return *cfg.theta_d;
  return linkmodel::theta_d(cfg.scenario());
}

double theta_e_default(const config::ScenarioConfig& cfg) {
  if (cfg.theta_e) return *cfg.theta_e;
  return linkmodel::theta_e(cfg.scenario());
}

double alpha_of(const config::ScenarioConfig& cfg) {
  if (!cfg.alpha) fail("config is missing 'alpha'");
  return *cfg.alpha;
}

bool has_closed_form(const linkmodel::PointingParams& p) {
  return (p.mu_v == 0.0 && p.mu_h == 0.0) || p.sigma_v == p.sigma_h;
}

tx::TpResult exact_tplr(const linkmodel::PointingParams& p, double theta_d) {
  const bool zero_mean = p.mu_v == 0.0 && p.mu_h == 0.0;
  const bool equal_sigma = p.sigma_v == p.sigma_h;
  if (zero_mean && equal_sigma) return tx::tplr_rayleigh(p.sigma_v, theta_d);
  if (zero_mean) return tx::tplr_hoyt(p.sigma_v, p.sigma_h, theta_d);
  if (equal_sigma) return tx::tplr_rice(p.mu_v, p.mu_h, p.sigma_v, theta_d);
  fail("no closed form for nonzero means with unequal sigmas");
}

oracle::EstimateWithError monte_carlo(Target target, const config::ScenarioConfig& cfg,
                                      const Thresholds& t, std::uint64_t n, std::uint64_t seed,
                                      unsigned threads) {
  switch (target) {
    case Target::Tplr:
      return oracle::mc_tplr(cfg.pointing, t.theta_d, seed, n, threads);
    case Target::Tpe:
      return oracle::mc_tpe(cfg.pointing, t.theta_e, alpha_of(cfg), seed, n, threads);
    case Target::Tpre:
    case Target::TpreRayleigh:
      return oracle::mc_tpre(cfg.pointing, t.theta_d, t.theta_e, alpha_of(cfg), seed, n, threads);
  }
  fail("unknown target");
}

Method default_method(Target t) {
  return t == Target::TpreRayleigh ? Method::Legendre : Method::Ghq;
}

}  // namespace

Target parse_target(std::string_view s) {
  if (s == "tplr") return Target::Tplr;
  if (s == "tpe") return Target::Tpe;
  if (s == "tpre") return Target::Tpre;
  if (s == "tpre-rayleigh") return Target::TpreRayleigh;
  fail("unknown target '" + std::string(s) + "'");
}

Variable parse_variable(std::string_view s) {
  if (s == "theta-d") return Variable::ThetaD;
  if (s == "theta-e") return Variable::ThetaE;
  if (s == "gd") return Variable::GD;
  fail("unknown sweep variable '" + std::string(s) + "'");
}

Method parse_method(std::string_view s) {
  if (s == "ghq") return Method::Ghq;
  if (s == "robust") return Method::Robust;
  if (s == "robust-consistent") return Method::RobustConsistent;
  if (s == "asymptotic") return Method::Asymptotic;
  if (s == "exact") return Method::Exact;
  if (s == "turbulence") return Method::Turbulence;
  if (s == "legendre") return Method::Legendre;
  if (s == "simplified") return Method::Simplified;
  fail("unknown method '" + std::string(s) + "'");
}

std::vector<Method> parse_methods(std::string_view s) {
  std::vector<Method> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    const auto item = s.substr(0, comma);
    if (item.empty()) fail("empty entry in method list");
    const Method m = parse_method(item);
    if (std::find(out.begin(), out.end(), m) != out.end()) {
      fail("method '" + std::string(item) + "' listed twice");
    }
    out.push_back(m);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
    if (s.empty()) fail("empty entry in method list");
  }
  return out;
}

std::string_view to_string(Target t) noexcept {
  switch (t) {
    case Target::Tplr: return "tplr";
    case Target::Tpe: return "tpe";
    case Target::Tpre: return "tpre";
    case Target::TpreRayleigh: return "tpre-rayleigh";
  }
  return "unknown";
}

std::string_view to_string(Variable v) noexcept {
  switch (v) {
    case Variable::ThetaD: return "theta-d";
    case Variable::ThetaE: return "theta-e";
    case Variable::GD: return "gd";
  }
  return "unknown";
}

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::Ghq: return "ghq";
    case Method::Robust: return "robust";
    case Method::RobustConsistent: return "robust-consistent";
    case Method::Asymptotic: return "asymptotic";
    case Method::Exact: return "exact";
    case Method::Turbulence: return "turbulence";
    case Method::Legendre: return "legendre";
    case Method::Simplified: return "simplified";
  }
  return "unknown";
}

void Range::validate() const {
  if (count < 2) fail("range count must be at least 2");
  if (!(std::isfinite(start) && std::isfinite(stop) && start < stop)) {
    fail("range requires finite start < stop");
  }
  if (log && !(start > 0.0)) fail("log spacing requires start > 0");
}

std::vector<double> Range::points() const {
  validate();
  std::vector<double> pts(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    if (log) {
      pts[i] = std::exp(std::log(start) + f * (std::log(stop) - std::log(start)));
    } else {
      pts[i] = start + f * (stop - start);
    }
  }
  pts.front() = start;
  pts.back() = stop;
  return pts;
}

Range parse_range(std::string_view s) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto colon = s.find(':');
    parts.push_back(s.substr(0, colon));
    if (colon == std::string_view::npos) break;
    s.remove_prefix(colon + 1);
  }
  if (parts.size() != 3 && parts.size() != 4) fail("range must be start:stop:count[:log]");
  Range r;
  r.start = config::parse_real(parts[0]);
  r.stop = config::parse_real(parts[1]);
  int count = 0;
  const auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), count);
  if (ec != std::errc() || ptr != parts[2].data() + parts[2].size()) {
    fail("range count must be an integer");
  }
  r.count = count;
  if (parts.size() == 4) {
    if (parts[3] == "log") {
      r.log = true;
    } else if (parts[3] != "lin") {
      fail("range spacing must be 'log' or 'lin'");
    }
  }
  r.validate();
  return r;
}

void SweepSpec::validate() const {
  range.validate();
  if (methods.empty() && !mc) fail("no methods requested");
  if (order && (*order < 1 || *order > quadrature::kMaxOrder)) {
    fail("quadrature order must lie in [1, " + std::to_string(quadrature::kMaxOrder) + "]");
  }
  if (!variable_allowed(target, variable)) {
    fail("cannot sweep " + std::string(to_string(variable)) + " for target " +
         std::string(to_string(target)));
  }
  for (Method m : methods) {
    if (!method_allowed(target, m)) {
      fail("method '" + std::string(to_string(m)) + "' is not available for target " +
           std::string(to_string(target)));
    }
  }
  const auto& cfg = scenario;
  if (variable == Variable::GD) {
    if (cfg.theta_d || cfg.theta_e) fail("theta_d/theta_e overrides conflict with a gd sweep");
    (void)cfg.scenario(range.start);
  } else {
    if (needs_theta_d(target) && variable != Variable::ThetaD) (void)theta_d_default(cfg);
    if (needs_theta_e(target) && variable != Variable::ThetaE) (void)theta_e_default(cfg);
  }
  if (target != Target::Tplr) (void)alpha_of(cfg);
  if (target == Target::TpreRayleigh) {
    const auto& p = cfg.pointing;
    if (p.mu_v != 0.0 || p.mu_h != 0.0 || p.sigma_v != p.sigma_h) {
      fail("tpre-rayleigh requires zero means and sigma_v == sigma_h");
    }
  }
  if (std::find(methods.begin(), methods.end(), Method::Turbulence) != methods.end()) {
    if (!cfg.turbulence) fail("turbulence method requires alpha_d and beta_d");
    if (variable != Variable::GD && !cfg.g_d) fail("turbulence method requires g_d");
  }
  if (mc && mc->n_samples == 0) fail("Monte-Carlo sample count must be positive");
}

Thresholds thresholds_at(const SweepSpec& spec, double value) {
  const auto& cfg = spec.scenario;
  Thresholds t;
  t.g_d = cfg.g_d;
  switch (spec.variable) {
    case Variable::GD: {
      const auto s = cfg.scenario(value);
      t.theta_d = linkmodel::theta_d(s);
      t.theta_e = linkmodel::theta_e(s);
      t.g_d = value;
      break;
    }
    case Variable::ThetaD:
      t.theta_d = value;
      t.theta_e = needs_theta_e(spec.target) ? theta_e_default(cfg)
                                              : std::numeric_limits<double>::quiet_NaN();
      break;
    case Variable::ThetaE:
      t.theta_e = value;
      t.theta_d = needs_theta_d(spec.target) ? theta_d_default(cfg)
                                              : std::numeric_limits<double>::quiet_NaN();
      break;
  }
  return t;
}

double evaluate(const SweepSpec& spec, Method method, const Thresholds& t) {
  const auto& cfg = spec.scenario;
  const auto& p = cfg.pointing;
  switch (spec.target) {
    case Target::Tplr:
      switch (method) {
        case Method::Ghq: return tx::tplr_ghq(p, t.theta_d, hermite_order(spec)).value;
        case Method::Robust: return tx::tplr_robust(p, t.theta_d).value;
        case Method::Asymptotic: return tx::tplr_asymptotic(p, t.theta_d).value;
        case Method::Exact: return exact_tplr(p, t.theta_d).value;
        case Method::Turbulence:
          if (!t.g_d || !cfg.turbulence) fail("turbulence method requires g_d, alpha_d, beta_d");
          return tx::tplr_turbulence_asymptotic(p, t.theta_d, *t.g_d, *cfg.turbulence).value;
        default: break;
      }
      break;
    case Target::Tpe:
      switch (method) {
        case Method::Ghq: return tx::tpe_ghq(p, t.theta_e, alpha_of(cfg), hermite_order(spec)).value;
        case Method::Robust: return tx::tpe_robust(p, t.theta_e, alpha_of(cfg)).value;
        case Method::Asymptotic: return tx::tpe_asymptotic(p, t.theta_e, alpha_of(cfg)).value;
        default: break;
      }
      break;
    case Target::Tpre:
      switch (method) {
        case Method::Ghq:
          return tx::tpre_ghq(p, t.theta_d, t.theta_e, alpha_of(cfg), hermite_order(spec)).value;
        case Method::Robust:
          return tx::tpre_robust(p, t.theta_d, t.theta_e, alpha_of(cfg),
                                 tx::RobustTpreForm::AsPrinted)
              .value;
        case Method::RobustConsistent:
          return tx::tpre_robust(p, t.theta_d, t.theta_e, alpha_of(cfg),
                                 tx::RobustTpreForm::ConsistentWithGhq)
              .value;
        case Method::Asymptotic: return tx::tpre_asymptotic(p, t.theta_d).value;
        default: break;
      }
      break;
    case Target::TpreRayleigh:
      switch (method) {
        case Method::Legendre:
          return tx::tpre_rayleigh_quadrature(p.sigma_h, t.theta_d, 2.0 * t.theta_e,
                                              alpha_of(cfg), legendre_order(spec))
              .value;
        case Method::Simplified: return tx::tpre_rayleigh_simplified(p.sigma_h, t.theta_d).value;
        case Method::Exact: return tx::tplr_rayleigh(p.sigma_h, t.theta_d).value;
        default: break;
      }
      break;
  }
  fail("method '" + std::string(to_string(method)) + "' is not available for target " +
       std::string(to_string(spec.target)));
}

std::uint64_t point_seed(std::uint64_t seed, std::size_t index) noexcept {
  return oracle::chunk_seed(seed, ~static_cast<std::uint64_t>(index));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void run_sweep(const SweepSpec& spec, std::ostream& out) {
  spec.validate();
  out << "sweep_value";
  for (Method m : spec.methods) out << ',' << to_string(m);
  if (spec.mc) out << ",mc_estimate,mc_stderr";
  out << '\n';
  const auto pts = spec.range.points();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out << format_number(pts[i]);
    std::optional<Thresholds> t;
    try {
      t = thresholds_at(spec, pts[i]);
    } catch (const std::exception&) {
    }
    for (Method m : spec.methods) {
      double v = nan;
      if (t) {
        try {
          v = evaluate(spec, m, *t);
        } catch (const std::exception&) {
        }
      }
      out << ',' << format_number(v);
    }
    if (spec.mc) {
      double est = nan;
      double se = nan;
      if (t) {
        try {
          const auto e = monte_carlo(spec.target, spec.scenario, *t, spec.mc->n_samples,
                                     point_seed(spec.mc->seed, i), spec.threads);
          est = e.estimate;
          se = e.std_error;
        } catch (const std::exception&) {
        }
      }
      out << ',' << format_number(est) << ',' << format_number(se);
    }
    out << '\n';
  }
}

ValidationReport run_mc_validate(const config::ScenarioConfig& cfg, Target target,
                                 std::uint64_t n, std::uint64_t seed, std::optional<int> order,
                                 double perturb, unsigned threads) {
  if (n == 0) fail("Monte-Carlo sample count must be positive");
  SweepSpec spec;
  spec.target = target;
  spec.scenario = cfg;
  spec.order = order;
  Thresholds t;
  t.g_d = cfg.g_d;
  t.theta_d = needs_theta_d(target) ? theta_d_default(cfg) : 0.0;
  t.theta_e = needs_theta_e(target) ? theta_e_default(cfg) : 0.0;
  if (target == Target::TpreRayleigh) {
    spec.variable = Variable::ThetaD;
    spec.range = {0.0, 1.0, 2, false};
    spec.methods = {Method::Legendre};
    spec.validate();
  }
  Method method = default_method(target);
  if (target == Target::Tplr && !order && has_closed_form(cfg.pointing)) method = Method::Exact;
  ValidationReport r;
  r.method = std::string(to_string(method));
  r.analytic = evaluate(spec, method, t) + perturb;
  const auto est = monte_carlo(target, cfg, t, n, seed, threads);
  r.estimate = est.estimate;
  r.std_error = est.std_error;
  r.n_samples = n;
  r.seed = seed;
  r.z = oracle::z_score(r.analytic, est);
  r.passed = r.z <= kZLimit;
  return r;
}

void write_report(const ValidationReport& r, std::ostream& out) {
  out << "method      " << r.method << '\n'
      << "analytic    " << format_number(r.analytic) << '\n'
      << "mc_estimate " << format_number(r.estimate) << '\n'
      << "mc_stderr   " << format_number(r.std_error) << '\n'
      << "samples     " << r.n_samples << '\n'
      << "seed        " << r.seed << '\n'
      << "z_score     " << format_number(r.z) << '\n'
      << "result      " << (r.passed ? "PASS" : "FAIL") << " (limit z <= " << kZLimit << ")\n";
}

void dump_nodes(quadrature::QuadratureKind kind, int n, std::ostream& out) {
  const auto rule = quadrature::cached_rule(kind, n);
  out << "node,weight\n";
  for (int i = 0; i < rule->order; ++i) {
    out << format_number(rule->nodes[i]) << ',' << format_number(rule->weights[i]) << '\n';
  }
}

}  // namespace fsoqkd::sweep
