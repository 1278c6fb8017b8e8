#pragma once

// Parameter sweeps, Monte-Carlo validation runs and quadrature dumps, as
// driven by the fsoqkd command-line tool.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsoqkd/config.hpp"
#include "fsoqkd/quadrature.hpp"

namespace fsoqkd::sweep {

enum class Target { Tplr, Tpe, Tpre, TpreRayleigh };
enum class Variable { ThetaD, ThetaE, GD };

/// Column methods. `exact` picks the Rayleigh, Hoyt or Rice closed form from
/// the pointing parameters (TPLR), or the Rayleigh form (TPRE-Rayleigh).
/// `robust-consistent` is the TPRE three-point rule built from the
/// Gauss-Hermite integrand; `robust` is the closed three-point formula term by term.
enum class Method { Ghq, Robust, RobustConsistent, Asymptotic, Exact, Turbulence, Legendre, Simplified };

Target parse_target(std::string_view s);
Variable parse_variable(std::string_view s);
Method parse_method(std::string_view s);
std::vector<Method> parse_methods(std::string_view comma_separated);
std::string_view to_string(Target t) noexcept;
std::string_view to_string(Variable v) noexcept;
std::string_view to_string(Method m) noexcept;

struct Range {
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
  bool log = false;

  /// Throws std::invalid_argument unless count >= 2, start < stop, and
  /// start > 0 for log spacing.
  void validate() const;
  std::vector<double> points() const;
};

/// "start:stop:count" or "start:stop:count:log".
Range parse_range(std::string_view s);

struct McOptions {
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

struct SweepSpec {
  Target target = Target::Tplr;
  Variable variable = Variable::ThetaD;
  Range range;
  std::vector<Method> methods;
  std::optional<int> order;  // quadrature order; per-method default when empty
  config::ScenarioConfig scenario;
  std::optional<McOptions> mc;
  unsigned threads = 0;

  /// Checks method/target compatibility and that the scenario supplies every
  /// quantity the sweep needs. Throws std::invalid_argument.
  void validate() const;
};

/// The thresholds at one grid point.
struct Thresholds {
  double theta_d = 0.0;
  double theta_e = 0.0;  // linkmodel::theta_e convention
  std::optional<double> g_d;
};

Thresholds thresholds_at(const SweepSpec& spec, double value);

/// Value of one method at one grid point. Throws on numerical failure.
double evaluate(const SweepSpec& spec, Method method, const Thresholds& t);

/// Seed used for the Monte-Carlo column at grid index i.
std::uint64_t point_seed(std::uint64_t seed, std::size_t index) noexcept;

/// Writes the CSV document. Cells whose evaluation fails are written as nan.
void run_sweep(const SweepSpec& spec, std::ostream& out);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_number(double v);

struct ValidationReport {
  std::string method;
  double analytic = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  bool passed = false;  // z <= kZLimit
};

inline constexpr double kZLimit = 4.0;

/// Compares an analytic value for `target` against the oracle at the
/// thresholds given by the config (explicit theta_d / theta_e or the
/// scenario). TPLR uses the Rayleigh, Hoyt or Rice closed form when the
/// pointing parameters admit one and no order is given; otherwise Gauss-Hermite
/// (Gauss-Legendre for tpre-rayleigh). `perturb` is added to the analytic value
/// before comparison.
ValidationReport run_mc_validate(const config::ScenarioConfig& cfg, Target target,
                                 std::uint64_t n, std::uint64_t seed, std::optional<int> order,
                                 double perturb = 0.0, unsigned threads = 0);

void write_report(const ValidationReport& r, std::ostream& out);

/// "node,weight" CSV of the rule.
void dump_nodes(quadrature::QuadratureKind kind, int n, std::ostream& out);

}  // namespace fsoqkd::sweep
