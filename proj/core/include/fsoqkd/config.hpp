#pragma once

// Flat `key = value` scenario files.
//
//   # pointing errors (radians)
//   mu_v = 1e-8
//   mu_h = 5e-8
//   sigma_v2 = 1e-12      # variances are accepted as *2 keys
//   sigma_h2 = 1e-10
//   p_s = 0 dB
//
// Link constants come either from k1/k2 directly or from the full link
// budget; explicit k1/k2 take precedence (with a warning). Powers (p_s,
// lambda_d, lambda_e) accept a `dB` suffix relative to 1 W.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fsoqkd/linkmodel.hpp"

namespace fsoqkd::config {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct ScenarioConfig {
  linkmodel::PointingParams pointing;
  std::optional<linkmodel::LinkConstants> constants;
  std::optional<double> g_d;
  std::optional<double> lambda_d;
  std::optional<double> lambda_e;
  std::optional<double> alpha;
  std::optional<linkmodel::TurbulenceParams> turbulence;
  std::optional<double> theta_d;  // overrides the value derived from the scenario
  std::optional<double> theta_e;  // linkmodel::theta_e convention
  std::vector<std::string> warnings;

  /// The full scenario with g_d replaced by `g_d_override` when given. Throws
  /// std::invalid_argument naming the first missing key.
  linkmodel::Scenario scenario(std::optional<double> g_d_override = std::nullopt) const;

  bool has_scenario() const noexcept;
};

/// Parses a real number, accepting an optional trailing `dB` when `allow_db`.
double parse_real(std::string_view text, bool allow_db = false);

ScenarioConfig parse_config(std::istream& in, const std::string& source = "<input>");
ScenarioConfig load_config(const std::string& path);

}  // namespace fsoqkd::config
