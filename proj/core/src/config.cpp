#include "fsoqkd/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>

namespace fsoqkd::config {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Raw {
  std::string value;
  int line;
};

const std::set<std::string, std::less<>> kBudgetKeys = {
    "p_s", "g_s", "g_e", "eta_s", "eta_d", "eta_e", "eta_q",
    "eta_b", "lambda1", "lambda2", "z1", "z2", "la1", "la2"};

const std::set<std::string, std::less<>> kOtherKeys = {
    "mu_v", "mu_h", "sigma_v", "sigma_h", "sigma_v2", "sigma_h2", "k1", "k2",
    "g_d", "d_d", "lambda_d", "lambda_e", "alpha", "alpha_d", "beta_d", "theta_d", "theta_e"};

bool is_power(std::string_view key) {
  return key == "p_s" || key == "lambda_d" || key == "lambda_e";
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         message),
      line_(line) {}

double parse_real(std::string_view text, bool allow_db) {
  std::string_view s = trim(text);
  bool db = false;
  if (s.size() >= 2) {
    const auto tail = s.substr(s.size() - 2);
    if ((tail[0] == 'd' || tail[0] == 'D') && (tail[1] == 'b' || tail[1] == 'B')) {
      if (!allow_db) throw std::invalid_argument("dB suffix not allowed here");
      db = true;
      s = trim(s.substr(0, s.size() - 2));
    }
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("not a finite number: '" + std::string(text) + "'");
  }
  return db ? std::pow(10.0, v / 10.0) : v;
}

ScenarioConfig parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, Raw, std::less<>> raw;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ConfigError(source, number, "expected 'key = value'");
    const std::string key(trim(body.substr(0, eq)));
    const std::string value(trim(body.substr(eq + 1)));
    if (key.empty()) throw ConfigError(source, number, "missing key");
    if (value.empty()) throw ConfigError(source, number, "missing value for '" + key + "'");
    if (!kBudgetKeys.contains(key) && !kOtherKeys.contains(key)) {
      throw ConfigError(source, number, "unknown key '" + key + "'");
    }
    if (const auto it = raw.find(key); it != raw.end()) {
      throw ConfigError(source, number,
                        "duplicate key '" + key + "' (first set on line " +
                            std::to_string(it->second.line) + ")");
    }
    raw.emplace(key, Raw{value, number});
  }

  std::map<std::string, double, std::less<>> num;
  for (const auto& [key, r] : raw) {
    try {
      num[key] = parse_real(r.value, is_power(key));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source, r.line, key + ": " + e.what());
    }
  }
  auto get = [&](std::string_view key) -> std::optional<double> {
    if (const auto it = num.find(key); it != num.end()) return it->second;
    return std::nullopt;
  };
  auto line_of = [&](std::string_view key) { return raw.find(key)->second.line; };
  auto exclusive = [&](std::string_view a, std::string_view b) {
    if (get(a) && get(b)) {
      throw ConfigError(source, std::max(line_of(a), line_of(b)),
                        std::string(a) + " and " + std::string(b) + " are mutually exclusive");
    }
  };

  ScenarioConfig cfg;
  cfg.pointing.mu_v = get("mu_v").value_or(0.0);
  cfg.pointing.mu_h = get("mu_h").value_or(0.0);
  exclusive("sigma_v", "sigma_v2");
  exclusive("sigma_h", "sigma_h2");
  if (auto v = get("sigma_v2")) {
    if (*v <= 0.0) throw ConfigError(source, line_of("sigma_v2"), "sigma_v2 must be positive");
    cfg.pointing.sigma_v = std::sqrt(*v);
  } else if (auto s = get("sigma_v")) {
    cfg.pointing.sigma_v = *s;
  }
  if (auto v = get("sigma_h2")) {
    if (*v <= 0.0) throw ConfigError(source, line_of("sigma_h2"), "sigma_h2 must be positive");
    cfg.pointing.sigma_h = std::sqrt(*v);
  } else if (auto s = get("sigma_h")) {
    cfg.pointing.sigma_h = *s;
  }
  try {
    cfg.pointing.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source, 0, e.what());
  }

  const bool has_k = get("k1") || get("k2");
  bool has_budget = false;
  for (const auto& key : kBudgetKeys) has_budget = has_budget || get(key).has_value();
  if (has_k) {
    if (!get("k1") || !get("k2")) throw ConfigError(source, 0, "k1 and k2 must be given together");
    cfg.constants = linkmodel::LinkConstants{*get("k1"), *get("k2")};
    if (has_budget) cfg.warnings.push_back("explicit k1/k2 override the link budget entries");
  } else if (has_budget) {
    for (const auto& key : kBudgetKeys) {
      if (!get(key)) throw ConfigError(source, 0, "link budget incomplete: missing '" + key + "'");
    }
    linkmodel::LinkBudget b;
    b.p_s = *get("p_s");
    b.g_s = *get("g_s");
    b.g_e = *get("g_e");
    b.eta_s = *get("eta_s");
    b.eta_d = *get("eta_d");
    b.eta_e = *get("eta_e");
    b.eta_q = *get("eta_q");
    b.eta_b = *get("eta_b");
    b.lambda1 = *get("lambda1");
    b.lambda2 = *get("lambda2");
    b.z1 = *get("z1");
    b.z2 = *get("z2");
    b.la1 = *get("la1");
    b.la2 = *get("la2");
    try {
      cfg.constants = linkmodel::LinkConstants::from_budget(b);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source, 0, e.what());
    }
  }
  if (cfg.constants) {
    try {
      cfg.constants->validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source, 0, e.what());
    }
  }

  exclusive("g_d", "d_d");
  cfg.g_d = get("g_d");
  if (auto d = get("d_d")) {
    if (!get("lambda1")) throw ConfigError(source, line_of("d_d"), "d_d requires lambda1");
    try {
      cfg.g_d = linkmodel::gain_from_aperture(*d, *get("lambda1"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source, line_of("d_d"), e.what());
    }
  }
  cfg.lambda_d = get("lambda_d");
  cfg.lambda_e = get("lambda_e");
  cfg.alpha = get("alpha");
  cfg.theta_d = get("theta_d");
  cfg.theta_e = get("theta_e");
  for (std::string_view key : {"g_d", "lambda_d", "lambda_e", "alpha"}) {
    if (auto v = get(key); v && *v <= 0.0) {
      throw ConfigError(source, line_of(key), std::string(key) + " must be positive");
    }
  }
  if (get("alpha_d") || get("beta_d")) {
    if (!get("alpha_d") || !get("beta_d")) {
      throw ConfigError(source, 0, "alpha_d and beta_d must be given together");
    }
    cfg.turbulence = linkmodel::TurbulenceParams{*get("alpha_d"), *get("beta_d")};
    try {
      cfg.turbulence->validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source, 0, e.what());
    }
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open file");
  return parse_config(in, path);
}

bool ScenarioConfig::has_scenario() const noexcept {
  return constants && g_d && lambda_d && lambda_e && alpha;
}

linkmodel::Scenario ScenarioConfig::scenario(std::optional<double> g_d_override) const {
  auto need = [](const auto& opt, const char* key) {
    if (!opt) throw std::invalid_argument(std::string("config is missing '") + key + "'");
    return *opt;
  };
  linkmodel::Scenario s;
  s.pointing = pointing;
  s.constants = need(constants, "k1/k2 or link budget");
  s.g_d = g_d_override ? *g_d_override : need(g_d, "g_d");
  s.lambda_d = need(lambda_d, "lambda_d");
  s.lambda_e = need(lambda_e, "lambda_e");
  s.alpha = need(alpha, "alpha");
  s.validate();
  return s;
}

}  // namespace fsoqkd::config
