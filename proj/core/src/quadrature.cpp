#include "fsoqkd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace fsoqkd::quadrature {

namespace {

constexpr int kMaxNewton = 100;
// Rescaling threshold for the Hermite recurrence; log(kRescale) is tracked.
constexpr double kRescale = 1e150;

void check_order(const char* fn, int n) {
  if (n < 1 || n > kMaxOrder) {
    throw std::invalid_argument(std::string(fn) + ": order must lie in [1, " +
                                std::to_string(kMaxOrder) + "], got " + std::to_string(n));
  }
}

struct HermiteEval {
  double ratio;           // p_n(x) / p_n'(x), the Newton step
  double log_derivative;  // log |p_n'(x)|
};

// Orthonormal Hermite recurrence
//   p_j = x sqrt(2/j) p_{j-1} - sqrt((j-1)/j) p_{j-2},  p_0 = pi^{-1/4},
// with p_n' = sqrt(2n) p_{n-1}. Values are rescaled as they grow so that
// orders up to kMaxOrder stay finite far out in the tails.
HermiteEval eval_hermite(int n, double x) {
  double p_prev = 0.0;
  double p = std::pow(std::numbers::pi, -0.25);
  double log_scale = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double p_next =
        x * std::sqrt(2.0 / j) * p - std::sqrt(static_cast<double>(j - 1) / j) * p_prev;
    p_prev = p;
    p = p_next;
    if (std::abs(p) > kRescale) {
      p /= kRescale;
      p_prev /= kRescale;
      log_scale += std::log(kRescale);
    }
  }
  const double deriv = std::sqrt(2.0 * n) * p_prev;
  return {p / deriv, std::log(std::abs(deriv)) + log_scale};
}

}  // namespace

std::string_view to_string(QuadratureKind kind) noexcept {
  return kind == QuadratureKind::Hermite ? "hermite" : "legendre";
}

QuadratureRule gauss_hermite(int n) {
  check_order("gauss_hermite", n);
  QuadratureRule rule{QuadratureKind::Hermite, n, std::vector<double>(n), std::vector<double>(n),
                      std::vector<double>(n)};
  const int half = (n + 1) / 2;
  // Positive roots, largest first. Initial guesses come from the WKB phase
  // condition (a^2/2)(t - sin t cos t) = (i + 3/4) pi with x = a cos t,
  // a = sqrt(2n + 1), which stays within a fraction of the root spacing for
  // every order up to kMaxOrder.
  std::vector<double> roots(half);
  std::vector<double> log_w(half);
  const double a = std::sqrt(2.0 * n + 1.0);
  for (int i = 0; i < half; ++i) {
    const double target = (i + 0.75) * std::numbers::pi;
    double lo = 0.0;
    double hi = 0.5 * std::numbers::pi;
    for (int it = 0; it < 60; ++it) {
      const double t = 0.5 * (lo + hi);
      const double phase = 0.5 * a * a * (t - std::sin(t) * std::cos(t));
      (phase < target ? lo : hi) = t;
    }
    double z = a * std::cos(0.5 * (lo + hi));
    if (n % 2 == 1 && i == half - 1) z = 0.0;
    HermiteEval ev{};
    for (int it = 0; it < kMaxNewton; ++it) {
      ev = eval_hermite(n, z);
      z -= ev.ratio;
      if (std::abs(ev.ratio) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    ev = eval_hermite(n, z);
    roots[i] = z;
    log_w[i] = std::numbers::ln2 - 2.0 * ev.log_derivative;
  }
  for (int i = 0; i < half; ++i) {
    const int lo = i;
    const int hi = n - 1 - i;
    rule.nodes[lo] = -roots[i];
    rule.nodes[hi] = roots[i];
    rule.log_weights[lo] = rule.log_weights[hi] = log_w[i];
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  for (int i = 0; i < n; ++i) rule.weights[i] = std::exp(rule.log_weights[i]);
  return rule;
}

QuadratureRule gauss_legendre(int n) {
  check_order("gauss_legendre", n);
  QuadratureRule rule{QuadratureKind::Legendre, n, std::vector<double>(n), std::vector<double>(n),
                      std::vector<double>(n)};
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double deriv = 0.0;
    for (int it = 0; it < kMaxNewton; ++it) {
      double p = 1.0;
      double p_prev = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p_next = ((2.0 * j - 1.0) * z * p - (j - 1.0) * p_prev) / j;
        p_prev = p;
        p = p_next;
      }
      deriv = n * (z * p - p_prev) / (z * z - 1.0);
      const double step = p / deriv;
      z -= step;
      if (std::abs(step) <= 1e-16) break;
    }
    if (n % 2 == 1 && i == half - 1) z = 0.0;
    const double w = 2.0 / ((1.0 - z * z) * deriv * deriv);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  for (int i = 0; i < n; ++i) rule.log_weights[i] = std::log(rule.weights[i]);
  return rule;
}

std::shared_ptr<const QuadratureRule> cached_rule(QuadratureKind kind, int n) {
  static std::mutex mutex;
  static std::map<std::pair<QuadratureKind, int>, std::shared_ptr<const QuadratureRule>> cache;
  const auto key = std::make_pair(kind, n);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const QuadratureRule>(
      kind == QuadratureKind::Hermite ? gauss_hermite(n) : gauss_legendre(n));
  std::lock_guard lock(mutex);
  return cache.try_emplace(key, std::move(rule)).first->second;
}

}  // namespace fsoqkd::quadrature
