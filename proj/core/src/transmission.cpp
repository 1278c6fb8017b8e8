#include "fsoqkd/transmission.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fsoqkd/specfun.hpp"

namespace fsoqkd::transmission {

namespace {

using quadrature::QuadratureKind;
using quadrature::QuadratureRule;

constexpr double kInvSqrtPi = std::numbers::inv_sqrtpi;
constexpr double kSqrt3 = std::numbers::sqrt3;

// Pointing parameters and thresholds expressed in units of sigma_H.
struct Scaled {
  double mu_v;
  double sigma_v;
  double lambda;
  double scale;  // sigma_H

  explicit Scaled(const PointingParams& p)
      : mu_v(p.mu_v / p.sigma_h),
        sigma_v(p.sigma_v / p.sigma_h),
        lambda(p.noncentrality()),
        scale(p.sigma_h) {}

  double angle(double a) const { return a / scale; }
  double squared(double t) const { return t / (scale * scale); }
  double node(double x) const { return std::numbers::sqrt2 * sigma_v * x + mu_v; }
};

// Pr{ theta_H^2 / sigma_H^2 <= r }, zero for r <= 0.
double chi2_cdf(double r, double lambda) {
  return r > 0.0 ? specfun::noncentral_chi2_cdf_1dof(r, lambda) : 0.0;
}

double marcum_half(double lambda, double r) {
  return specfun::marcum_q(specfun::MarcumOrder(0.5), std::sqrt(lambda), r > 0.0 ? std::sqrt(r) : 0.0);
}

struct ClampTracker {
  int events = 0;
  double magnitude = 0.0;

  double operator()(double v, double lo, double hi) {
    const double c = std::clamp(v, lo, hi);
    if (c != v) {
      ++events;
      magnitude = std::max(magnitude, std::abs(c - v));
    }
    return c;
  }
};

TpResult finish(double raw, Method method, int n_terms, ClampTracker clamps = {}) {
  const double value = clamps(raw, 0.0, 1.0);
  return {value, method, n_terms, clamps.events, clamps.magnitude};
}

TpResult zero(Method method, int n_terms) { return {0.0, method, n_terms, 0, 0.0}; }

const QuadratureRule& hermite(int n, std::shared_ptr<const QuadratureRule>& holder) {
  holder = quadrature::cached_rule(QuadratureKind::Hermite, n);
  return *holder;
}

void require_hermite(const QuadratureRule& rule) {
  if (rule.kind != QuadratureKind::Hermite) {
    throw std::invalid_argument("Gauss-Hermite rule required");
  }
}

void require_alpha(double alpha) {
  if (!(std::isfinite(alpha) && alpha > 0.0)) {
    throw std::invalid_argument("alpha must be positive");
  }
}

// Three-point rule shared by the robust approximations.
template <class Phi>
double three_point(double mu_v, double sigma_v, Phi phi) {
  const double d = kSqrt3 * sigma_v;
  return (2.0 / 3.0) * phi(mu_v) + (1.0 / 6.0) * phi(mu_v + d) + (1.0 / 6.0) * phi(mu_v - d);
}

double gaussian_factor(const PointingParams& p, double shift) {
  const double m = (shift + p.mu_v) / p.sigma_v;
  return std::exp(-0.5 * p.noncentrality() - 0.5 * m * m);
}

double gamma_three_halves() { return std::exp(specfun::ln_gamma(1.5)); }

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::GHQ: return "ghq";
    case Method::Robust: return "robust";
    case Method::Asymptotic: return "asymptotic";
    case Method::ExactClosedForm: return "exact";
    case Method::LegendreQuadrature: return "legendre";
    case Method::Simplified: return "simplified";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// TPLR

TpResult tplr_ghq(const PointingParams& p, double theta_d, int n) {
  std::shared_ptr<const QuadratureRule> holder;
  return tplr_ghq(p, theta_d, hermite(n, holder));
}

TpResult tplr_ghq(const PointingParams& p, double theta_d, const QuadratureRule& rule) {
  p.validate();
  require_hermite(rule);
  if (!(theta_d > 0.0)) return zero(Method::GHQ, rule.order);
  const Scaled s(p);
  const double t_d = s.squared(theta_d);
  double sum = 0.0;
  for (int i = 0; i < rule.order; ++i) {
    if (rule.weights[i] == 0.0) continue;
    const double y = s.node(rule.nodes[i]);
    sum += rule.weights[i] * chi2_cdf(t_d - y * y, s.lambda);
  }
  return finish(sum * kInvSqrtPi, Method::GHQ, rule.order);
}

TpResult tplr_robust(const PointingParams& p, double theta_d) {
  p.validate();
  if (!(theta_d > 0.0)) return zero(Method::Robust, 3);
  const Scaled s(p);
  const double t_d = s.squared(theta_d);
  const double raw = three_point(s.mu_v, s.sigma_v, [&](double y) {
    return chi2_cdf(t_d - y * y, s.lambda);
  });
  return finish(raw, Method::Robust, 3);
}

TpResult tplr_asymptotic(const PointingParams& p, double theta_d) {
  p.validate();
  if (!(theta_d > 0.0)) return zero(Method::Asymptotic, 0);
  const Scaled s(p);
  const double c = std::sqrt(std::numbers::pi) / (4.0 * gamma_three_halves() * s.sigma_v);
  return finish(c * gaussian_factor(p, 0.0) * s.squared(theta_d), Method::Asymptotic, 0);
}

double turbulence_log_mean(const TurbulenceParams& turb) {
  turb.validate();
  // digamma_minus_log keeps each difference accurate for large parameters.
  return specfun::digamma_minus_log(turb.alpha_d) + specfun::digamma_minus_log(turb.beta_d);
}

TpResult tplr_turbulence_asymptotic(const PointingParams& p, double theta_d, double g_d,
                                    const TurbulenceParams& turb) {
  p.validate();
  if (!(std::isfinite(g_d) && g_d > 0.0)) throw std::invalid_argument("g_d must be positive");
  const double log_mean = turbulence_log_mean(turb);
  const Scaled s(p);
  const double c = std::sqrt(std::numbers::pi) / (4.0 * gamma_three_halves() * s.sigma_v);
  const double factor = c * gaussian_factor(p, 0.0);
  const double base = theta_d > 0.0 ? s.squared(theta_d) : 0.0;
  const double correction = log_mean / (g_d * p.sigma_h * p.sigma_h);
  return finish(factor * (base + correction), Method::Asymptotic, 0);
}

TpResult tplr_hoyt(double sigma_v, double sigma_h, double theta_d) {
  PointingParams{0.0, 0.0, sigma_v, sigma_h}.validate();
  if (sigma_v == sigma_h) {
    throw std::invalid_argument("tplr_hoyt: equal sigmas, use tplr_rayleigh");
  }
  if (!(theta_d > 0.0)) return zero(Method::ExactClosedForm, 0);
  const double q = std::min(sigma_v, sigma_h) / std::max(sigma_v, sigma_h);
  const double q2 = q * q;
  const double k = (1.0 - q2) / (1.0 + q2);
  const double hi = std::max(sigma_v, sigma_h);
  // (sigma_V^2 + sigma_H^2) = hi^2 (1 + q^2)
  const double x = (1.0 + q2) * (theta_d / (hi * hi)) / (4.0 * q2);
  return finish(2.0 * q / (1.0 + q2) * specfun::rice_ie(k, x), Method::ExactClosedForm, 0);
}

TpResult tplr_rayleigh(double sigma, double theta_d) {
  if (!(std::isfinite(sigma) && sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (!(theta_d > 0.0)) return zero(Method::ExactClosedForm, 0);
  return finish(-std::expm1(-theta_d / (2.0 * sigma * sigma)), Method::ExactClosedForm, 0);
}

TpResult tplr_rice(double mu_v, double mu_h, double sigma, double theta_d) {
  PointingParams{mu_v, mu_h, sigma, sigma}.validate();
  if (!(theta_d > 0.0)) return zero(Method::ExactClosedForm, 0);
  const double a = std::hypot(mu_v, mu_h) / sigma;
  const double b = std::sqrt(theta_d) / sigma;
  return finish(specfun::marcum_q_complement(specfun::MarcumOrder(1.0), a, b),
                Method::ExactClosedForm, 0);
}

TpResult tplr_rice_asymptotic(double mu_v, double mu_h, double sigma, double theta_d) {
  PointingParams{mu_v, mu_h, sigma, sigma}.validate();
  if (!(theta_d > 0.0)) return zero(Method::Asymptotic, 0);
  const double s2 = 2.0 * sigma * sigma;
  const double r2 = mu_v * mu_v + mu_h * mu_h;
  return finish(std::exp(-r2 / s2) * theta_d / s2, Method::Asymptotic, 0);
}

// ---------------------------------------------------------------------------
// TPE

TpResult tpe_ghq(const PointingParams& p, double theta_e, double alpha, int n) {
  std::shared_ptr<const QuadratureRule> holder;
  return tpe_ghq(p, theta_e, alpha, hermite(n, holder));
}

TpResult tpe_ghq(const PointingParams& p, double theta_e, double alpha,
                 const QuadratureRule& rule) {
  p.validate();
  require_alpha(alpha);
  require_hermite(rule);
  if (theta_e <= -0.25 * alpha * alpha) return {1.0, Method::GHQ, rule.order, 0, 0.0};
  const Scaled s(p);
  const double t_e = s.squared(theta_e);
  const double a = s.angle(alpha);
  // Accumulates the complement Pr{theta^2 + alpha theta_V < Theta_E}; nodes
  // whose indicator is false contribute nothing to it.
  double sum = 0.0;
  for (int i = 0; i < rule.order; ++i) {
    if (rule.weights[i] == 0.0) continue;
    const double y = s.node(rule.nodes[i]);
    sum += rule.weights[i] * chi2_cdf(t_e - y * y - a * y, s.lambda);
  }
  return finish(1.0 - sum * kInvSqrtPi, Method::GHQ, rule.order);
}

TpResult tpe_robust(const PointingParams& p, double theta_e, double alpha) {
  p.validate();
  require_alpha(alpha);
  if (theta_e <= -0.25 * alpha * alpha) return {1.0, Method::Robust, 3, 0, 0.0};
  const Scaled s(p);
  const double t_e = s.squared(theta_e);
  const double a = s.angle(alpha);
  const double raw = three_point(s.mu_v, s.sigma_v, [&](double y) {
    const double r = t_e - y * y - a * y;
    return r >= 0.0 ? marcum_half(s.lambda, r) : 1.0;
  });
  return finish(raw, Method::Robust, 3);
}

TpResult tpe_asymptotic(const PointingParams& p, double theta_e, double alpha) {
  p.validate();
  require_alpha(alpha);
  if (theta_e <= -0.25 * alpha * alpha) return {1.0, Method::Asymptotic, 0, 0, 0.0};
  const Scaled s(p);
  const double a = s.angle(alpha);
  const double bracket = a * a + 4.0 * s.squared(theta_e);
  const double c = std::sqrt(std::numbers::pi) / (16.0 * s.sigma_v * gamma_three_halves());
  return finish(1.0 - c * bracket * gaussian_factor(p, 0.5 * alpha), Method::Asymptotic, 0);
}

// ---------------------------------------------------------------------------
// TPRE

TpResult tpre_ghq(const PointingParams& p, double theta_d, double theta_e, double alpha, int n) {
  std::shared_ptr<const QuadratureRule> holder;
  return tpre_ghq(p, theta_d, theta_e, alpha, hermite(n, holder));
}

TpResult tpre_ghq(const PointingParams& p, double theta_d, double theta_e, double alpha,
                  const QuadratureRule& rule) {
  p.validate();
  require_alpha(alpha);
  require_hermite(rule);
  if (!(theta_d > 0.0)) return zero(Method::GHQ, rule.order);
  const Scaled s(p);
  const double t_d = s.squared(theta_d);
  const double t_e = s.squared(theta_e);
  const double a = s.angle(alpha);
  const double gate = (t_e - t_d) / a;
  ClampTracker clamps;
  double sum = 0.0;
  for (int i = 0; i < rule.order; ++i) {
    if (rule.weights[i] == 0.0) continue;
    const double y = s.node(rule.nodes[i]);
    if (!(y >= gate)) continue;
    const double inside_d = chi2_cdf(t_d - y * y, s.lambda);
    const double inside_e = chi2_cdf(t_e - y * y - a * y, s.lambda);
    sum += rule.weights[i] * clamps(inside_d - inside_e, 0.0, 1.0);
  }
  return finish(sum * kInvSqrtPi, Method::GHQ, rule.order, clamps);
}

TpResult tpre_robust(const PointingParams& p, double theta_d, double theta_e, double alpha,
                     RobustTpreForm form) {
  p.validate();
  require_alpha(alpha);
  if (!(theta_d > 0.0)) return zero(Method::Robust, 3);
  const Scaled s(p);
  const double t_d = s.squared(theta_d);
  const double t_e = s.squared(theta_e);
  const double a = s.angle(alpha);
  ClampTracker clamps;
  double raw = 0.0;
  if (form == RobustTpreForm::AsPrinted) {
    const double gate = t_e / (2.0 * a) - t_d / a;
    raw = three_point(s.mu_v, s.sigma_v, [&](double x) {
      if (!(x >= gate)) return 0.0;
      const double r_e = t_e >= 2.0 * (x * x + a * x) ? 0.5 * t_e - (x * x - a * x) : 0.0;
      const double r_d = t_d >= x * x ? t_d - x * x : 0.0;
      return marcum_half(s.lambda, r_e) - marcum_half(s.lambda, r_d);
    });
  } else {
    const double gate = (t_e - t_d) / a;
    raw = three_point(s.mu_v, s.sigma_v, [&](double y) {
      if (!(y >= gate)) return 0.0;
      const double inside_d = chi2_cdf(t_d - y * y, s.lambda);
      const double inside_e = chi2_cdf(t_e - y * y - a * y, s.lambda);
      return clamps(inside_d - inside_e, 0.0, 1.0);
    });
  }
  return finish(raw, Method::Robust, 3, clamps);
}

TpResult tpre_asymptotic(const PointingParams& p, double theta_d) {
  return tplr_asymptotic(p, theta_d);
}

TpResult tpre_rayleigh_quadrature(double sigma, double theta_d, double theta_e_vc, double alpha,
                                  int n) {
  if (!(std::isfinite(sigma) && sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  require_alpha(alpha);
  const auto holder = quadrature::cached_rule(QuadratureKind::Legendre, n);
  const QuadratureRule& rule = *holder;
  if (!(theta_d > 0.0)) return zero(Method::LegendreQuadrature, n);
  const double s2 = sigma * sigma;
  const double t_d = theta_d / s2;
  const double t_e = theta_e_vc / s2;
  const double a = alpha / sigma;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = 0.5 * t_d * (rule.nodes[i] + 1.0);
    const double root = std::sqrt(x);
    // (max{T_E, 2x - 2a sqrt(x)} - 2x) / (2a sqrt(x)) without the cancellation.
    const double arg = std::clamp((t_e - 2.0 * x) / (2.0 * a * root), -1.0, 1.0);
    // alpha cancels against the 1/alpha prefactor.
    sum += rule.weights[i] * std::exp(-0.5 * x) * (std::numbers::pi - 2.0 * std::asin(arg));
  }
  return finish(t_d / (8.0 * std::numbers::pi) * sum, Method::LegendreQuadrature, n);
}

TpResult tpre_rayleigh_simplified(double sigma, double theta_d) {
  TpResult r = tplr_rayleigh(sigma, theta_d);
  r.method = Method::Simplified;
  return r;
}

double joint_pdf_xy(double sigma, double alpha, double x, double y) {
  if (!(std::isfinite(sigma) && sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  require_alpha(alpha);
  if (!(x > 0.0)) return 0.0;
  const double u = (y - 2.0 * x) / (2.0 * alpha);
  const double bracket = x - u * u;
  if (!(bracket > 0.0)) return 0.0;
  return std::exp(-x / (2.0 * sigma * sigma)) / (4.0 * std::numbers::pi * sigma * sigma * alpha *
                                                 std::sqrt(bracket));
}

}  // namespace fsoqkd::transmission
