#pragma once

// Scalar special functions used by the transmission-probability formulas.
//
// All functions are pure and thread-safe. Arguments outside the documented
// domain raise std::domain_error.

namespace fsoqkd::specfun {

/// Order M of the generalized Marcum Q-function. Must be strictly positive.
class MarcumOrder {
 public:
  explicit MarcumOrder(double m);
  double value() const noexcept { return m_; }

 private:
  double m_;
};

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// Digamma psi(x) for x > 0.
double digamma(double x);

/// psi(x) - ln(x), evaluated without cancellation for large x. Always < 0.
double digamma_minus_log(double x);

/// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s).
double regularized_gamma_p(double s, double x);

/// Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x).
double regularized_gamma_q(double s, double x);

/// Lower incomplete gamma gamma(s, x) = int_0^x t^(s-1) e^(-t) dt (unregularized).
double lower_incomplete_gamma(double s, double x);

/// Modified Bessel function of the first kind I_nu(x), x >= 0.
///
/// Supports nu > -1 and any integer nu. Half-integer |nu| = 1/2 use the closed
/// hyperbolic forms; otherwise the ascending series is summed, switching to the
/// large-argument expansion once x dominates the order.
double bessel_i(double nu, double x);

/// Generalized Marcum Q-function Q_M(a, b).
///
/// Evaluated as the Poisson mixture of regularized upper incomplete gammas
///   Q_M(a, b) = sum_n e^{-a^2/2} (a^2/2)^n / n! * Q(M + n, b^2 / 2),
/// summed outward from the Poisson mode until both the remaining Poisson mass
/// and the latest term fall below 1e-15.
double marcum_q(MarcumOrder order, double a, double b);

/// Complement 1 - Q_M(a, b), summed directly so that small values keep full
/// relative precision.
double marcum_q_complement(MarcumOrder order, double a, double b);

/// Small-b leading-order form 1 - e^{-a^2/2} b^{2M} / (Gamma(M+1) 2^M).
/// No gating on b; callers decide when it is appropriate.
double marcum_q_asymptotic(MarcumOrder order, double a, double b);

/// Rice Ie-function Ie(k, x) = int_0^x e^{-t} I_0(k t) dt for 0 <= k < 1,
/// computed through the two first-order Marcum Q terms.
double rice_ie(double k, double x);

/// CDF of the noncentral chi-squared law with one degree of freedom and
/// noncentrality lambda: 0 for x < 0, else 1 - Q_{1/2}(sqrt(lambda), sqrt(x)).
double noncentral_chi2_cdf_1dof(double x, double lambda);

}  // namespace fsoqkd::specfun
