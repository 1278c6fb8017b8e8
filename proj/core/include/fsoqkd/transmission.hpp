#pragma once

// Transmission probabilities for a free-space-optical QKD link whose receiver
// suffers Beckmann-distributed pointing errors.
//
//   TPLR  = Pr{ theta_V^2 + theta_H^2 <= Theta_D }
//   TPE   = Pr{ theta_V^2 + theta_H^2 + alpha theta_V >= Theta_E }
//   TPRE  = Pr{ both of the above }
//
// Every function returns a probability clamped to [0, 1]. Quadrature sums can
// leave that interval by quadrature error; when that happens the clamp is
// recorded in TpResult::clamp_events / clamp_magnitude.
//
// Integrands are evaluated with all angles expressed in units of sigma_H.

#include <string_view>

#include "fsoqkd/linkmodel.hpp"
#include "fsoqkd/quadrature.hpp"

namespace fsoqkd::transmission {

using linkmodel::PointingParams;
using linkmodel::TurbulenceParams;

enum class Method { GHQ, Robust, Asymptotic, ExactClosedForm, LegendreQuadrature, Simplified };

std::string_view to_string(Method m) noexcept;

struct TpResult {
  double value = 0.0;
  Method method = Method::ExactClosedForm;
  int n_terms = 0;  // quadrature order, 0 for closed forms
  int clamp_events = 0;
  double clamp_magnitude = 0.0;  // largest |raw - clamped| seen
};

// ---------------------------------------------------------------------------
// TPLR

/// Gauss-Hermite evaluation of TPLR over theta_V; the inner theta_H
/// probability is the 1-dof noncentral chi-squared CDF. Returns 0 for
/// theta_d <= 0.
TpResult tplr_ghq(const PointingParams& p, double theta_d,
                  int n = quadrature::kDefaultHermiteOrder);
TpResult tplr_ghq(const PointingParams& p, double theta_d, const quadrature::QuadratureRule& rule);

/// Three-point (2/3, 1/6, 1/6) rule at mu_V and mu_V +- sqrt(3) sigma_V.
/// Intended for sigma_V^2 << sigma_H^2.
TpResult tplr_robust(const PointingParams& p, double theta_d);

/// Small-Theta_D form, linear in theta_d:
///   sqrt(pi) / (4 Gamma(1.5) sigma_V sigma_H) exp(-lambda/2 - mu_V^2 / (2 sigma_V^2)) Theta_D.
TpResult tplr_asymptotic(const PointingParams& p, double theta_d);

/// tplr_asymptotic plus the Gamma-Gamma turbulence term, which is proportional
/// to psi(alpha_D) + psi(beta_D) - ln(alpha_D beta_D) / G_D and never positive.
TpResult tplr_turbulence_asymptotic(const PointingParams& p, double theta_d, double g_d,
                                    const TurbulenceParams& turb);

/// psi(alpha_D) + psi(beta_D) - ln(alpha_D beta_D) = E{ln I_D} for Gamma-Gamma I_D.
double turbulence_log_mean(const TurbulenceParams& turb);

/// Zero-mean, unequal-variance (Hoyt) closed form through the Rice Ie-function.
/// Throws std::invalid_argument for sigma_v == sigma_h; use tplr_rayleigh.
TpResult tplr_hoyt(double sigma_v, double sigma_h, double theta_d);

/// 1 - exp(-Theta_D / (2 sigma^2)).
TpResult tplr_rayleigh(double sigma, double theta_d);

/// Equal-variance (Rice) closed form 1 - Q_1(sqrt(mu_V^2 + mu_H^2) / sigma, sqrt(Theta_D) / sigma).
TpResult tplr_rice(double mu_v, double mu_h, double sigma, double theta_d);

TpResult tplr_rice_asymptotic(double mu_v, double mu_h, double sigma, double theta_d);

// ---------------------------------------------------------------------------
// TPE. theta_e uses the convention of linkmodel::theta_e.

/// Gauss-Hermite TPE. Exactly 1 when theta_e <= -alpha^2/4.
TpResult tpe_ghq(const PointingParams& p, double theta_e, double alpha,
                 int n = quadrature::kDefaultHermiteOrder);
TpResult tpe_ghq(const PointingParams& p, double theta_e, double alpha,
                 const quadrature::QuadratureRule& rule);

TpResult tpe_robust(const PointingParams& p, double theta_e, double alpha);

/// Linear behaviour just right of Theta_E = -alpha^2/4; exactly 1 left of it.
TpResult tpe_asymptotic(const PointingParams& p, double theta_e, double alpha);

// ---------------------------------------------------------------------------
// TPRE

/// Gauss-Hermite TPRE. Node contributions (TPLR part minus the eavesdropper
/// part, gated by theta_V >= (Theta_E - Theta_D) / alpha) are clamped to >= 0.
TpResult tpre_ghq(const PointingParams& p, double theta_d, double theta_e, double alpha,
                  int n = quadrature::kDefaultHermiteOrder);
TpResult tpre_ghq(const PointingParams& p, double theta_d, double theta_e, double alpha,
                  const quadrature::QuadratureRule& rule);

/// Which three-point TPRE integrand to use.
///
/// AsPrinted is the closed three-point TPRE formula term by term: the eavesdropper
/// argument is (Theta_E/2 - (x^2 - alpha x)) / sigma_H^2 gated by
/// Theta_E >= 2(x^2 + alpha x), and the outer gate is x >= Theta_E/(2 alpha) - Theta_D/alpha.
/// With theta_e in the linkmodel::theta_e convention this does not match the
/// Gauss-Hermite integrand. ConsistentWithGhq evaluates the Gauss-Hermite
/// integrand at the three robust nodes instead.
enum class RobustTpreForm { AsPrinted, ConsistentWithGhq };

TpResult tpre_robust(const PointingParams& p, double theta_d, double theta_e, double alpha,
                     RobustTpreForm form = RobustTpreForm::AsPrinted);

/// Same expression as tplr_asymptotic (large-G_D limit where the eavesdropper
/// constraint is inactive).
TpResult tpre_asymptotic(const PointingParams& p, double theta_d);

/// Rayleigh-case TPRE (zero means, common sigma) by Gauss-Legendre over
/// X = theta^2 in [0, Theta_D], with the inner Y-integral in closed form.
/// theta_e_vc is the doubled convention (linkmodel::theta_e_rayleigh).
TpResult tpre_rayleigh_quadrature(double sigma, double theta_d, double theta_e_vc, double alpha,
                                  int n = quadrature::kDefaultLegendreOrder);

/// 1 - exp(-Theta_D / (2 sigma^2)); valid only while the eavesdropper
/// constraint is inactive (theta_e <= -alpha^2/4).
TpResult tpre_rayleigh_simplified(double sigma, double theta_d);

/// Joint density of X = theta_V^2 + theta_H^2 and Y = 2X + 2 alpha theta_V in
/// the Rayleigh case. Zero outside the open support |y - 2x| < 2 alpha sqrt(x).
double joint_pdf_xy(double sigma, double alpha, double x, double y);

}  // namespace fsoqkd::transmission
