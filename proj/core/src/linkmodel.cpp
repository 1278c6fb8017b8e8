#include "fsoqkd/linkmodel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fsoqkd::linkmodel {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }
bool fraction(double v) { return positive(v) && v <= 1.0; }

double free_space_factor(double loss, double distance, double wavelength) {
  const double ratio = wavelength / (4.0 * std::numbers::pi);
  return loss / (distance * distance) * ratio * ratio;
}

}  // namespace

void PointingParams::validate() const {
  require(std::isfinite(mu_v) && std::isfinite(mu_h), "PointingParams: means must be finite");
  require(positive(sigma_v), "PointingParams: sigma_v must be positive");
  require(positive(sigma_h), "PointingParams: sigma_h must be positive");
  require(std::isfinite(noncentrality()), "PointingParams: noncentrality must be finite");
}

void LinkBudget::validate() const {
  require(positive(p_s), "LinkBudget: p_s must be positive");
  require(positive(g_s) && positive(g_e), "LinkBudget: telescope gains must be positive");
  require(fraction(eta_s) && fraction(eta_d) && fraction(eta_e),
          "LinkBudget: optical efficiencies must lie in (0, 1]");
  require(fraction(eta_q), "LinkBudget: eta_q must lie in (0, 1]");
  require(fraction(eta_b), "LinkBudget: eta_b must lie in (0, 1]");
  require(positive(lambda1) && positive(lambda2), "LinkBudget: wavelengths must be positive");
  require(positive(z1) && positive(z2), "LinkBudget: distances must be positive");
  require(fraction(la1) && fraction(la2), "LinkBudget: atmospheric losses must lie in (0, 1]");
}

double k1(const LinkBudget& b) {
  b.validate();
  return b.eta_q * b.p_s * b.g_s * b.eta_s * b.eta_d * free_space_factor(b.la1, b.z1, b.lambda1);
}

double k2(const LinkBudget& b) {
  b.validate();
  return b.eta_b * b.eta_q * b.eta_d * b.eta_e * b.g_e *
         free_space_factor(b.la2, b.z2, b.lambda2);
}

LinkConstants LinkConstants::from_budget(const LinkBudget& budget) {
  return {linkmodel::k1(budget), linkmodel::k2(budget)};
}

void LinkConstants::validate() const {
  require(positive(k1), "LinkConstants: k1 must be positive");
  require(positive(k2), "LinkConstants: k2 must be positive");
}

void Scenario::validate() const {
  pointing.validate();
  constants.validate();
  require(positive(g_d), "Scenario: g_d must be positive");
  require(positive(lambda_d), "Scenario: lambda_d must be positive");
  require(positive(lambda_e), "Scenario: lambda_e must be positive");
  require(positive(alpha), "Scenario: alpha must be positive");
}

void TurbulenceParams::validate() const {
  require(positive(alpha_d), "TurbulenceParams: alpha_d must be positive");
  require(positive(beta_d), "TurbulenceParams: beta_d must be positive");
}

double gain_from_aperture(double diameter, double wavelength) {
  require(positive(diameter) && positive(wavelength),
          "gain_from_aperture: diameter and wavelength must be positive");
  const double r = std::numbers::pi * diameter / wavelength;
  return r * r;
}

double theta_d(const Scenario& s) {
  return -std::log(s.lambda_d / (s.constants.k1 * s.g_d)) / s.g_d;
}

double theta_e(const Scenario& s) {
  const double gain_sq = s.g_d * s.g_d;
  return -std::log(s.lambda_e / (s.constants.k1 * s.constants.k2 * gain_sq)) / (2.0 * s.g_d) -
         0.5 * s.alpha * s.alpha;
}

double theta_e_rayleigh(const Scenario& s) {
  // ln(lambda_E e^{G alpha^2} / (K1 K2 G^2)) expanded so the exponential cannot overflow.
  const double gain_sq = s.g_d * s.g_d;
  const double log_arg = std::log(s.lambda_e / (s.constants.k1 * s.constants.k2 * gain_sq)) +
                         s.g_d * s.alpha * s.alpha;
  return -log_arg / s.g_d;
}

double g_d_star(const Scenario& s) {
  return std::numbers::e * std::sqrt(s.lambda_e / (s.constants.k1 * s.constants.k2));
}

double theta_e_max(const Scenario& s) {
  return std::sqrt(s.constants.k1 * s.constants.k2) / (std::numbers::e * std::sqrt(s.lambda_e)) -
         0.5 * s.alpha * s.alpha;
}

bool eavesdropper_inactive(const Scenario& s) {
  return theta_e(s) <= -0.25 * s.alpha * s.alpha;
}

}  // namespace fsoqkd::linkmodel
