#pragma once

// Link-budget constants and the power-to-angle threshold transforms.
//
// Units: angles in radians, wavelengths and distances in meters, powers in
// watts. Gains and efficiencies are dimensionless.

namespace fsoqkd::linkmodel {

/// Beckmann pointing-error parameters: theta_V ~ N(mu_v, sigma_v^2) (elevation),
/// theta_H ~ N(mu_h, sigma_h^2) (azimuth), independent.
struct PointingParams {
  double mu_v = 0.0;
  double mu_h = 0.0;
  double sigma_v = 0.0;
  double sigma_h = 0.0;

  /// Throws std::invalid_argument unless both sigmas are positive and all
  /// fields are finite.
  void validate() const;

  /// lambda = mu_h^2 / sigma_h^2.
  double noncentrality() const noexcept { return (mu_h / sigma_h) * (mu_h / sigma_h); }
};

struct LinkBudget {
  double p_s = 1.0;     // transmit optical power
  double g_s = 1.0;     // sender telescope gain
  double g_e = 1.0;     // eavesdropper telescope gain
  double eta_s = 1.0;   // sender optical efficiency
  double eta_d = 1.0;   // receiver optical efficiency
  double eta_e = 1.0;   // eavesdropper optical efficiency
  double eta_q = 1.0;   // detector quantum efficiency
  double eta_b = 1.0;   // backflash probability
  double lambda1 = 1.0; // signal wavelength
  double lambda2 = 1.0; // backflash wavelength
  double z1 = 1.0;      // sender-receiver distance
  double z2 = 1.0;      // receiver-eavesdropper distance
  double la1 = 1.0;     // atmospheric loss over z1
  double la2 = 1.0;     // atmospheric loss over z2

  void validate() const;
};

/// K1 = eta_q P_S G_S eta_S eta_D (L_A(Z1) / Z1^2) (lambda1 / 4 pi)^2.
double k1(const LinkBudget& budget);

/// K2 = eta_B eta_q eta_D eta_E G_E (L_A(Z2) / Z2^2) (lambda2 / 4 pi)^2.
double k2(const LinkBudget& budget);

/// The two system constants, either derived from a LinkBudget or given directly.
struct LinkConstants {
  double k1 = 0.0;
  double k2 = 0.0;

  static LinkConstants from_budget(const LinkBudget& budget);
  void validate() const;
};

struct Scenario {
  PointingParams pointing;
  LinkConstants constants;
  double g_d = 0.0;       // receiver telescope gain
  double lambda_d = 0.0;  // receiver power threshold
  double lambda_e = 0.0;  // eavesdropper power threshold
  double alpha = 0.0;     // wiretap pointing offset

  void validate() const;
};

/// Gamma-Gamma turbulence parameters (large- and small-scale).
struct TurbulenceParams {
  double alpha_d = 0.0;
  double beta_d = 0.0;

  void validate() const;
};

/// Receiver telescope gain (pi d / lambda)^2 for aperture diameter d.
double gain_from_aperture(double diameter, double wavelength);

/// Theta_D = -ln(lambda_D / (K1 G_D)) / G_D. May be negative.
double theta_d(const Scenario& s);

/// Theta_E = -ln(lambda_E / (K1 K2 G_D^2)) / (2 G_D) - alpha^2 / 2.
double theta_e(const Scenario& s);

/// Doubled convention used by the Rayleigh joint-density analysis:
/// -ln(lambda_E e^{G_D alpha^2} / (K1 K2 G_D^2)) / G_D, identically 2 theta_e(s).
double theta_e_rayleigh(const Scenario& s);

/// Stationary gain e sqrt(lambda_E / (K1 K2)) at which theta_e peaks.
double g_d_star(const Scenario& s);

/// Peak value sqrt(K1 K2) / (e sqrt(lambda_E)) - alpha^2 / 2.
double theta_e_max(const Scenario& s);

/// True when the eavesdropper event is certain, i.e. theta_e(s) <= -alpha^2/4.
/// In this regime TPE = 1 and TPRE collapses onto TPLR.
bool eavesdropper_inactive(const Scenario& s);

}  // namespace fsoqkd::linkmodel
