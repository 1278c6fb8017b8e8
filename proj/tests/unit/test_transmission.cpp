#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fsoqkd/linkmodel.hpp"
#include "fsoqkd/oracle.hpp"
#include "fsoqkd/specfun.hpp"
#include "fsoqkd/transmission.hpp"

using namespace fsoqkd;
using namespace fsoqkd::transmission;

namespace {

const double kLn2 = std::numbers::ln2;

PointingParams fig3(double sigma_h2 = 1e-10) { return {1e-8, 5e-8, std::sqrt(1e-12), std::sqrt(sigma_h2)}; }

linkmodel::LinkConstants system_constants() {
  linkmodel::LinkBudget b;
  b.g_s = b.g_e = 1e9;
  b.eta_s = b.eta_d = b.eta_e = 0.9;
  b.eta_q = 0.1;
  b.eta_b = 0.04;
  b.lambda1 = b.lambda2 = 780e-9;
  b.z1 = b.z2 = 9e5;
  b.la1 = b.la2 = 0.5;
  return linkmodel::LinkConstants::from_budget(b);
}

linkmodel::Scenario fig8_scenario(double g_d) {
  linkmodel::Scenario s;
  s.pointing = fig3();
  s.constants = system_constants();
  s.g_d = g_d;
  s.lambda_d = 1e-15;
  s.lambda_e = 1e-20;
  s.alpha = 1e-6;
  return s;
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a * std::pow(b / a, double(i) / (n - 1)));
  return v;
}

// Pr{theta_H^2 <= r sigma_H^2} at a fixed theta_V, written out directly.
double phi_tplr(const PointingParams& p, double theta_d, double y) {
  const double r = (theta_d - y * y) / (p.sigma_h * p.sigma_h);
  return specfun::noncentral_chi2_cdf_1dof(r, p.noncentrality());
}

}  // namespace

TEST_SUITE("transmission") {
  TEST_CASE("tplr_ghq boundaries") {
    CHECK(tplr_ghq(fig3(), 0.0).value == 0.0);
    CHECK(tplr_ghq(fig3(), -1e-12).value == 0.0);
    CHECK(tplr_ghq(fig3(), 1.0).value == doctest::Approx(1.0));
    CHECK(tplr_ghq(fig3(), 1e-10, 300).n_terms == 300);
    CHECK(tplr_ghq(fig3(), 1e-10).method == Method::GHQ);
  }

  TEST_CASE("tplr_ghq Rayleigh median at n=300") {
    const double s2 = 1e-11;
    const PointingParams p{0, 0, std::sqrt(s2), std::sqrt(s2)};
    const double v = tplr_ghq(p, 2 * s2 * kLn2, 300).value;
    INFO("tplr_ghq = " << v);
    CHECK(std::abs(v - 0.5) <= 2e-3);
  }

  TEST_CASE("tplr_ghq is monotone in theta_d") {
    double prev = 0.0;
    for (double t : logspace(1e-13, 1e-8, 40)) {
      const double v = tplr_ghq(fig3(), t).value;
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }

  TEST_CASE("tplr_ghq matches Monte Carlo at a figure point") {
    const auto p = fig3();
    const double t = 1e-10;
    const auto mc = oracle::mc_tplr(p, t, 11, 1'000'000);
    CHECK(oracle::z_score(tplr_ghq(p, t).value, mc) < 4.0);
  }

  TEST_CASE("tplr_robust degenerate nodes") {
    PointingParams p = fig3();
    p.sigma_v = 1e-30;
    for (double t : {1e-11, 1e-10, 1e-9})
      CHECK(tplr_robust(p, t).value == doctest::Approx(phi_tplr(p, t, p.mu_v)).epsilon(1e-14));
    CHECK(tplr_robust(fig3(), 0.0).value == 0.0);
  }

  TEST_CASE("tplr_robust gap shrinks with variance ratio") {
    double prev = 1.0;
    for (double ratio : {1e-1, 1e-2, 1e-3, 1e-4}) {
      PointingParams p = fig3();
      p.sigma_v = std::sqrt(ratio) * p.sigma_h;
      double gap = 0.0;
      for (double t : logspace(1e-12, 1e-9, 16))
        gap = std::max(gap, std::abs(tplr_robust(p, t).value - tplr_ghq(p, t, 1000).value));
      CHECK(gap < prev);
      prev = gap;
    }
  }

  TEST_CASE("tplr_robust within 1e-3 of ghq at variance ratio 1e-2") {
    PointingParams p = fig3();
    p.sigma_v = 0.1 * p.sigma_h;
    for (double t : logspace(1e-12, 1e-9, 16)) {
      const double gap = std::abs(tplr_robust(p, t).value - tplr_ghq(p, t, 1000).value);
      INFO("theta_d = " << t << " gap = " << gap);
      CHECK(gap < 1e-3);
    }
  }

  TEST_CASE("tplr_asymptotic") {
    const auto p = fig3();
    CHECK(tplr_asymptotic(p, 0.0).value == 0.0);
    const double a = tplr_asymptotic(p, 1e-14).value, b = tplr_asymptotic(p, 1e-13).value;
    CHECK(std::log10(b / a) == doctest::Approx(1.0).epsilon(1e-12));
    const double expect = std::sqrt(std::numbers::pi) / (4 * std::tgamma(1.5) * p.sigma_v * p.sigma_h) *
                          std::exp(-p.noncentrality() / 2 - p.mu_v * p.mu_v / (2 * p.sigma_v * p.sigma_v)) * 1e-14;
    CHECK(a == doctest::Approx(expect).epsilon(1e-13));
    CHECK(tpre_asymptotic(p, 1e-14).value == a);
  }

  TEST_CASE("turbulence correction") {
    CHECK(turbulence_log_mean({1e9, 1e9}) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(std::abs(turbulence_log_mean({1e9, 1e9})) < 1e-8);
    const TurbulenceParams t{4.2, 1.4};
    const double c = turbulence_log_mean(t);
    CHECK(c == doctest::Approx(specfun::digamma(4.2) + specfun::digamma(1.4) - std::log(5.88)).epsilon(1e-12));
    CHECK(c < 0.0);
    const auto p = fig3();
    CHECK(tplr_turbulence_asymptotic(p, 1e-13, 1e12, t).value <= tplr_asymptotic(p, 1e-13).value);
    CHECK_THROWS_AS(tplr_turbulence_asymptotic(p, 1e-13, 0.0, t), std::invalid_argument);
  }

  TEST_CASE("closed forms") {
    const double s2 = 1e-11, s = std::sqrt(s2);
    CHECK(tplr_rayleigh(s, 0.0).value == 0.0);
    CHECK(tplr_rayleigh(s, 2 * s2 * kLn2).value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(tplr_rayleigh(s, 1.0).value == doctest::Approx(1.0));
    CHECK(tplr_rayleigh(s, 1e-11).value == doctest::Approx(0.3934693403).epsilon(1e-10));
    CHECK(tplr_hoyt(s, 2 * s, 0.0).value == 0.0);
    CHECK_THROWS_AS(tplr_hoyt(s, s, 1e-11), std::invalid_argument);
    CHECK(tplr_rice(1e-7, 2e-7, s, 0.0).value == 0.0);
    CHECK(tplr_rice(0.0, 0.0, s, 1e-11).value == doctest::Approx(tplr_rayleigh(s, 1e-11).value).epsilon(1e-13));
    CHECK(tplr_rice_asymptotic(1e-7, 2e-7, s, 0.0).value == 0.0);
  }

  TEST_CASE("hoyt against direct integration") {
    const double sv = std::sqrt(1e-11), sh = std::sqrt(5e-11);
    for (double t : {1e-12, 3e-11, 2e-10}) {
      // Pr{V^2 + H^2 <= t} by integrating the V density times the H probability.
      auto f = [&](double v) {
        const double r = std::sqrt(std::max(0.0, t - v * v));
        return std::exp(-v * v / (2 * sv * sv)) / (std::sqrt(2 * std::numbers::pi) * sv) * std::erf(r / (std::numbers::sqrt2 * sh));
      };
      const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -std::sqrt(t), std::sqrt(t), 15, 1e-13);
      CHECK(tplr_hoyt(sv, sh, t).value == doctest::Approx(ref).epsilon(1e-9));
      CHECK(tplr_hoyt(sh, sv, t).value == doctest::Approx(ref).epsilon(1e-9));
    }
  }

  TEST_CASE("rice asymptote at small threshold") {
    const double s = std::sqrt(1e-13);
    const double t = 1e-17;
    CHECK(tplr_rice_asymptotic(1e-7, 5e-7, s, t).value ==
          doctest::Approx(tplr_rice(1e-7, 5e-7, s, t).value).epsilon(1e-3));
  }

  TEST_CASE("tpe boundaries") {
    const auto p = fig3();
    const double a = 1e-6;
    for (double k : {1.0, 2.0, 100.0}) {
      CHECK(tpe_ghq(p, -k * a * a / 4, a).value == 1.0);
      CHECK(tpe_robust(p, -k * a * a / 4, a).value == 1.0);
      CHECK(tpe_asymptotic(p, -k * a * a / 4, a).value == 1.0);
    }
    CHECK(tpe_ghq(p, 1.0, a).value == doctest::Approx(0.0));
    CHECK(tpe_robust(p, 1.0, a).value == doctest::Approx(0.0));
    CHECK_THROWS_AS(tpe_ghq(p, 0.0, 0.0), std::invalid_argument);
  }

  TEST_CASE("tpe_robust degenerate nodes") {
    PointingParams p = fig3();
    p.sigma_v = 1e-30;
    const double a = 1e-6;
    for (double te : {1e-12, 1e-11, 1e-10}) {
      const double r = (te - p.mu_v * p.mu_v - a * p.mu_v) / (p.sigma_h * p.sigma_h);
      const double phi = 1.0 - specfun::noncentral_chi2_cdf_1dof(r, p.noncentrality());
      CHECK(tpe_robust(p, te, a).value == doctest::Approx(phi).epsilon(1e-12));
    }
  }

  TEST_CASE("tpe against reference values") {
    const PointingParams p{1e-7, 0.0, std::sqrt(1e-12), std::sqrt(1e-13)};
    const double a = 1e-9;
    // One-dimensional adaptive integration over theta_V at 30 digits.
    const std::vector<std::pair<double, double>> ref = {
        {1e-14, 0.98448137270371616569}, {3e-13, 0.66856361592570870729}, {2e-12, 0.17122438884844645654}};
    for (const auto& [te, expect] : ref) {
      const auto mc = oracle::mc_tpe(p, te, a, 5, 1'000'000);
      CHECK(oracle::z_score(expect, mc) < 4.0);
      const double coarse = std::abs(tpe_ghq(p, te, a, 30).value - expect);
      const double fine = std::abs(tpe_ghq(p, te, a, 2000).value - expect);
      INFO("theta_e = " << te << " error(30) = " << coarse << " error(2000) = " << fine);
      CHECK(fine < coarse);
      CHECK(fine < 3e-3);
    }
  }

  TEST_CASE("tpe_asymptotic near the edge") {
    const PointingParams p{1e-7, 1e-8, std::sqrt(1e-12), std::sqrt(1e-13)};
    const double a = 1e-9;
    CHECK(tpe_asymptotic(p, -a * a / 4, a).value == 1.0);
    const double te = -a * a / 4 * (1 - 1e-3);
    CHECK(tpe_asymptotic(p, te, a).value == doctest::Approx(tpe_ghq(p, te, a, 1000).value).epsilon(1e-6));
  }

  TEST_CASE("tpe_robust within 1e-3 of ghq at variance ratio 1e-2") {
    for (double g : logspace(1e9, 1e14, 11)) {
      const auto s = fig8_scenario(g);
      const double te = linkmodel::theta_e(s);
      const double gap = std::abs(tpe_robust(s.pointing, te, s.alpha).value - tpe_ghq(s.pointing, te, s.alpha, 1000).value);
      INFO("g_d = " << g << " gap = " << gap);
      CHECK(gap < 1e-3);
    }
  }

  TEST_CASE("tpre collapses onto tplr when the eavesdropper is inactive") {
    const auto p = fig3();
    const double a = 1e-6;
    for (double td : logspace(1e-12, 1e-9, 7))
      for (double k : {1.0, 4.0, 400.0})
        CHECK(tpre_ghq(p, td, -k * a * a / 4, a).value == doctest::Approx(tplr_ghq(p, td).value).epsilon(1e-13));
    CHECK(tpre_ghq(p, 0.0, 1e-12, a).value == 0.0);
    CHECK(tpre_robust(p, -1.0, 1e-12, a).value == 0.0);
  }

  TEST_CASE("tpre is bounded by tplr and tpe") {
    for (double g : logspace(1e9, 1e14, 11)) {
      const auto s = fig8_scenario(g);
      const double td = linkmodel::theta_d(s), te = linkmodel::theta_e(s);
      const double pre = tpre_ghq(s.pointing, td, te, s.alpha).value;
      CHECK(pre <= tplr_ghq(s.pointing, td).value + 1e-12);
      CHECK(pre <= tpe_ghq(s.pointing, te, s.alpha).value + 1e-12);
    }
  }

  TEST_CASE("tpre matches Monte Carlo at a figure point") {
    const auto s = fig8_scenario(1e11);
    const double td = linkmodel::theta_d(s), te = linkmodel::theta_e(s);
    const auto mc = oracle::mc_tpre(s.pointing, td, te, s.alpha, 8, 1'000'000);
    CHECK(oracle::z_score(tpre_ghq(s.pointing, td, te, s.alpha).value, mc) < 4.0);
  }

  TEST_CASE("tpre_robust degenerate nodes") {
    auto s = fig8_scenario(1e11);
    s.pointing.sigma_v = 1e-30;
    const double td = linkmodel::theta_d(s), te = linkmodel::theta_e(s);
    const auto& p = s.pointing;
    const double y = p.mu_v;
    const double h2 = p.sigma_h * p.sigma_h;
    const double d = specfun::noncentral_chi2_cdf_1dof((td - y * y) / h2, p.noncentrality());
    const double e = specfun::noncentral_chi2_cdf_1dof((te - y * y - s.alpha * y) / h2, p.noncentrality());
    const double phi = y >= (te - td) / s.alpha ? std::max(0.0, d - e) : 0.0;
    CHECK(tpre_robust(p, td, te, s.alpha, RobustTpreForm::ConsistentWithGhq).value ==
          doctest::Approx(phi).epsilon(1e-12));
  }

  TEST_CASE("tpre_robust within 1e-3 of ghq at variance ratio 1e-2") {
    for (double g : logspace(1e9, 1e14, 11)) {
      const auto s = fig8_scenario(g);
      const double td = linkmodel::theta_d(s), te = linkmodel::theta_e(s);
      const double ghq = tpre_ghq(s.pointing, td, te, s.alpha, 1000).value;
      const double rob = tpre_robust(s.pointing, td, te, s.alpha, RobustTpreForm::ConsistentWithGhq).value;
      INFO("g_d = " << g << " gap = " << std::abs(rob - ghq));
      CHECK(std::abs(rob - ghq) < 1e-3);
    }
  }

  TEST_CASE("tpre_robust printed form differs from the consistent form") {
    const auto s = fig8_scenario(1e11);
    const double td = linkmodel::theta_d(s), te = linkmodel::theta_e(s);
    const double printed = tpre_robust(s.pointing, td, te, s.alpha).value;
    const double consistent = tpre_robust(s.pointing, td, te, s.alpha, RobustTpreForm::ConsistentWithGhq).value;
    CHECK(printed >= 0.0);
    CHECK(printed <= 1.0);
    CHECK(std::abs(printed - consistent) > 1e-2);
  }

  TEST_CASE("rayleigh tpre quadrature") {
    const double s2 = 1e-11, s = std::sqrt(s2), a = 1e-6;
    CHECK(tpre_rayleigh_quadrature(s, 0.0, 1e-12, a).value == 0.0);
    for (double td : logspace(1e-13, 1e-9, 9)) {
      const double te_vc = -1e3 * a * a;
      CHECK(std::abs(tpre_rayleigh_quadrature(s, td, te_vc, a).value - tpre_rayleigh_simplified(s, td).value) < 1e-6);
    }
    CHECK(tpre_rayleigh_simplified(s, 2 * s2 * kLn2).value == doctest::Approx(0.5).epsilon(1e-15));
  }

  TEST_CASE("rayleigh tpre large-gain asymptote") {
    linkmodel::Scenario sc;
    sc.pointing = {0, 0, std::sqrt(1e-11), std::sqrt(1e-11)};
    sc.constants = system_constants();
    sc.lambda_d = 1e-15;
    sc.lambda_e = 1e-20;
    sc.alpha = 1e-6;
    for (double g : {1e15, 1e16, 1e17}) {
      sc.g_d = g;
      const double v = tpre_rayleigh_quadrature(sc.pointing.sigma_v, linkmodel::theta_d(sc),
                                                linkmodel::theta_e_rayleigh(sc), sc.alpha).value;
      const double asym = std::log(sc.constants.k1 * g / sc.lambda_d) / (2e-11 * g);
      CHECK(v == doctest::Approx(asym).epsilon(1e-2));
    }
  }

  TEST_CASE("rayleigh tpre quadrature matches Monte Carlo") {
    const double s = std::sqrt(1e-11), a = 1e-6;
    const PointingParams p{0, 0, s, s};
    for (double td : {1e-12, 1e-11, 5e-11})
      for (double te : {1e-13, 1e-12, 2e-11}) {
        const double leg = tpre_rayleigh_quadrature(s, td, 2 * te, a, 400).value;
        const auto mc = oracle::mc_tpre(p, td, te, a, 21, 400'000);
        CHECK(oracle::z_score(leg, mc) < 4.0);
      }
  }

  TEST_CASE("joint density") {
    const double s = std::sqrt(1e-11), a = 1e-6, x = 1e-11;
    CHECK(joint_pdf_xy(s, a, x, 2 * x + 3 * a * std::sqrt(x)) == 0.0);
    CHECK(joint_pdf_xy(s, a, -x, 0.0) == 0.0);
    const double centre = std::exp(-x / (2 * s * s)) / (4 * std::numbers::pi * s * s * a * std::sqrt(x));
    CHECK(joint_pdf_xy(s, a, x, 2 * x) == doctest::Approx(centre).epsilon(1e-14));
  }

  TEST_CASE("method names") {
    CHECK(to_string(Method::GHQ) == "ghq");
    CHECK(to_string(Method::LegendreQuadrature) == "legendre");
  }
}
