#include "fsoqkd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace fsoqkd::oracle {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr double kTwoPow53 = 9007199254740992.0;

// (0, 1]
double open_zero(std::uint64_t bits) { return (static_cast<double>(bits >> 11) + 1.0) / kTwoPow53; }
// [0, 1)
double closed_zero(std::uint64_t bits) { return static_cast<double>(bits >> 11) / kTwoPow53; }

}  // namespace

std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(chunk + 0x632be59bd9b4e019ULL));
}

void sample_chunk(const PointingParams& p, std::uint64_t seed, std::uint64_t chunk,
                  std::vector<Angles>& out) {
  if (out.size() > kChunkSize) throw std::invalid_argument("sample_chunk: too many samples");
  std::mt19937_64 gen(chunk_seed(seed, chunk));
  for (Angles& a : out) {
    const double r = std::sqrt(-2.0 * std::log(open_zero(gen())));
    const double phase = 2.0 * std::numbers::pi * closed_zero(gen());
    a.v = p.mu_v + p.sigma_v * r * std::cos(phase);
    a.h = p.mu_h + p.sigma_h * r * std::sin(phase);
  }
}

std::vector<Angles> sample_pointing(const PointingParams& p, std::uint64_t seed, std::uint64_t n) {
  p.validate();
  std::vector<Angles> all;
  all.reserve(static_cast<std::size_t>(n));
  std::vector<Angles> buf;
  for (std::uint64_t c = 0; c * kChunkSize < n; ++c) {
    buf.resize(static_cast<std::size_t>(std::min(kChunkSize, n - c * kChunkSize)));
    sample_chunk(p, seed, c, buf);
    all.insert(all.end(), buf.begin(), buf.end());
  }
  return all;
}

namespace detail {

unsigned resolve_threads(unsigned threads, std::uint64_t chunks) {
  unsigned t = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  return static_cast<unsigned>(std::min<std::uint64_t>(t, std::max<std::uint64_t>(chunks, 1)));
}

EstimateWithError binomial(std::uint64_t hits, std::uint64_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("Monte-Carlo sample count must be positive");
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n, seed};
}

}  // namespace detail

EstimateWithError mc_tplr(const PointingParams& p, double theta_d, std::uint64_t seed,
                          std::uint64_t n, unsigned threads) {
  const auto hits = count_events(
      p, seed, n, [theta_d](double v, double h) { return v * v + h * h <= theta_d; }, threads);
  return detail::binomial(hits, n, seed);
}

EstimateWithError mc_tpe(const PointingParams& p, double theta_e, double alpha,
                         std::uint64_t seed, std::uint64_t n, unsigned threads) {
  const auto hits = count_events(
      p, seed, n,
      [=](double v, double h) { return v * v + h * h + alpha * v >= theta_e; }, threads);
  return detail::binomial(hits, n, seed);
}

EstimateWithError mc_tpre(const PointingParams& p, double theta_d, double theta_e, double alpha,
                          std::uint64_t seed, std::uint64_t n, unsigned threads) {
  const auto hits = count_events(
      p, seed, n,
      [=](double v, double h) {
        const double t2 = v * v + h * h;
        return t2 <= theta_d && t2 + alpha * v >= theta_e;
      },
      threads);
  return detail::binomial(hits, n, seed);
}

EstimateWithError mc_xy_box(double sigma, double alpha, std::pair<double, double> x_range,
                            std::pair<double, double> y_range, std::uint64_t seed,
                            std::uint64_t n, unsigned threads) {
  const PointingParams p{0.0, 0.0, sigma, sigma};
  const auto hits = count_events(
      p, seed, n,
      [=](double v, double h) {
        const double x = v * v + h * h;
        const double y = 2.0 * x + 2.0 * alpha * v;
        return x >= x_range.first && x <= x_range.second && y >= y_range.first &&
               y <= y_range.second;
      },
      threads);
  return detail::binomial(hits, n, seed);
}

MeanEstimate mc_gamma_gamma_log_mean(const TurbulenceParams& turb, std::uint64_t seed,
                                     std::uint64_t n) {
  turb.validate();
  if (n < 2) throw std::invalid_argument("mc_gamma_gamma_log_mean: need at least 2 samples");
  std::gamma_distribution<double> large(turb.alpha_d, 1.0 / turb.alpha_d);
  std::gamma_distribution<double> small(turb.beta_d, 1.0 / turb.beta_d);
  // Welford accumulation, chunk-seeded like the pointing streams.
  double mean = 0.0;
  double m2 = 0.0;
  std::uint64_t k = 0;
  for (std::uint64_t c = 0; c * kChunkSize < n; ++c) {
    std::mt19937_64 gen(chunk_seed(seed, c));
    large.reset();
    small.reset();
    const std::uint64_t count = std::min(kChunkSize, n - c * kChunkSize);
    for (std::uint64_t i = 0; i < count; ++i) {
      const double x = std::log(large(gen)) + std::log(small(gen));
      ++k;
      const double d = x - mean;
      mean += d / static_cast<double>(k);
      m2 += d * (x - mean);
    }
  }
  const double var = m2 / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n)), n, seed};
}

double z_score(double analytic, const EstimateWithError& est) {
  const double floor = 1.0 / static_cast<double>(est.n_samples);
  return std::abs(analytic - est.estimate) / std::max(est.std_error, floor);
}

}  // namespace fsoqkd::oracle
