#pragma once

// Seeded Monte-Carlo estimators for the three transmission events.
//
// Samples are produced in fixed-size chunks. Chunk k draws from an
// std::mt19937_64 seeded with splitmix64(seed, k), and Gaussian pairs come
// from the Box-Muller transform (cos branch -> theta_V, sin branch -> theta_H).
// Chunks may run on any number of threads; the event counts are summed, so the
// estimate depends only on (parameters, seed, n).

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "fsoqkd/linkmodel.hpp"

namespace fsoqkd::oracle {

using linkmodel::PointingParams;
using linkmodel::TurbulenceParams;

inline constexpr std::uint64_t kDefaultSamples = 10'000'000;
inline constexpr std::uint64_t kChunkSize = 65'536;

/// Binomial estimate: std_error = sqrt(p (1 - p) / n).
struct EstimateWithError {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Sample mean with its standard error (sample standard deviation / sqrt(n)).
struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

struct Angles {
  double v;
  double h;
};

/// Deterministic 64-bit seed for chunk `chunk` of the stream `seed`.
std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) noexcept;

/// Fills `out` with the pointing samples of chunk `chunk`; out.size() samples
/// are drawn (at most kChunkSize).
void sample_chunk(const PointingParams& p, std::uint64_t seed, std::uint64_t chunk,
                  std::vector<Angles>& out);

/// The first n samples of the stream. Meant for tests and small n.
std::vector<Angles> sample_pointing(const PointingParams& p, std::uint64_t seed, std::uint64_t n);

/// Counts samples for which `event(theta_v, theta_h)` holds, over the first n
/// samples of the stream. `threads` = 0 picks the hardware concurrency.
template <class Event>
std::uint64_t count_events(const PointingParams& p, std::uint64_t seed, std::uint64_t n,
                           Event event, unsigned threads = 0);

EstimateWithError mc_tplr(const PointingParams& p, double theta_d, std::uint64_t seed,
                          std::uint64_t n = kDefaultSamples, unsigned threads = 0);

/// theta_e uses the linkmodel::theta_e convention.
EstimateWithError mc_tpe(const PointingParams& p, double theta_e, double alpha,
                         std::uint64_t seed, std::uint64_t n = kDefaultSamples,
                         unsigned threads = 0);

EstimateWithError mc_tpre(const PointingParams& p, double theta_d, double theta_e, double alpha,
                          std::uint64_t seed, std::uint64_t n = kDefaultSamples,
                          unsigned threads = 0);

/// Probability that (X, Y) = (theta^2, 2 theta^2 + 2 alpha theta_V) falls in
/// [x_lo, x_hi] x [y_lo, y_hi] for zero-mean, common-sigma pointing errors.
EstimateWithError mc_xy_box(double sigma, double alpha, std::pair<double, double> x_range,
                            std::pair<double, double> y_range, std::uint64_t seed,
                            std::uint64_t n, unsigned threads = 0);

/// E{ln I_D} for I_D = G1 G2, G1 ~ Gamma(alpha_D, 1/alpha_D), G2 ~ Gamma(beta_D, 1/beta_D).
MeanEstimate mc_gamma_gamma_log_mean(const TurbulenceParams& turb, std::uint64_t seed,
                                     std::uint64_t n);

/// |analytic - estimate| / SE. When the estimate is 0 or 1 the binomial SE
/// vanishes; it is then floored at 1/n.
double z_score(double analytic, const EstimateWithError& est);

namespace detail {
unsigned resolve_threads(unsigned threads, std::uint64_t chunks);
EstimateWithError binomial(std::uint64_t hits, std::uint64_t n, std::uint64_t seed);
}  // namespace detail

}  // namespace fsoqkd::oracle

#include "fsoqkd/oracle_impl.hpp"
