#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ambiq/types.hpp"

namespace ambiq {

struct CredibleInterval {
  double lo = 0.0;
  double hi = 0.0;
  double mass = 0.0;
};

/// Monte-Carlo summary of a transformed posterior.
///
/// The mode is the midpoint of the fullest bin of a 256-bin histogram over
/// [0,1], clamped to the sample range, and may fall outside the credible
/// interval for skewed posteriors.
struct PosteriorSummary {
  double mean = 0.0;
  double mode = 0.0;
  double sd = 0.0;
  /// (level, value) pairs, ascending in level.
  std::vector<std::pair<double, double>> quantiles;
  CredibleInterval credible_interval;
  std::size_t sample_count = 0;
};

/// Per-bin median and interquartile band of normalized histograms over
/// independent repeats.
struct DensityEstimate {
  std::vector<double> bin_edges;  ///< bins + 1 edges over [0,1]
  std::vector<double> median_density;
  std::vector<double> iqr_lo;
  std::vector<double> iqr_hi;
  /// ∫ of each repeat's histogram, kept for normalization checks.
  std::vector<double> repeat_mass;
  std::size_t samples_per_repeat = 0;
  std::size_t repeats = 0;
};

struct DensityOptions {
  std::size_t samples_per_repeat = 100000;
  std::size_t bins = 256;
  std::size_t repeats = 100;
};

inline constexpr std::size_t kModeBins = 256;
inline constexpr std::size_t kMinSummarySamples = 1000;
inline constexpr double kDefaultQuantileLevels[] = {0.025, 0.05, 0.25, 0.5, 0.75, 0.95, 0.975};

/// i.i.d. draws of measure(q), q ~ Dir(params). Deterministic in seed.
std::vector<double> sample_transformed(const DirichletParams& params, MeasureKind measure,
                                       std::size_t count, std::uint64_t seed);

/// Quantile by linear interpolation of order statistics (sorted input).
double sorted_quantile(std::span<const double> sorted, double level);

/// Normalized histogram density on `bins` equal bins over [0,1]; 1.0 lands
/// in the last bin.
std::vector<double> histogram_density(std::span<const double> samples, std::size_t bins);

/// Throws TooFewSamples below 1000 samples.
PosteriorSummary summarize(std::span<const double> samples, double credible_mass,
                           std::span<const double> levels = kDefaultQuantileLevels);

/// Repeat r draws from stream r of `seed`.
DensityEstimate density_with_uncertainty(const DirichletParams& params, MeasureKind measure,
                                         std::uint64_t seed, const DensityOptions& options = {});

}  // namespace ambiq
