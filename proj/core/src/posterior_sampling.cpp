#include "ambiq/posterior_sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ambiq/dirichlet.hpp"
#include "ambiq/error.hpp"
#include "ambiq/measures.hpp"
#include "parallel.hpp"

namespace ambiq {

std::vector<double> sample_transformed(const DirichletParams& params, MeasureKind measure,
                                       std::size_t count, std::uint64_t seed) {
  require_supported(measure, params.categories());
  if (count == 0) fail(ErrorCode::InvalidArgument, "sample count must be >= 1");
  const auto alpha = params.flattened();
  const DirichletSampler sampler(alpha);
  const std::size_t dim = alpha.size();
  std::vector<double> out(count);
  detail::run_chunked(count, seed, [&](Rng& rng, std::size_t begin, std::size_t end) {
    std::vector<double> q(dim);
    const std::span<const double> proper(q.data(), dim - 1);
    for (std::size_t i = begin; i < end; ++i) {
      sampler.draw(rng, q);
      out[i] = kernel::ambiguity(proper, q[dim - 1], measure);
    }
  });
  return out;
}

double sorted_quantile(std::span<const double> sorted, double level) {
  if (sorted.empty()) fail(ErrorCode::TooFewSamples, "quantile of an empty sample");
  if (!(level >= 0.0 && level <= 1.0))
    fail(ErrorCode::InvalidArgument, "quantile level outside [0,1]");
  const double pos = level * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<double> histogram_density(std::span<const double> samples, std::size_t bins) {
  if (bins == 0) fail(ErrorCode::InvalidArgument, "histogram needs at least one bin");
  if (samples.empty()) fail(ErrorCode::TooFewSamples, "histogram of an empty sample");
  std::vector<double> counts(bins, 0.0);
  const double nb = static_cast<double>(bins);
  for (double x : samples) {
    if (!(x >= 0.0 && x <= 1.0))
      fail(ErrorCode::InvalidArgument, "histogram sample " + std::to_string(x) + " outside [0,1]");
    const auto idx = std::min(bins - 1, static_cast<std::size_t>(x * nb));
    counts[idx] += 1.0;
  }
  const double scale = nb / static_cast<double>(samples.size());
  for (double& c : counts) c *= scale;
  return counts;
}

PosteriorSummary summarize(std::span<const double> samples, double credible_mass,
                           std::span<const double> levels) {
  if (samples.size() < kMinSummarySamples)
    fail(ErrorCode::TooFewSamples, "summary needs at least " + std::to_string(kMinSummarySamples) +
                                       " samples, got " + std::to_string(samples.size()));
  if (!(credible_mass > 0.0 && credible_mass < 1.0))
    fail(ErrorCode::InvalidArgument, "credible mass must lie in (0,1)");

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  if (!(sorted.front() >= 0.0 && sorted.back() <= 1.0))
    fail(ErrorCode::InvalidArgument, "summary samples must lie in [0,1]");

  PosteriorSummary summary;
  summary.sample_count = sorted.size();
  const double n = static_cast<double>(sorted.size());
  double sum = 0.0;
  for (double x : sorted) sum += x;
  const double mean = std::clamp(sum / n, sorted.front(), sorted.back());
  double ss = 0.0;
  for (double x : sorted) ss += (x - mean) * (x - mean);
  summary.mean = mean;
  summary.sd = std::sqrt(ss / (n - 1.0));

  std::vector<double> sorted_levels(levels.begin(), levels.end());
  std::sort(sorted_levels.begin(), sorted_levels.end());
  for (double level : sorted_levels)
    summary.quantiles.emplace_back(level, sorted_quantile(sorted, level));

  const double tail = 0.5 * (1.0 - credible_mass);
  summary.credible_interval = {sorted_quantile(sorted, tail), sorted_quantile(sorted, 1.0 - tail),
                               credible_mass};

  const auto hist = histogram_density(sorted, kModeBins);
  const auto peak = static_cast<std::size_t>(
      std::distance(hist.begin(), std::max_element(hist.begin(), hist.end())));
  const double midpoint = (static_cast<double>(peak) + 0.5) / static_cast<double>(kModeBins);
  summary.mode = std::clamp(midpoint, sorted.front(), sorted.back());
  return summary;
}

DensityEstimate density_with_uncertainty(const DirichletParams& params, MeasureKind measure,
                                         std::uint64_t seed, const DensityOptions& options) {
  if (options.samples_per_repeat == 0 || options.bins == 0 || options.repeats == 0)
    fail(ErrorCode::InvalidArgument, "density options must be positive");
  const std::size_t bins = options.bins;
  std::vector<std::vector<double>> per_bin(bins, std::vector<double>(options.repeats));
  std::vector<double> repeat_mass(options.repeats, 0.0);
  const double width = 1.0 / static_cast<double>(bins);
  for (std::size_t r = 0; r < options.repeats; ++r) {
    const auto draws =
        sample_transformed(params, measure, options.samples_per_repeat, derive_stream_seed(seed, r));
    const auto hist = histogram_density(draws, bins);
    for (std::size_t b = 0; b < bins; ++b) {
      per_bin[b][r] = hist[b];
      repeat_mass[r] += hist[b] * width;
    }
  }

  DensityEstimate est;
  est.samples_per_repeat = options.samples_per_repeat;
  est.repeats = options.repeats;
  est.repeat_mass = std::move(repeat_mass);
  est.bin_edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b)
    est.bin_edges[b] = static_cast<double>(b) / static_cast<double>(bins);
  est.median_density.resize(bins);
  est.iqr_lo.resize(bins);
  est.iqr_hi.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    auto& values = per_bin[b];
    std::sort(values.begin(), values.end());
    est.iqr_lo[b] = sorted_quantile(values, 0.25);
    est.median_density[b] = sorted_quantile(values, 0.5);
    est.iqr_hi[b] = sorted_quantile(values, 0.75);
  }
  return est;
}

}  // namespace ambiq
