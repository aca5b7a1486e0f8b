#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ambiq/rng.hpp"
#include "ambiq/types.hpp"

namespace ambiq {

/// Measure applied to the empirical frequencies n / n_total. Throws
/// EmptySample for n_total = 0.
double plugin_estimate(const CountVector& counts, MeasureKind measure);

/// Exact E(amb(q̂_n)) for n ~ Multinomial(n, q), New measure.
double expected_plugin(const ProbabilityVector& q, std::uint64_t n);

/// expected_plugin(q, n) - amb(q); never positive.
double bias_plugin(const ProbabilityVector& q, std::uint64_t n);

using CountEstimator = std::function<double(const CountVector&)>;

inline constexpr unsigned kMaxEnumerationDraws = 12;
inline constexpr std::size_t kMaxEnumerationCategories = 4;  // C + 1

/// Σ over all count vectors with total n of Multinomial pmf × estimator.
/// Refuses (TooLarge) beyond n = 12 or C + 1 = 4.
double exhaustive_expected_estimator(const ProbabilityVector& q, unsigned n,
                                     const CountEstimator& estimator);

/// One multinomial draw by n categorical draws.
CountVector sample_multinomial(Rng& rng, const ProbabilityVector& q, std::uint64_t n);

struct BayesPointEstimates {
  double posterior_mean = 0.0;
  double posterior_mode = 0.0;
};

inline constexpr std::size_t kDefaultModeSamples = 4000;

/// Posterior mean (closed form for New/Modified, MC for Old) and histogram
/// mode of the posterior under the symmetric prior Dir(β·1).
BayesPointEstimates bayes_point_estimates(const CountVector& counts, double prior_beta,
                                          MeasureKind measure, std::uint64_t seed,
                                          std::size_t mode_samples = kDefaultModeSamples);

struct EstimatorSpec {
  enum class Kind { Plugin, BayesMean, BayesMode };
  Kind kind = Kind::Plugin;
  double beta = 1.0;  ///< prior hyperparameter; unused for Plugin

  /// "plugin", "bayes_mean(0.5)", "bayes_mode(1)"
  std::string label() const;
  /// Inverse of label(); also accepts "mean:0.5" / "mode:1" shorthands.
  static EstimatorSpec parse(std::string_view text);
};

struct BiasPoint {
  std::uint64_t n = 0;
  std::string estimator;
  double bias = 0.0;
  double std_error = 0.0;  ///< 0 for exact (closed form or enumeration)
  bool exact = false;
};

struct BiasSeries {
  MeasureKind measure = MeasureKind::New;
  double true_value = 0.0;
  std::vector<std::uint64_t> n_values;
  std::vector<std::string> estimators;
  std::vector<BiasPoint> points;  ///< n-major, estimator-minor

  const BiasPoint& at(std::string_view estimator, std::uint64_t n) const;
};

struct BiasCurveConfig {
  MeasureKind measure = MeasureKind::New;
  std::vector<EstimatorSpec> estimators;
  std::size_t mc_repeats = 200;
  std::size_t mode_samples = kDefaultModeSamples;
};

/// Bias of each estimator as a function of n. The plug-in bias is exact
/// (closed form for New, enumeration for small problems); Bayesian
/// estimators average over `mc_repeats` simulated count vectors and report
/// a standard error.
BiasSeries bias_curve(const ProbabilityVector& q, std::span<const std::uint64_t> n_values,
                      const BiasCurveConfig& config, std::uint64_t seed);

}  // namespace ambiq
