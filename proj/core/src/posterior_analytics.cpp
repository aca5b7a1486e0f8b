#include "ambiq/posterior_analytics.hpp"

#include <cmath>
#include <string>

#include "ambiq/error.hpp"
#include "ambiq/measures.hpp"
#include "ambiq/special_functions.hpp"

namespace ambiq {

namespace {

// Kahan-Neumaier accumulator; Σ over C terms with mixed magnitudes.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// Σ α_k(α_k+1)
double sum_rising2(const DirichletParams& params) {
  CompensatedSum s;
  for (double a : params.proper()) s.add(a * (a + 1.0));
  return s.value();
}

struct RS {
  double r;
  double s;
};

RS r_and_s(const DirichletParams& params) {
  const double a0 = params.total();
  const double ap = params.proper_total();
  CompensatedSum numerator;
  for (double a : params.proper()) {
    const double r2 = a * (a + 1.0);
    numerator.add(r2 * ((a + 2.0) * (a + 3.0) - r2));
  }
  const double r = numerator.value() / (a0 * (a0 + 1.0) * (ap + 2.0) * (ap + 3.0));
  const double s = a0 * (ap + 1.0) * (ap + 1.0) / ((a0 + 1.0) * (ap + 2.0) * (ap + 3.0));
  return {r, s};
}

double clamp_variance(double v, const char* what) {
  constexpr double kNoise = 1e-12;
  if (v < 0.0) {
    if (v < -kNoise)
      fail(ErrorCode::InternalConsistency,
           std::string(what) + " evaluated to negative " + std::to_string(v));
    return 0.0;
  }
  return v;
}

}  // namespace

DirichletParams posterior_update(const DirichletParams& prior, const CountVector& counts) {
  if (prior.categories() != counts.categories())
    fail(ErrorCode::ShapeMismatch, "prior has " + std::to_string(prior.categories()) +
                                       " proper categories, counts have " +
                                       std::to_string(counts.categories()));
  std::vector<double> proper(prior.proper().begin(), prior.proper().end());
  for (std::size_t k = 0; k < proper.size(); ++k)
    proper[k] += static_cast<double>(counts.proper[k]);
  return DirichletParams(std::move(proper), prior.cs() + static_cast<double>(counts.cs));
}

double expected_normalized_entropy(std::span<const double> alpha) {
  if (alpha.size() < 2)
    fail(ErrorCode::SingleCategoryUnsupported, "normalized entropy needs M >= 2");
  double a0 = 0.0;
  for (double a : alpha) {
    if (!(a > 0.0)) fail(ErrorCode::InvalidArgument, "Dirichlet concentration must be positive");
    a0 += a;
  }
  CompensatedSum weighted;
  for (double a : alpha) weighted.add(a / a0 * digamma(a + 1.0));
  return (digamma(a0 + 1.0) - weighted.value()) / std::log(static_cast<double>(alpha.size()));
}

double expected_normalized_entropy(const DirichletParams& params) {
  return expected_normalized_entropy(params.flattened());
}

double expected_amb(const DirichletParams& params) {
  const double a0 = params.total();
  const double ap = params.proper_total();
  return kernel::clamp_unit(1.0 - sum_rising2(params) / (a0 * (ap + 1.0)));
}

double expected_amb_modified(const DirichletParams& params) {
  require_supported(MeasureKind::Modified, params.categories());
  const double c = static_cast<double>(params.categories());
  return kernel::clamp_unit((c * expected_amb(params) - params.cs() / params.total()) / (c - 1.0));
}

double second_moment_amb(const DirichletParams& params) {
  const double mean = expected_amb(params);
  const auto [r, s] = r_and_s(params);
  const double gap = 1.0 - mean;
  return r + s * gap * gap + 2.0 * mean - 1.0;
}

double var_amb(const DirichletParams& params) {
  const double mean = expected_amb(params);
  const auto [r, s] = r_and_s(params);
  const double gap = 1.0 - mean;
  return clamp_variance(r + (s - 1.0) * gap * gap, "Var(amb)");
}

double cov_amb_qcs(const DirichletParams& params) {
  const double a0 = params.total();
  return params.cs() / (a0 * (a0 + 1.0)) * (1.0 - expected_amb(params));
}

double var_qcs(const DirichletParams& params) {
  const double a0 = params.total();
  return params.cs() * params.proper_total() / (a0 * a0 * (a0 + 1.0));
}

double var_amb_modified(const DirichletParams& params) {
  require_supported(MeasureKind::Modified, params.categories());
  const double c = static_cast<double>(params.categories());
  const double combined =
      c * c * var_amb(params) + var_qcs(params) - 2.0 * c * cov_amb_qcs(params);
  return clamp_variance(combined / ((c - 1.0) * (c - 1.0)), "Var(amb~)");
}

PosteriorMoments posterior_moments(const DirichletParams& params, MeasureKind measure) {
  PosteriorMoments m;
  m.measure = measure;
  switch (measure) {
    case MeasureKind::New:
      m.mean = expected_amb(params);
      m.variance = var_amb(params);
      m.second_moment = second_moment_amb(params);
      return m;
    case MeasureKind::Modified:
      m.mean = expected_amb_modified(params);
      m.variance = var_amb_modified(params);
      break;
    case MeasureKind::Old:
      fail(ErrorCode::InvalidArgument,
           "old ambiguity has no closed-form moments; use posterior sampling");
  }
  m.second_moment = m.variance + m.mean * m.mean;
  return m;
}

}  // namespace ambiq
