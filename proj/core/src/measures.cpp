#include "ambiq/measures.hpp"

#include <cmath>
#include <string>

#include "ambiq/error.hpp"

namespace ambiq {

namespace {

bool degenerate_cs(double cs) { return cs >= 1.0 - kDegenerateCsMargin; }

double sum_of_squares(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s;
}

}  // namespace

namespace kernel {

double clamp_unit(double value) {
  constexpr double kNoise = 1e-12;
  if (value < 0.0) {
    if (value < -kNoise)
      fail(ErrorCode::InternalConsistency, "measure evaluated to " + std::to_string(value));
    return 0.0;
  }
  if (value > 1.0) {
    if (value > 1.0 + kNoise)
      fail(ErrorCode::InternalConsistency, "measure evaluated to " + std::to_string(value));
    return 1.0;
  }
  return value;
}

double ambiguity_new(std::span<const double> proper, double cs) {
  if (degenerate_cs(cs)) return 1.0;
  return clamp_unit(1.0 - sum_of_squares(proper) / (1.0 - cs));
}

double ambiguity_modified(std::span<const double> proper, double cs) {
  if (degenerate_cs(cs)) return 1.0;
  const double c = static_cast<double>(proper.size());
  const double solvable = 1.0 - cs;
  const double flip = solvable - sum_of_squares(proper) / solvable;
  return clamp_unit(cs + c / (c - 1.0) * flip);
}

double ambiguity_old(std::span<const double> proper, double cs) {
  if (degenerate_cs(cs)) return 1.0;
  const double c = static_cast<double>(proper.size());
  const double solvable = 1.0 - cs;
  const double uniform = 1.0 / c;
  double distance = 0.0;
  for (double q : proper) distance += std::abs(q / solvable - uniform);
  return clamp_unit(1.0 - 0.5 * solvable * (c / (c - 1.0)) * distance);
}

double ambiguity(std::span<const double> proper, double cs, MeasureKind kind) {
  switch (kind) {
    case MeasureKind::New: return ambiguity_new(proper, cs);
    case MeasureKind::Modified: return ambiguity_modified(proper, cs);
    case MeasureKind::Old: return ambiguity_old(proper, cs);
  }
  return ambiguity_new(proper, cs);
}

}  // namespace kernel

void require_supported(MeasureKind kind, std::size_t categories) {
  if (kind != MeasureKind::New && categories < 2)
    fail(ErrorCode::SingleCategoryUnsupported,
         std::string(to_string(kind)) + " ambiguity needs at least two proper categories");
}

ConditionalVector::ConditionalVector(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) fail(ErrorCode::InvalidArgument, "conditional vector needs C >= 1");
  double sum = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0)) fail(ErrorCode::InvalidArgument, "negative conditional probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance)
    fail(ErrorCode::InvalidArgument, "conditional vector does not sum to 1");
}

ConditionalVector conditional_vector(const ProbabilityVector& q) {
  if (degenerate_cs(q.cs()))
    fail(ErrorCode::DegenerateCsMass, "q_cs = " + std::to_string(q.cs()) + " leaves no proper mass");
  const double solvable = 1.0 - q.cs();
  std::vector<double> p(q.proper().begin(), q.proper().end());
  for (double& v : p) v /= solvable;
  return ConditionalVector(std::move(p));
}

double ambiguity_new(const ProbabilityVector& q) {
  return kernel::ambiguity_new(q.proper(), q.cs());
}

double ambiguity_modified(const ProbabilityVector& q) {
  require_supported(MeasureKind::Modified, q.categories());
  return kernel::ambiguity_modified(q.proper(), q.cs());
}

double modified_from_new(double amb, double q_cs, std::size_t categories) {
  require_supported(MeasureKind::Modified, categories);
  const double c = static_cast<double>(categories);
  return (c * amb - q_cs) / (c - 1.0);
}

double ambiguity_old(const ProbabilityVector& q) {
  require_supported(MeasureKind::Old, q.categories());
  return kernel::ambiguity_old(q.proper(), q.cs());
}

double ambiguity(const ProbabilityVector& q, MeasureKind kind) {
  require_supported(kind, q.categories());
  return kernel::ambiguity(q.proper(), q.cs(), kind);
}

double normalized_entropy(std::span<const double> p) {
  if (p.size() < 2)
    fail(ErrorCode::SingleCategoryUnsupported, "normalized entropy needs M >= 2");
  double sum = 0.0;
  double entropy = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || v > 1.0) fail(ErrorCode::InvalidArgument, "probability outside [0,1]");
    sum += v;
    if (v > 0.0) entropy -= v * std::log(v);
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance)
    fail(ErrorCode::InvalidArgument, "probabilities do not sum to 1");
  return kernel::clamp_unit(entropy / std::log(static_cast<double>(p.size())));
}

double normalized_entropy(const ConditionalVector& p) { return normalized_entropy(p.values()); }

}  // namespace ambiq
