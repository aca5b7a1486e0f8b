#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ambiq/types.hpp"

namespace ambiq {

/// Proper-category probabilities renormalized after removing the cs mass.
class ConditionalVector {
 public:
  explicit ConditionalVector(std::vector<double> p);

  std::span<const double> values() const noexcept { return p_; }
  std::size_t categories() const noexcept { return p_.size(); }

 private:
  std::vector<double> p_;
};

/// p_k = q_k / (1 - q_cs). Throws DegenerateCsMass when q_cs >= 1 - 1e-12.
ConditionalVector conditional_vector(const ProbabilityVector& q);

/// Probability that an annotator abstains, or that two annotators who both
/// consider the task solvable disagree. Equals 1 when all mass is on cs.
double ambiguity_new(const ProbabilityVector& q);

/// Ambiguity with the label-flip term normalized by its maximum (C-1)/C,
/// so uniform proper distributions reach 1. Requires C >= 2.
double ambiguity_modified(const ProbabilityVector& q);

/// (C·amb - q_cs) / (C - 1)
double modified_from_new(double amb, double q_cs, std::size_t categories);

/// Total-variation based measure from earlier literature. Requires C >= 2.
double ambiguity_old(const ProbabilityVector& q);

double ambiguity(const ProbabilityVector& q, MeasureKind kind);

/// Shannon entropy divided by ln M, with 0·ln(1/0) = 0. Requires M >= 2.
double normalized_entropy(std::span<const double> p);
double normalized_entropy(const ConditionalVector& p);

/// Unchecked kernels over (proper, cs) spans for hot sampling loops. Callers
/// guarantee a valid simplex and, for modified/old, C >= 2.
namespace kernel {

double ambiguity_new(std::span<const double> proper, double cs);
double ambiguity_modified(std::span<const double> proper, double cs);
double ambiguity_old(std::span<const double> proper, double cs);
double ambiguity(std::span<const double> proper, double cs, MeasureKind kind);

/// Clamp rounding noise below 1e-12 into [0,1]; larger excursions throw
/// InternalConsistency.
double clamp_unit(double value);

}  // namespace kernel

/// Throws SingleCategoryUnsupported unless the measure is defined for C.
void require_supported(MeasureKind kind, std::size_t categories);

}  // namespace ambiq
