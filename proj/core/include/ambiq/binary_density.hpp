#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ambiq/beta.hpp"
#include "ambiq/quadrature.hpp"
#include "ambiq/types.hpp"

namespace ambiq {

/// Observed counts of a binary task: two proper categories plus cs.
struct BinaryCounts {
  std::uint64_t n_plus = 0;
  std::uint64_t n_minus = 0;
  std::uint64_t n_cs = 0;

  std::uint64_t total() const noexcept { return n_plus + n_minus + n_cs; }
  CountVector to_count_vector() const { return CountVector{{n_plus, n_minus}, n_cs}; }
};

/// Smaller root ξ(a, u) in [0, 1/2] of the level set measure(q) = a at
/// q_cs = u. Radicands down to -1e-12 are clamped to 0.
double xi(double a, double u, MeasureKind measure);

/// ∂ξ/∂a. Throws SingularPoint when the denominator underflows.
double xi_partial_a(double a, double u, MeasureKind measure);

/// g(a): 0 for Modified, max(0, 2a - 1) for New.
double lower_bound(double a, MeasureKind measure);

/// Exact posterior of New or Modified ambiguity for a binary task under the
/// prior Dir(β, β, β), as a one-dimensional integral over u = q_cs.
///
/// The u-integral is split at the midpoint of [g(a), a] and each half is
/// rewritten with u = a - s² (upper) or u = g(a) + s² (lower); ξ and ∂ξ/∂a are
/// evaluated from the distances to each end, which keeps the square-root
/// endpoint behaviour smooth for Simpson's rule. Outer integrals over a use
/// a = s² on [0, 1/2] and a = 1 - s² on [1/2, 1], which also absorbs the
/// (1-a)^{-1/2} growth of the Modified density.
class BinaryPosterior {
 public:
  BinaryPosterior(const BinaryCounts& counts, double prior_beta, MeasureKind measure,
                  const Quadrature& quadrature = {});

  /// Density at a in (0,1); DomainError otherwise.
  double density(double a) const;
  /// P(measure <= a) for a in [0,1].
  double cdf(double a) const;
  /// ∫ density over [0,1]; 1 up to quadrature error.
  double normalization() const;
  /// ∫ a·density over [0,1].
  double mean() const;
  /// CDF at each point of an ascending grid in [0,1], accumulated cell by
  /// cell, so the result is nondecreasing.
  std::vector<double> cdf_on_grid(std::span<const double> grid) const;

  MeasureKind measure() const noexcept { return measure_; }
  /// True once any quadrature hit max_depth.
  bool depth_exceeded() const noexcept { return depth_exceeded_; }

 private:
  // one_minus_a is passed separately so that a = 1 - s² keeps full precision
  double density_unchecked(double a, double one_minus_a) const;
  double integrate(double lo, double hi, bool weight_by_a) const;

  MeasureKind measure_;
  Quadrature outer_;
  Quadrature inner_;
  BetaDensity cs_density_;
  BetaDensity proper_density_;
  double inset_;
  mutable bool depth_exceeded_ = false;
};

double posterior_density_binary(double a, const BinaryCounts& counts, double prior_beta,
                                MeasureKind measure, const Quadrature& q = {});

double posterior_cdf_binary(double a, const BinaryCounts& counts, double prior_beta,
                            MeasureKind measure, const Quadrature& q = {});

/// Tabulation grid: `points` values on [inset, 1 - inset]; for New the kink
/// at 0.5 is always a grid point.
std::vector<double> binary_density_grid(MeasureKind measure, std::size_t points = 512,
                                        double inset = 1e-6);

}  // namespace ambiq
