#pragma once

#include <cstddef>
#include <functional>

namespace ambiq {

/// Settings for adaptive Simpson integration.
struct Quadrature {
  double tol = 1e-8;  ///< absolute tolerance on the whole interval
  int max_depth = 50;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  /// Set when some panel hit max_depth; `value` is still the best estimate.
  bool depth_exceeded = false;
  std::size_t evaluations = 0;
};

/// Adaptive Simpson with the Lyness acceptance test |S₂ - S₁| <= 15·tol and
/// Richardson correction. Throws NonFiniteIntegrand if f returns NaN/inf.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  const Quadrature& q = {});

/// Integrates over `panels` equal sub-intervals, splitting tol evenly.
QuadratureResult adaptive_simpson_panels(const std::function<double(double)>& f, double a,
                                         double b, int panels, const Quadrature& q = {});

}  // namespace ambiq
