#pragma once

#include "ambiq/types.hpp"

namespace ambiq {

/// Beta density with the normalizer precomputed, for repeated evaluation.
///
/// At an endpoint the finite limit is returned when the exponent is zero
/// (e.g. Beta(1, b) at 0 gives b), zero when it is positive, and +infinity
/// when it is negative.
class BetaDensity {
 public:
  explicit BetaDensity(const BetaParams& params);

  double operator()(double x) const;
  /// Same density with 1 - x supplied by the caller, for x close to 1.
  double at(double x, double one_minus_x) const;

  const BetaParams& params() const noexcept { return params_; }

 private:
  BetaParams params_;
  double log_norm_;
};

/// x^{α-1}(1-x)^{β-1} / B(α, β). Throws DomainError for x outside [0,1].
double beta_pdf(const BetaParams& params, double x);

/// I_x(α, β) by continued fraction, using I_x(α,β) = 1 - I_{1-x}(β,α) on
/// the slowly converging side.
double regularized_incomplete_beta(const BetaParams& params, double x);

/// E(π^n) = Π_{i<n}(α+i) / Π_{i<n}(α+β+i)
double beta_moment(const BetaParams& params, unsigned n);

/// αβ / ((α+β)²(α+β+1))
double beta_variance(const BetaParams& params);

/// E(π(1-π)) = αβ / ((α+β)(α+β+1))
double beta_mixed_expectation(const BetaParams& params);

}  // namespace ambiq
