#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ambiq/rng.hpp"
#include "ambiq/types.hpp"

namespace ambiq {

/// E(p_k^s p_l^t) under Dir(alpha) by rising factorials; k and l are
/// zero-based. When k == l the powers merge into p_k^{s+t}.
double dirichlet_mixed_moment(std::span<const double> alpha, std::size_t k, std::size_t l,
                              unsigned s, unsigned t);

/// Same, over the proper entries of `params` only (the conditional vector p).
double dirichlet_mixed_moment(const DirichletParams& params, std::size_t k, std::size_t l,
                              unsigned s, unsigned t);

/// Gamma-method sampler: independent Gamma(α_i, 1) draws, normalized.
class DirichletSampler {
 public:
  explicit DirichletSampler(std::span<const double> alpha);

  std::size_t dimension() const noexcept { return alpha_.size(); }

  /// Writes one draw into `out` (size dimension()).
  void draw(Rng& rng, std::span<double> out) const;

 private:
  std::vector<double> alpha_;
  bool log_space_;
};

/// `count` draws from Dir(alpha), row-major (count x alpha.size()).
/// Deterministic in `seed`, independent of thread count.
std::vector<double> dirichlet_sample_flat(std::span<const double> alpha, std::size_t count,
                                          std::uint64_t seed);

/// `count` draws laid out as (proper | cs).
std::vector<ProbabilityVector> dirichlet_sample(const DirichletParams& params, std::size_t count,
                                                std::uint64_t seed);

}  // namespace ambiq
