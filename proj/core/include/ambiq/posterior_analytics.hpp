#pragma once

#include <span>

#include "ambiq/types.hpp"

namespace ambiq {

/// Closed-form first two moments of an ambiguity measure under q ~ Dir(α).
struct PosteriorMoments {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
  MeasureKind measure = MeasureKind::New;
};

/// Conjugate update α + n. Throws ShapeMismatch when C differs.
DirichletParams posterior_update(const DirichletParams& prior, const CountVector& counts);

/// E of Shannon entropy / ln M for p ~ Dir(alpha) over M = alpha.size() >= 2 categories:
/// (ψ(α₀+1) - Σ(α_k/α₀)ψ(α_k+1)) / ln M.
double expected_normalized_entropy(std::span<const double> alpha);

/// Same, treating all C+1 entries (cs included) as categories.
double expected_normalized_entropy(const DirichletParams& params);

/// E(amb) = 1 - Σα_k(α_k+1) / (α₀(α₀ - α_cs + 1))
double expected_amb(const DirichletParams& params);

/// E(amb~) = (C·E(amb) - α_cs/α₀) / (C - 1). Requires C >= 2.
double expected_amb_modified(const DirichletParams& params);

/// E(amb²) = R + S·(1 - E(amb))² + 2E(amb) - 1
double second_moment_amb(const DirichletParams& params);

/// Var(amb) = R + (S - 1)(1 - E(amb))²
double var_amb(const DirichletParams& params);

/// Cov(amb, q_cs) = α_cs / (α₀(α₀+1)) · (1 - E(amb))
double cov_amb_qcs(const DirichletParams& params);

/// Var(q_cs) for the Beta(α_cs, α₀ - α_cs) marginal.
double var_qcs(const DirichletParams& params);

/// (C² Var(amb) + Var(q_cs) - 2C Cov(amb, q_cs)) / (C-1)². Requires C >= 2.
double var_amb_modified(const DirichletParams& params);

/// Moments for New or Modified. Old has no closed form and throws InvalidArgument.
PosteriorMoments posterior_moments(const DirichletParams& params, MeasureKind measure);

}  // namespace ambiq
