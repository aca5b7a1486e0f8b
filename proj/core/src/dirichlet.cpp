#include "ambiq/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ambiq/error.hpp"
#include "parallel.hpp"

namespace ambiq {

namespace {

double rising(double x, unsigned n) {
  double v = 1.0;
  for (unsigned i = 0; i < n; ++i) v *= x + static_cast<double>(i);
  return v;
}

}  // namespace

double dirichlet_mixed_moment(std::span<const double> alpha, std::size_t k, std::size_t l,
                              unsigned s, unsigned t) {
  if (k >= alpha.size() || l >= alpha.size())
    fail(ErrorCode::IndexError, "moment index out of range for " +
                                    std::to_string(alpha.size()) + " categories");
  double total = 0.0;
  for (double a : alpha) total += a;
  const double denominator = rising(total, s + t);
  if (k == l) return rising(alpha[k], s + t) / denominator;
  return rising(alpha[k], s) * rising(alpha[l], t) / denominator;
}

double dirichlet_mixed_moment(const DirichletParams& params, std::size_t k, std::size_t l,
                              unsigned s, unsigned t) {
  return dirichlet_mixed_moment(params.proper(), k, l, s, t);
}

DirichletSampler::DirichletSampler(std::span<const double> alpha)
    : alpha_(alpha.begin(), alpha.end()),
      log_space_(std::any_of(alpha.begin(), alpha.end(), [](double a) { return a < 1.0; })) {
  if (alpha_.size() < 2) fail(ErrorCode::InvalidArgument, "Dirichlet needs at least 2 entries");
  for (double a : alpha_) {
    if (!(a > 0.0) || !std::isfinite(a))
      fail(ErrorCode::InvalidArgument, "Dirichlet concentration must be positive");
  }
}

void DirichletSampler::draw(Rng& rng, std::span<double> out) const {
  const std::size_t n = alpha_.size();
  if (!log_space_) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = sample_gamma(rng, alpha_[i]);
      sum += out[i];
    }
    for (std::size_t i = 0; i < n; ++i) out[i] /= sum;
    return;
  }
  // Small shapes can underflow every Gamma draw to 0; normalize in log space.
  double max_log = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = sample_log_gamma(rng, alpha_[i]);
    max_log = std::max(max_log, out[i]);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(out[i] - max_log);
    sum += out[i];
  }
  for (std::size_t i = 0; i < n; ++i) out[i] /= sum;
}

std::vector<double> dirichlet_sample_flat(std::span<const double> alpha, std::size_t count,
                                          std::uint64_t seed) {
  if (count == 0) fail(ErrorCode::InvalidArgument, "sample count must be >= 1");
  const DirichletSampler sampler(alpha);
  const std::size_t dim = sampler.dimension();
  std::vector<double> out(count * dim);
  detail::run_chunked(count, seed, [&](Rng& rng, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      sampler.draw(rng, std::span<double>(out.data() + i * dim, dim));
  });
  return out;
}

std::vector<ProbabilityVector> dirichlet_sample(const DirichletParams& params, std::size_t count,
                                                std::uint64_t seed) {
  const auto alpha = params.flattened();
  const auto flat = dirichlet_sample_flat(alpha, count, seed);
  const std::size_t dim = alpha.size();
  std::vector<ProbabilityVector> draws;
  draws.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double* row = flat.data() + i * dim;
    draws.emplace_back(std::vector<double>(row, row + dim - 1), row[dim - 1]);
  }
  return draws;
}

}  // namespace ambiq
