#include "ambiq/rng.hpp"

#include <cmath>

namespace ambiq {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

// Marsaglia-Tsang for shape >= 1.
double gamma_at_least_one(Rng& rng, double shape) noexcept {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = sample_standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open_low();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

Rng::Rng(std::uint64_t seed) noexcept {
  std::uint64_t z = seed;
  for (auto& word : s_) {
    z += 0x9e3779b97f4a7c15ULL;
    word = splitmix64_mix(z);
  }
}

Rng::result_type Rng::operator()() noexcept {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

// Marsaglia polar method; the spare deviate is discarded so the stream
// position depends only on the number of calls.
double sample_standard_normal(Rng& rng) noexcept {
  for (;;) {
    const double x = 2.0 * rng.uniform() - 1.0;
    const double y = 2.0 * rng.uniform() - 1.0;
    const double r2 = x * x + y * y;
    if (r2 > 0.0 && r2 < 1.0) return x * std::sqrt(-2.0 * std::log(r2) / r2);
  }
}

double sample_gamma(Rng& rng, double shape) noexcept {
  if (shape >= 1.0) return gamma_at_least_one(rng, shape);
  const double g = gamma_at_least_one(rng, shape + 1.0);
  return g * std::pow(rng.uniform_open_low(), 1.0 / shape);
}

double sample_log_gamma(Rng& rng, double shape) noexcept {
  if (shape >= 1.0) return std::log(gamma_at_least_one(rng, shape));
  const double g = gamma_at_least_one(rng, shape + 1.0);
  return std::log(g) + std::log(rng.uniform_open_low()) / shape;
}

}  // namespace ambiq
