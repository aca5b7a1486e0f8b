#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace ambiq {

/// Name recorded in output metadata; bump the suffix if the stream layout changes.
inline constexpr std::string_view kRngName = "xoshiro256++/splitmix64-v1";

/// SplitMix64 finalizer; a bijective 64-bit mix.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of sub-stream `stream` under `seed`:
///   splitmix64_mix(seed ^ splitmix64_mix(stream + 0x9e3779b97f4a7c15)).
/// Chunked and per-repeat sampling draws chunk/repeat i from stream i, so
/// results never depend on the thread schedule.
constexpr std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64_mix(seed ^ splitmix64_mix(stream + 0x9e3779b97f4a7c15ULL));
}

/// xoshiro256++ (Blackman & Vigna). State filled from a SplitMix64 sequence.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1], safe for log().
  double uniform_open_low() noexcept {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  std::array<std::uint64_t, 4> s_{};
};

double sample_standard_normal(Rng& rng) noexcept;

/// Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 uses G(shape+1)·U^{1/shape}.
double sample_gamma(Rng& rng, double shape) noexcept;

/// log of a Gamma(shape, 1) draw, stable for tiny shapes.
double sample_log_gamma(Rng& rng, double shape) noexcept;

}  // namespace ambiq
