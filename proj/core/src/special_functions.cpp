#include "ambiq/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "ambiq/error.hpp"

namespace ambiq {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || std::isnan(x))
    fail(ErrorCode::DomainError, std::string(what) + " requires x > 0, got " + std::to_string(x));
}

double lanczos_ln_gamma(double x) {
  // Valid for x >= 0.5.
  const double z = x - 1.0;
  double series = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) series += kLanczos[i] / (z + static_cast<double>(i));
  const double t = z + kLanczosG + 0.5;
  return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(series);
}

double stirling_ln_gamma(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Bernoulli terms B_{2k} / (2k(2k-1) x^{2k-1})
  const double correction =
      inv * (1.0 / 12.0 -
             inv2 * (1.0 / 360.0 -
                     inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 * (1.0 / 1188.0)))));
  return (x - 0.5) * std::log(x) - x + kHalfLog2Pi + correction;
}

}  // namespace

double ln_gamma(double x) {
  require_positive(x, "ln_gamma");
  if (std::isinf(x)) return x;
  if (x >= 10.0) return stirling_ln_gamma(x);
  if (x < 0.5) return lanczos_ln_gamma(x + 1.0) - std::log(x);
  return lanczos_ln_gamma(x);
}

double ln_beta(double a, double b) {
  return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
}

double digamma(double x) {
  require_positive(x, "digamma");
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 -
                                      inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
  return shift + std::log(x) - 0.5 * inv - series;
}

}  // namespace ambiq
