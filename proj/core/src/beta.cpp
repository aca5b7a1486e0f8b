#include "ambiq/beta.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ambiq/error.hpp"
#include "ambiq/special_functions.hpp"

namespace ambiq {

namespace {

void require_unit(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    fail(ErrorCode::DomainError, "Beta argument " + std::to_string(x) + " outside [0,1]");
}

// (exponent)·ln(base) with the 0·ln 0 = 0 convention.
double power_term(double exponent, double base) {
  if (exponent == 0.0) return 0.0;
  if (base == 0.0) {
    return exponent > 0.0 ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
  }
  return exponent * std::log(base);
}

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 100000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double dm = static_cast<double>(m);
    const double m2 = 2.0 * dm;
    double aa = dm * (b - dm) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + dm) * (qab + dm) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  fail(ErrorCode::InternalConsistency, "incomplete beta continued fraction did not converge");
}

}  // namespace

BetaDensity::BetaDensity(const BetaParams& params)
    : params_(params), log_norm_(-ln_beta(params.alpha(), params.beta())) {}

double BetaDensity::operator()(double x) const { return at(x, 1.0 - x); }

double BetaDensity::at(double x, double one_minus_x) const {
  require_unit(x);
  require_unit(one_minus_x);
  const double log_value = power_term(params_.alpha() - 1.0, x) +
                           power_term(params_.beta() - 1.0, one_minus_x) + log_norm_;
  return std::exp(log_value);
}

double beta_pdf(const BetaParams& params, double x) { return BetaDensity(params)(x); }

double regularized_incomplete_beta(const BetaParams& params, double x) {
  require_unit(x);
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double a = params.alpha();
  const double b = params.beta();
  const double log_front = a * std::log(x) + b * std::log1p(-x) - ln_beta(a, b);
  const double front = std::exp(log_front);
  double result;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    result = front * beta_continued_fraction(a, b, x) / a;
  } else {
    result = 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
  }
  if (result < 0.0) return 0.0;
  if (result > 1.0) return 1.0;
  return result;
}

double beta_moment(const BetaParams& params, unsigned n) {
  double value = 1.0;
  for (unsigned i = 0; i < n; ++i) {
    const double di = static_cast<double>(i);
    value *= (params.alpha() + di) / (params.alpha() + params.beta() + di);
  }
  return value;
}

double beta_variance(const BetaParams& params) {
  const double a = params.alpha();
  const double b = params.beta();
  const double s = a + b;
  return a * b / (s * s * (s + 1.0));
}

double beta_mixed_expectation(const BetaParams& params) {
  const double a = params.alpha();
  const double b = params.beta();
  const double s = a + b;
  return a * b / (s * (s + 1.0));
}

}  // namespace ambiq
