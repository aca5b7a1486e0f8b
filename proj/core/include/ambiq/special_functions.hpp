#pragma once

namespace ambiq {

/// ln Γ(x) for x > 0. Lanczos (g = 7, 9 terms) below 10, Stirling series above.
double ln_gamma(double x);

/// ln B(a, b) = ln Γ(a) + ln Γ(b) - ln Γ(a + b)
double ln_beta(double a, double b);

/// ψ(x) for x > 0: upward recurrence to x >= 10, then the asymptotic series.
double digamma(double x);

}  // namespace ambiq
