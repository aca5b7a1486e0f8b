#include "ambiq/binary_density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ambiq/error.hpp"

namespace ambiq {

namespace {

constexpr double kRadicandNoise = 1e-12;
constexpr int kPanels = 4;
// Relative inset of substituted endpoints where a Beta factor may diverge.
constexpr double kInnerInset = 1e-8;
constexpr double kOuterInset = 1e-7;
// Inner tolerance floor relative to a coarse estimate of the density; the
// density grows without bound near a = 1 for the modified measure.
constexpr double kInnerRelative = 1e-10;
constexpr int kCoarseDepth = 3;

void require_binary_measure(MeasureKind measure) {
  if (measure == MeasureKind::Old)
    fail(ErrorCode::InvalidArgument, "analytic density exists only for new and modified");
}

double clamped_sqrt(double radicand) {
  if (radicand < 0.0) {
    if (radicand < -kRadicandNoise)
      fail(ErrorCode::DomainError, "negative radicand " + std::to_string(radicand));
    return 0.0;
  }
  return std::sqrt(radicand);
}

// Integrand pieces at a point u = q_cs inside [g(a), a], given the distance
// r = u - g(a) to the lower end and t = a - u to the upper end; eps = 1 - a.
struct Geometry {
  double one_minus_u;
  double xi;
  double dxi_da;  // may be +inf at u = g(a) for New; callers fold in the Jacobian
};

Geometry geometry_new(double eps, double r, double t, double d) {
  Geometry g{};
  g.one_minus_u = eps + t;
  const double spread = r + d;  // u - (2a - 1)
  const double root = std::sqrt(std::max(0.0, spread / g.one_minus_u));
  g.xi = t / (g.one_minus_u * (1.0 + root));
  g.dxi_da = 0.5 / std::sqrt(g.one_minus_u * spread);
  return g;
}

Geometry geometry_modified(double eps, double t) {
  Geometry g{};
  g.one_minus_u = eps + t;
  const double root = std::sqrt(eps / g.one_minus_u);
  g.xi = 0.5 * (t / g.one_minus_u) / (1.0 + root);
  g.dxi_da = 0.25 / std::sqrt(eps * g.one_minus_u);
  return g;
}

}  // namespace

double xi(double a, double u, MeasureKind measure) {
  require_binary_measure(measure);
  const double ratio = (1.0 - a) / (1.0 - u);
  const double radicand = measure == MeasureKind::New ? 2.0 * ratio - 1.0 : ratio;
  return 0.5 * (1.0 - clamped_sqrt(radicand));
}

double xi_partial_a(double a, double u, MeasureKind measure) {
  require_binary_measure(measure);
  constexpr double kTiny = 1e-300;
  if (measure == MeasureKind::New) {
    const double product = (1.0 - u) * ((1.0 - a) + (u - a));
    if (!(product > kTiny))
      fail(ErrorCode::SingularPoint, "d(xi)/da is singular at u = 2a - 1");
    return 0.5 / std::sqrt(product);
  }
  const double product = (1.0 - a) * (1.0 - u);
  if (!(product > kTiny)) fail(ErrorCode::SingularPoint, "d(xi)/da is singular at a = 1");
  return 0.25 / std::sqrt(product);
}

double lower_bound(double a, MeasureKind measure) {
  if (measure == MeasureKind::Modified) return 0.0;
  return std::max(0.0, 2.0 * a - 1.0);
}

BinaryPosterior::BinaryPosterior(const BinaryCounts& counts, double prior_beta,
                                 MeasureKind measure, const Quadrature& quadrature)
    : measure_(measure),
      outer_(quadrature),
      inner_(quadrature),
      cs_density_(BetaParams(static_cast<double>(counts.n_cs) + prior_beta,
                             static_cast<double>(counts.n_plus + counts.n_minus) + 2.0 * prior_beta)),
      proper_density_(BetaParams(static_cast<double>(counts.n_plus) + prior_beta,
                                 static_cast<double>(counts.n_minus) + prior_beta)),
      inset_(0.0) {
  require_binary_measure(measure);
  if (!(prior_beta > 0.0)) fail(ErrorCode::InvalidArgument, "prior beta must be > 0");
  quadrature.validate();
  inner_.tol = quadrature.tol / 100.0;
  const bool small_shape = cs_density_.params().alpha() < 1.0 ||
                           proper_density_.params().alpha() < 1.0 ||
                           proper_density_.params().beta() < 1.0;
  inset_ = small_shape ? kInnerInset : 0.0;
}

double BinaryPosterior::density(double a) const {
  if (!(a > 0.0 && a < 1.0))
    fail(ErrorCode::DomainError, "density argument " + std::to_string(a) + " outside (0,1)");
  return density_unchecked(a, 1.0 - a);
}

double BinaryPosterior::density_unchecked(double a, double eps) const {
  if (a <= 0.0 || !(eps > 0.0)) return 0.0;
  // For New above 1/2, g = 2a - 1 and the interval [g, a] has width 1 - a.
  const bool kinked = measure_ == MeasureKind::New && a > 0.5;
  const double g = kinked ? 1.0 - 2.0 * eps : 0.0;
  const double width = kinked ? eps : a;
  const double d = measure_ == MeasureKind::New && !kinked ? eps - a : 0.0;
  const double half = 0.5 * width;
  const double s_max = std::sqrt(half);
  const double s_min = inset_ * s_max;

  auto pair_density = [&](double x) {
    const double xc = std::clamp(x, 0.0, 1.0);
    return proper_density_.at(xc, 1.0 - xc) + proper_density_.at(1.0 - xc, xc);
  };

  // u = a - s²: du = 2s ds
  auto upper = [&](double s) {
    const double t = s * s;
    const double r = width - t;
    const Geometry geo = measure_ == MeasureKind::New ? geometry_new(eps, r, t, d)
                                                      : geometry_modified(eps, t);
    const double u = std::max(0.0, a - t);
    return 2.0 * s * cs_density_.at(u, geo.one_minus_u) * pair_density(geo.xi) * geo.dxi_da;
  };

  // u = g + s²: du = 2s ds. For New, 2s·∂ξ/∂a = s / sqrt((1-u)(s² + d)),
  // which tends to 1/sqrt(1-u) as s -> 0 when d = 0.
  auto lower = [&](double s) {
    const double r = s * s;
    const double t = width - r;
    const double u = g + r;
    Geometry geo;
    double weighted_dxi;
    if (measure_ == MeasureKind::New) {
      geo = geometry_new(eps, r, t, d);
      weighted_dxi = d == 0.0 ? 1.0 / std::sqrt(geo.one_minus_u)
                              : s / std::sqrt(geo.one_minus_u * (r + d));
    } else {
      geo = geometry_modified(eps, t);
      weighted_dxi = 2.0 * s * geo.dxi_da;
    }
    return cs_density_.at(u, geo.one_minus_u) * pair_density(geo.xi) * weighted_dxi;
  };

  Quadrature coarse_q{inner_.tol, kCoarseDepth};
  const double coarse =
      std::abs(adaptive_simpson_panels(upper, s_min, s_max, kPanels, coarse_q).value) +
      std::abs(adaptive_simpson_panels(lower, s_min, s_max, kPanels, coarse_q).value);
  Quadrature half_q = inner_;
  half_q.tol = 0.5 * std::max(inner_.tol, kInnerRelative * coarse);
  const auto hi = adaptive_simpson_panels(upper, s_min, s_max, kPanels, half_q);
  const auto lo = adaptive_simpson_panels(lower, s_min, s_max, kPanels, half_q);
  if (hi.depth_exceeded || lo.depth_exceeded) depth_exceeded_ = true;
  return std::max(0.0, hi.value + lo.value);
}

double BinaryPosterior::integrate(double lo, double hi, bool weight_by_a) const {
  lo = std::clamp(lo, 0.0, 1.0);
  hi = std::clamp(hi, 0.0, 1.0);
  if (!(hi > lo)) return 0.0;

  // Each piece is integrated in s with a = anchor ± s², so the anchor end
  // sees a square-root stretch. Modified: anchors 0 and 1. New also anchors
  // at the kink, where the density has a log singularity when the cs shape
  // is below one.
  struct Piece {
    double from;
    double to;
    double anchor;
  };
  static constexpr Piece kModifiedPieces[] = {{0.0, 0.5, 0.0}, {0.5, 1.0, 1.0}};
  static constexpr Piece kNewPieces[] = {
      {0.0, 0.25, 0.0}, {0.25, 0.5, 0.5}, {0.5, 0.75, 0.5}, {0.75, 1.0, 1.0}};
  const std::span<const Piece> pieces =
      measure_ == MeasureKind::New ? std::span<const Piece>(kNewPieces)
                                   : std::span<const Piece>(kModifiedPieces);

  const bool singular_top = measure_ == MeasureKind::Modified || inset_ > 0.0;
  const bool singular_bottom = inset_ > 0.0;
  Quadrature piece_q = outer_;
  piece_q.tol = outer_.tol / static_cast<double>(pieces.size());
  double total = 0.0;
  for (const Piece& piece : pieces) {
    const double from = std::max(lo, piece.from);
    const double to = std::min(hi, piece.to);
    if (!(to > from)) continue;
    const bool upward = piece.anchor <= piece.from;
    double s_lo = std::sqrt(upward ? from - piece.anchor : piece.anchor - to);
    const double s_hi = std::sqrt(upward ? to - piece.anchor : piece.anchor - from);
    auto f = [&](double s) {
      const double offset = s * s;
      const double a = upward ? piece.anchor + offset : piece.anchor - offset;
      // 1 - a exactly when anchored at 1
      const double eps = piece.anchor == 1.0 ? offset : 1.0 - a;
      const double w = weight_by_a ? a : 1.0;
      return 2.0 * s * w * density_unchecked(a, eps);
    };
    const bool at_bottom = piece.anchor == 0.0 && singular_bottom;
    const bool at_top = piece.anchor == 1.0 && singular_top;
    const bool inset = (at_bottom || at_top) && s_lo < kOuterInset;
    if (inset) s_lo = kOuterInset;
    if (!(s_hi > s_lo)) continue;
    const auto res = adaptive_simpson_panels(f, s_lo, s_hi, kPanels, piece_q);
    depth_exceeded_ = depth_exceeded_ || res.depth_exceeded;
    total += res.value;
    // The integrand in s tends to a constant at s = 0 for the modified
    // measure near a = 1; account for the skipped sliver with a rectangle.
    if (inset && at_top) total += kOuterInset * f(kOuterInset);
  }
  return total;
}

double BinaryPosterior::cdf(double a) const {
  if (!(a >= 0.0 && a <= 1.0))
    fail(ErrorCode::DomainError, "cdf argument " + std::to_string(a) + " outside [0,1]");
  return std::clamp(integrate(0.0, a, false), 0.0, 1.0);
}

double BinaryPosterior::normalization() const { return integrate(0.0, 1.0, false); }

double BinaryPosterior::mean() const { return integrate(0.0, 1.0, true); }

std::vector<double> BinaryPosterior::cdf_on_grid(std::span<const double> grid) const {
  std::vector<double> out(grid.size());
  double previous = 0.0;
  double running = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = grid[i];
    if (!(a >= 0.0 && a <= 1.0) || a < previous)
      fail(ErrorCode::InvalidArgument, "cdf grid must be ascending within [0,1]");
    running += integrate(previous, a, false);
    out[i] = std::min(running, 1.0);
    previous = a;
  }
  return out;
}

double posterior_density_binary(double a, const BinaryCounts& counts, double prior_beta,
                                MeasureKind measure, const Quadrature& q) {
  return BinaryPosterior(counts, prior_beta, measure, q).density(a);
}

double posterior_cdf_binary(double a, const BinaryCounts& counts, double prior_beta,
                            MeasureKind measure, const Quadrature& q) {
  return BinaryPosterior(counts, prior_beta, measure, q).cdf(a);
}

std::vector<double> binary_density_grid(MeasureKind measure, std::size_t points, double inset) {
  if (points < 2) fail(ErrorCode::InvalidArgument, "grid needs at least 2 points");
  if (!(inset > 0.0 && inset < 0.5)) fail(ErrorCode::InvalidArgument, "grid inset outside (0, 0.5)");
  std::vector<double> grid(points);
  const double step = (1.0 - 2.0 * inset) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = inset + step * static_cast<double>(i);
  grid.back() = 1.0 - inset;
  if (measure == MeasureKind::New) {
    // Snap the nearest point onto the kink.
    auto nearest = std::min_element(grid.begin(), grid.end(), [](double x, double y) {
      return std::abs(x - 0.5) < std::abs(y - 0.5);
    });
    *nearest = 0.5;
  }
  return grid;
}

}  // namespace ambiq
