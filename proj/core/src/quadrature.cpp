#include "ambiq/quadrature.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ambiq/error.hpp"

namespace ambiq {

namespace {

constexpr double kRoundoff = 64.0 * std::numeric_limits<double>::epsilon();

struct SimpsonState {
  const std::function<double(double)>& f;
  int max_depth;
  QuadratureResult result;

  double eval(double x) {
    const double y = f(x);
    ++result.evaluations;
    if (!std::isfinite(y))
      fail(ErrorCode::NonFiniteIntegrand, "integrand is " + std::to_string(y) +
                                              " at x = " + std::to_string(x));
    return y;
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                 int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    // Below roundoff, or nothing left to split: further refinement cannot help.
    const bool roundoff = std::abs(delta) <= kRoundoff * (std::abs(left) + std::abs(right));
    const bool collapsed = !(a < lm && lm < m && m < rm && rm < b);
    if (roundoff) return left + right + delta / 15.0;
    if (depth >= max_depth || collapsed) {
      result.depth_exceeded = true;
      return left + right + delta / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

void Quadrature::validate() const {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "quadrature tol must be > 0");
  if (max_depth < 1) fail(ErrorCode::InvalidArgument, "quadrature max_depth must be >= 1");
}

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  const Quadrature& q) {
  q.validate();
  if (!(a <= b)) fail(ErrorCode::InvalidArgument, "adaptive_simpson requires a <= b");
  SimpsonState state{f, q.max_depth, {}};
  if (a == b) return state.result;
  const double fa = state.eval(a);
  const double fb = state.eval(b);
  const double m = 0.5 * (a + b);
  const double fm = state.eval(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  state.result.value = state.recurse(a, b, fa, fm, fb, whole, q.tol, 1);
  return state.result;
}

QuadratureResult adaptive_simpson_panels(const std::function<double(double)>& f, double a,
                                         double b, int panels, const Quadrature& q) {
  if (panels < 1) fail(ErrorCode::InvalidArgument, "panel count must be >= 1");
  Quadrature per_panel = q;
  per_panel.tol = q.tol / panels;
  QuadratureResult total;
  const double width = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + width * i;
    const double hi = i + 1 == panels ? b : a + width * (i + 1);
    const auto part = adaptive_simpson(f, lo, hi, per_panel);
    total.value += part.value;
    total.depth_exceeded = total.depth_exceeded || part.depth_exceeded;
    total.evaluations += part.evaluations;
  }
  return total;
}

}  // namespace ambiq
