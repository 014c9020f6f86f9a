#ifndef OSC_PREDICATES_HPP
#define OSC_PREDICATES_HPP

// Adaptive-exact sign of the 2x2 orientation determinant.  A floating-point
// filter settles almost every call; the remainder are resolved with exact
// expansion arithmetic (error-free two-sum / two-product).

#include <array>
#include <cmath>
#include <limits>

namespace osc::predicates {

namespace detail {

inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bv = s - a;
  const double av = s - bv;
  e = (a - av) + (b - bv);
}

inline void two_product(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

// Sum of 12 doubles as a nonoverlapping expansion; returns the sign of the total.
inline int expansion_sign(const std::array<double, 12>& terms) {
  std::array<double, 13> h{};
  int len = 0;
  for (double b : terms) {
    double q = b;
    int out = 0;
    for (int i = 0; i < len; ++i) {
      double s, e;
      two_sum(q, h[i], s, e);
      q = s;
      if (e != 0.0) h[out++] = e;
    }
    h[out++] = q;
    len = out;
  }
  for (int i = len - 1; i >= 0; --i) {
    if (h[i] > 0.0) return 1;
    if (h[i] < 0.0) return -1;
  }
  return 0;
}

}  // namespace detail

/// +1 if c lies to the left of the directed line a->b, -1 if to the right,
/// 0 if the three points are exactly collinear.
inline int orient2d(double ax, double ay, double bx, double by, double cx, double cy) {
  const double detleft = (ax - cx) * (by - cy);
  const double detright = (ay - cy) * (bx - cx);
  const double det = detleft - detright;
  constexpr double eps = std::numeric_limits<double>::epsilon() * 0.5;
  constexpr double errbound = (3.0 + 16.0 * eps) * eps;
  const double bound = errbound * (std::fabs(detleft) + std::fabs(detright));
  if (det > bound) return 1;
  if (-det > bound) return -1;

  // det = ax*by - ax*cy - cx*by - ay*bx + ay*cx + cy*bx, each product split exactly.
  std::array<double, 12> t{};
  detail::two_product(ax, by, t[0], t[1]);
  detail::two_product(-ax, cy, t[2], t[3]);
  detail::two_product(-cx, by, t[4], t[5]);
  detail::two_product(-ay, bx, t[6], t[7]);
  detail::two_product(ay, cx, t[8], t[9]);
  detail::two_product(cy, bx, t[10], t[11]);
  return detail::expansion_sign(t);
}

}  // namespace osc::predicates

#endif  // OSC_PREDICATES_HPP
