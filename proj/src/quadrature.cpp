#include "t2g/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "t2g/errors.hpp"

namespace t2g {

std::vector<double> uniform_quad_weights(int n, double h) {
  if (n < 2) throw NumericsError("quadrature needs at least 2 grid points");
  if (!(h > 0.0)) throw NumericsError("quadrature step must be positive");
  std::vector<double> w(n, 0.0);
  const int intervals = n - 1;
  if (intervals == 1) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  // Composite Simpson over an even count of intervals; an odd interval count
  // ends with a Simpson 3/8 block on the last three (every node keeps O(h^4)).
  const bool tail38 = intervals % 2 != 0;
  const int simpson_end = tail38 ? intervals - 3 : intervals;
  for (int i = 0; i + 2 <= simpson_end; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  if (tail38) {
    const int s = simpson_end;
    w[s] += 3.0 * h / 8.0;
    w[s + 1] += 9.0 * h / 8.0;
    w[s + 2] += 9.0 * h / 8.0;
    w[s + 3] += 3.0 * h / 8.0;
  }
  return w;
}

namespace {

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                        int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

double tri_midpoint_rule(const std::function<double(const Vec2&)>& f, const Vec2& a, const Vec2& b,
                         const Vec2& c) {
  const double area = 0.5 * cross2(b - a, c - a);
  return area / 3.0 * (f(0.5 * (a + b)) + f(0.5 * (b + c)) + f(0.5 * (c + a)));
}

namespace {

double adaptive_triangle_rec(const std::function<double(const Vec2&)>& f, const Vec2& a,
                             const Vec2& b, const Vec2& c, double coarse, double tol, int depth,
                             bool& ok) {
  const Vec2 ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
  const double s0 = tri_midpoint_rule(f, a, ab, ca);
  const double s1 = tri_midpoint_rule(f, ab, b, bc);
  const double s2 = tri_midpoint_rule(f, ca, bc, c);
  const double s3 = tri_midpoint_rule(f, ab, bc, ca);
  const double fine = s0 + s1 + s2 + s3;
  if (std::abs(fine - coarse) <= tol) return fine;
  if (depth <= 0) {
    ok = false;
    return fine;
  }
  const double q = 0.25 * tol;
  return adaptive_triangle_rec(f, a, ab, ca, s0, q, depth - 1, ok) +
         adaptive_triangle_rec(f, ab, b, bc, s1, q, depth - 1, ok) +
         adaptive_triangle_rec(f, ca, bc, c, s2, q, depth - 1, ok) +
         adaptive_triangle_rec(f, ab, bc, ca, s3, q, depth - 1, ok);
}

}  // namespace

double adaptive_triangle(const std::function<double(const Vec2&)>& f, const Vec2& a, const Vec2& b,
                         const Vec2& c, double abs_tol, int max_depth, bool* converged) {
  bool ok = true;
  const double coarse = tri_midpoint_rule(f, a, b, c);
  const double v = adaptive_triangle_rec(f, a, b, c, coarse, abs_tol, max_depth, ok);
  if (converged) *converged = ok;
  return v;
}

double slope_loglog(const std::vector<double>& x, const std::vector<double>& val) {
  if (x.size() != val.size() || x.size() < 2)
    throw NumericsError("slope fit needs matching arrays with at least 2 points");
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(val[i] > 0.0))
      throw NumericsError("slope fit requires positive abscissae and values");
    const double lx = std::log(x[i]);
    const double ly = std::log(val[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) throw NumericsError("slope fit degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace t2g
