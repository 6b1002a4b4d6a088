#pragma once

// Quadrature building blocks shared by the energy forms, the coupling
// constant and the measure checks: composite Simpson weights on uniform
// grids, adaptive Simpson in 1-D and adaptive midpoint-rule refinement on
// triangles in 2-D.

#include <functional>
#include <vector>

#include "t2g/geometry.hpp"

namespace t2g {

// Weights for a uniform grid of n >= 2 points with spacing h: composite
// Simpson when the interval count is even, Simpson + 3/8 tail when odd,
// trapezoid for a single interval. Order >= 2 in all cases.
std::vector<double> uniform_quad_weights(int n, double h);

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 48);

// Degree-2 rule: mean of the three edge midpoints times the area.
double tri_midpoint_rule(const std::function<double(const Vec2&)>& f, const Vec2& a,
                         const Vec2& b, const Vec2& c);

// Recursive 4-way refinement of the midpoint rule. `converged` (optional)
// is cleared when some leaf hit max_depth before meeting its tolerance.
double adaptive_triangle(const std::function<double(const Vec2&)>& f, const Vec2& a,
                         const Vec2& b, const Vec2& c, double abs_tol, int max_depth = 22,
                         bool* converged = nullptr);

// Least-squares slope of log(val) vs log(x); requires all inputs positive.
double slope_loglog(const std::vector<double>& x, const std::vector<double>& val);

}  // namespace t2g
