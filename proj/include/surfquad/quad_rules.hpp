#pragma once

#include <Eigen/Dense>

#include <vector>

namespace surfquad {

using Vec2 = Eigen::Vector2d;

/// Quadrature on the reference triangle {s >= 0, t >= 0, s + t <= 1}.
/// Weights sum to 1/2, the area of the triangle.
struct QuadratureRule {
  int degree = 0;
  std::vector<Vec2> points;
  std::vector<double> weights;

  std::size_t size() const noexcept { return points.size(); }
};

/// Exact integral of s^a t^b over the reference triangle: a! b! / (a+b+2)!.
double monomial_integral(int a, int b);

/// Largest deviation from monomial_integral over all a + b <= degree.
double max_monomial_error(const QuadratureRule& rule, int degree);

/// Symmetric positive-weight rule with all points strictly inside the
/// triangle, exact for total degree >= `degree`. Supported: 1..12.
/// Throws UnsupportedDegree otherwise.
const QuadratureRule& builtin_rule(int degree);

/// Degrees for which a dedicated table is embedded.
std::vector<int> embedded_rule_degrees();

}  // namespace surfquad
