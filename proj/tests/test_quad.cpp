#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "surfquad/errors.hpp"
#include "surfquad/quad_rules.hpp"

#include <cmath>
#include <set>

using namespace surfquad;

namespace {

long double factorial(int n) {
  long double r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double exact(int a, int b) {
  return static_cast<double>(factorial(a) * factorial(b) / factorial(a + b + 2));
}

double apply(const QuadratureRule& rule, int a, int b) {
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q)
    sum += rule.weights[q] * std::pow(rule.points[q].x(), a) * std::pow(rule.points[q].y(), b);
  return sum;
}

// Collapsed Gauss-Legendre on the triangle: s = u, t = (1 - u) v.
double collapsed_gauss(int a, int b) {
  static const double x[] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                             -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                             0.7966664774136267,  0.9602898564975363};
  static const double w[] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                             0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                             0.2223810344533745, 0.1012285362903763};
  double sum = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const double u = 0.5 * (x[i] + 1), v = 0.5 * (x[j] + 1);
      sum += 0.25 * w[i] * w[j] * (1 - u) * std::pow(u, a) * std::pow((1 - u) * v, b);
    }
  return sum;
}

}  // namespace

TEST_CASE("monomial integrals") {
  CHECK(monomial_integral(0, 0) == doctest::Approx(0.5));
  CHECK(monomial_integral(1, 0) == doctest::Approx(1.0 / 6));
  CHECK(monomial_integral(5, 7) == doctest::Approx(exact(5, 7)).epsilon(1e-15));
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; a + b <= 6; ++b)
      CHECK(monomial_integral(a, b) == doctest::Approx(collapsed_gauss(a, b)).epsilon(1e-14));
}

TEST_CASE("centroid rule") {
  const QuadratureRule& r = builtin_rule(1);
  REQUIRE(r.size() == 1);
  CHECK(r.weights[0] == doctest::Approx(0.5));
  CHECK(r.points[0].x() == doctest::Approx(1.0 / 3));
  CHECK(r.points[0].y() == doctest::Approx(1.0 / 3));
}

TEST_CASE("degree 12 rule") {
  const QuadratureRule& r = builtin_rule(12);
  CHECK(r.degree >= 12);
  CHECK(std::abs(apply(r, 5, 7) - exact(5, 7)) <= 1e-13);
  // 5!7!/14!
  CHECK(exact(5, 7) == doctest::Approx(120.0 * 5040.0 / 87178291200.0).epsilon(1e-15));
  CHECK(std::abs(apply(r, 13, 0) - exact(13, 0)) > 1e-13);
}

TEST_CASE("every degree integrates all monomials up to its degree") {
  for (int d = 1; d <= 12; ++d) {
    const QuadratureRule& r = builtin_rule(d);
    CHECK(r.degree >= d);
    double worst = 0.0;
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) worst = std::max(worst, std::abs(apply(r, a, b) - exact(a, b)));
    INFO("degree " << d);
    CHECK(worst <= 1e-13);
    CHECK(max_monomial_error(r, d) <= 1e-13);
  }
}

TEST_CASE("weights positive, points interior, rule symmetric") {
  for (int d = 1; d <= 12; ++d) {
    const QuadratureRule& r = builtin_rule(d);
    double wsum = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q) {
      const Vec2& p = r.points[q];
      CHECK(r.weights[q] > 0.0);
      CHECK(p.x() > 0.0);
      CHECK(p.y() > 0.0);
      CHECK(p.x() + p.y() < 1.0);
      wsum += r.weights[q];
    }
    CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));
    // the mirror image s <-> t of every point is also a point with the same weight
    for (std::size_t q = 0; q < r.size(); ++q) {
      bool found = false;
      for (std::size_t p = 0; p < r.size(); ++p)
        found |= std::abs(r.points[p].x() - r.points[q].y()) < 1e-14 &&
                 std::abs(r.points[p].y() - r.points[q].x()) < 1e-14 &&
                 std::abs(r.weights[p] - r.weights[q]) < 1e-15;
      CHECK(found);
    }
  }
}

TEST_CASE("embedded tables") {
  const std::vector<int> d = embedded_rule_degrees();
  const std::set<int> have(d.begin(), d.end());
  CHECK(have.count(1));
  CHECK(have.count(12));
  for (int e : d) CHECK(builtin_rule(e).degree == e);
}

TEST_CASE("unsupported degrees") {
  CHECK_THROWS_AS(builtin_rule(0), UnsupportedDegree);
  CHECK_THROWS_AS(builtin_rule(13), UnsupportedDegree);
  CHECK_THROWS_AS(builtin_rule(-1), UnsupportedDegree);
}
