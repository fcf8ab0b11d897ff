#include "surfquad/interp.hpp"

#include "surfquad/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

namespace surfquad {

ReferenceNodeSet::ReferenceNodeSet(int degree) : degree_(degree) {
  if (degree < 1) throw InvalidArgument("interpolation degree must be >= 1");
  const int k = degree;
  struct Entry {
    int group;  // 0 vertex, 1 edge, 2 interior
    int i, j;   // s = i/k, t = j/k
  };
  std::vector<Entry> entries;
  for (int i = 0; i <= k; ++i) {
    for (int j = 0; i + j <= k; ++j) {
      const int l = k - i - j;
      const int zeros = (i == 0) + (j == 0) + (l == 0);
      const int group = zeros >= 2 ? 0 : (zeros == 1 ? 1 : 2);
      entries.push_back({group, i, j});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    if (x.group != y.group) return x.group < y.group;
    if (x.group == 0) {
      // (0,0), (0,1), (1,0)
      auto rank = [](const Entry& e) { return e.i == 0 ? (e.j == 0 ? 0 : 1) : 2; };
      return rank(x) < rank(y);
    }
    return std::pair(x.i, x.j) < std::pair(y.i, y.j);
  });
  for (const auto& e : entries) {
    nodes_.emplace_back(static_cast<double>(e.i) / k, static_cast<double>(e.j) / k);
    lattice_.push_back({k - e.i - e.j, e.j, e.i});
  }
}

LagrangeBasis::LagrangeBasis(int degree) : nodes_(degree) {
  const int k = degree;
  for (int d = 0; d <= k; ++d)
    for (int a = d; a >= 0; --a) exps_.push_back({a, d - a});
  const auto n = static_cast<Eigen::Index>(nodes_.size());
  Eigen::MatrixXd vander(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Vec2& p = nodes_.node(static_cast<std::size_t>(r));
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto& e = exps_[static_cast<std::size_t>(c)];
      vander(r, c) = std::pow(p.x(), e[0]) * std::pow(p.y(), e[1]);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(vander);
  const auto& sv = svd.singularValues();
  condition_ = sv(0) / sv(sv.size() - 1);
  coeff_ = vander.fullPivLu().inverse();
}

namespace {

// powers[e] = x^e for e = 0..k
void powers(double x, int k, double* out) {
  out[0] = 1.0;
  for (int e = 1; e <= k; ++e) out[e] = out[e - 1] * x;
}

}  // namespace

void LagrangeBasis::values(const Vec2& p, Eigen::Ref<Eigen::VectorXd> out) const {
  const int k = degree();
  std::vector<double> ps(k + 1), pt(k + 1);
  powers(p.x(), k, ps.data());
  powers(p.y(), k, pt.data());
  Eigen::VectorXd mono(static_cast<Eigen::Index>(exps_.size()));
  for (std::size_t m = 0; m < exps_.size(); ++m)
    mono[static_cast<Eigen::Index>(m)] = ps[exps_[m][0]] * pt[exps_[m][1]];
  out.noalias() = coeff_.transpose() * mono;
}

void LagrangeBasis::gradients(const Vec2& p, Eigen::Ref<Eigen::VectorXd> ds,
                              Eigen::Ref<Eigen::VectorXd> dt) const {
  const int k = degree();
  std::vector<double> ps(k + 1), pt(k + 1);
  powers(p.x(), k, ps.data());
  powers(p.y(), k, pt.data());
  const auto n = static_cast<Eigen::Index>(exps_.size());
  Eigen::VectorXd ms(n), mt(n);
  for (std::size_t m = 0; m < exps_.size(); ++m) {
    const int a = exps_[m][0], b = exps_[m][1];
    ms[static_cast<Eigen::Index>(m)] = a > 0 ? a * ps[a - 1] * pt[b] : 0.0;
    mt[static_cast<Eigen::Index>(m)] = b > 0 ? b * ps[a] * pt[b - 1] : 0.0;
  }
  ds.noalias() = coeff_.transpose() * ms;
  dt.noalias() = coeff_.transpose() * mt;
}

const LagrangeBasis& lagrange_basis(int k) {
  constexpr int kMaxCached = 16;
  if (k < 1 || k > kMaxCached)
    throw InvalidArgument("interpolation degree must be in [1, 16]");
  static std::array<std::once_flag, kMaxCached + 1> once;
  static std::array<std::unique_ptr<const LagrangeBasis>, kMaxCached + 1> cache;
  std::call_once(once[k], [k] { cache[k] = std::make_unique<const LagrangeBasis>(k); });
  return *cache[k];
}

bool inside_reference(const Vec2& p, double tol) {
  return p.x() >= -tol && p.y() >= -tol && 1.0 - p.x() - p.y() >= -tol;
}

namespace {

void set_flags(const LagrangeBasis& basis, const Vec2& p, EvalFlags* flags) {
  if (!flags) return;
  flags->extrapolated = !inside_reference(p);
  flags->ill_conditioned = basis.ill_conditioned();
}

}  // namespace

Eigen::VectorXd eval_basis(const LagrangeBasis& basis, const Vec2& p, EvalFlags* flags) {
  set_flags(basis, p, flags);
  Eigen::VectorXd v(static_cast<Eigen::Index>(basis.size()));
  basis.values(p, v);
  return v;
}

Eigen::MatrixX2d eval_basis_grad(const LagrangeBasis& basis, const Vec2& p,
                                 EvalFlags* flags) {
  set_flags(basis, p, flags);
  Eigen::MatrixX2d g(static_cast<Eigen::Index>(basis.size()), 2);
  basis.gradients(p, g.col(0), g.col(1));
  return g;
}

Eigen::VectorXd interpolate(const LagrangeBasis& basis,
                            const Eigen::MatrixXd& nodal_values, const Vec2& p) {
  if (nodal_values.rows() != static_cast<Eigen::Index>(basis.size()))
    throw DimensionMismatch("expected " + std::to_string(basis.size()) +
                            " nodal values, got " + std::to_string(nodal_values.rows()));
  return nodal_values.transpose() * eval_basis(basis, p);
}

BasisTable tabulate(const LagrangeBasis& basis, const std::vector<Vec2>& points) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  const auto q = static_cast<Eigen::Index>(points.size());
  BasisTable t{Eigen::MatrixXd(n, q), Eigen::MatrixXd(n, q), Eigen::MatrixXd(n, q)};
  for (Eigen::Index j = 0; j < q; ++j) {
    const Vec2& p = points[static_cast<std::size_t>(j)];
    basis.values(p, t.value.col(j));
    basis.gradients(p, t.ds.col(j), t.dt.col(j));
  }
  return t;
}

ChebGrid::ChebGrid(int n_) : n(n_) {
  if (n < 1) throw InvalidArgument("Chebyshev grid needs n >= 1");
  for (int k = 0; k <= n; ++k) {
    // exact endpoints; symmetric interior values
    if (k == 0) {
      nodes_1d.push_back(1.0);
    } else if (k == n) {
      nodes_1d.push_back(-1.0);
    } else if (2 * k == n) {
      nodes_1d.push_back(0.0);
    } else {
      nodes_1d.push_back(std::cos(std::numbers::pi * k / n));
    }
  }
  for (double x : nodes_1d)
    for (double y : nodes_1d) tensor_nodes.push_back({x, y});
}

double lebesgue_constant(const std::vector<double>& nodes,
                         const std::vector<double>& bary_weights, int density) {
  if (nodes.size() != bary_weights.size() || nodes.size() < 2)
    throw InvalidArgument("lebesgue_constant needs matching node/weight lists");
  std::vector<std::size_t> order(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });

  auto lebesgue_fn = [&](double x) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double d = x - nodes[j];
      if (d == 0.0) return 1.0;
      const double q = bary_weights[j] / d;
      num += std::abs(q);
      den += q;
    }
    return num / std::abs(den);
  };

  const int n = static_cast<int>(nodes.size()) - 1;
  const int per_gap = std::max(16, density / n);
  double best = 1.0;
  for (std::size_t g = 0; g + 1 < order.size(); ++g) {
    const double lo = nodes[order[g]], hi = nodes[order[g + 1]];
    const double step = (hi - lo) / (per_gap + 1);
    int arg = 1;
    double val = 0.0;
    for (int i = 1; i <= per_gap; ++i) {
      const double v = lebesgue_fn(lo + i * step);
      if (v > val) {
        val = v;
        arg = i;
      }
    }
    // golden-section refinement inside the bracketing samples
    double a = lo + (arg - 1) * step, b = lo + (arg + 1) * step;
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
    double f1 = lebesgue_fn(x1), f2 = lebesgue_fn(x2);
    for (int it = 0; it < 60 && b - a > 1e-15; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + ratio * (b - a);
        f2 = lebesgue_fn(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - ratio * (b - a);
        f1 = lebesgue_fn(x1);
      }
    }
    best = std::max({best, val, f1, f2});
  }
  return best;
}

namespace {

void check_lebesgue_args(int n, int density) {
  if (n < 1) throw InvalidArgument("Lebesgue constant needs n >= 1");
  if (density < 1000) throw InvalidArgument("grid density must be >= 1000");
}

}  // namespace

double cheb_lebesgue(int n, int density) {
  check_lebesgue_args(n, density);
  const ChebGrid grid(n);
  std::vector<double> w(grid.nodes_1d.size());
  for (int j = 0; j <= n; ++j) w[j] = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == n) ? 0.5 : 1.0);
  return lebesgue_constant(grid.nodes_1d, w, density);
}

double equidistant_lebesgue(int n, int density) {
  check_lebesgue_args(n, density);
  std::vector<double> x(n + 1), w(n + 1);
  double binom = 1.0;
  for (int j = 0; j <= n; ++j) {
    x[j] = -1.0 + 2.0 * j / n;
    w[j] = ((j % 2) ? -1.0 : 1.0) * binom;
    binom = binom * (n - j) / (j + 1);
  }
  return lebesgue_constant(x, w, density);
}

double cheb_lebesgue_tensor(int n, int density) {
  const double l = cheb_lebesgue(n, density);
  return l * l;
}

double cheb_lebesgue_formula(int n) {
  return 2.0 / std::numbers::pi *
         (std::log(n + 1.0) + std::numbers::egamma + std::log(8.0 / std::numbers::pi));
}

BivariatePolynomial::BivariatePolynomial(int degree)
    : degree_(degree), c_(static_cast<std::size_t>((degree + 1) * (degree + 2) / 2), 0.0) {
  if (degree < 0) throw InvalidArgument("polynomial degree must be >= 0");
}

std::size_t BivariatePolynomial::index(int a, int b) {
  const int d = a + b;
  return static_cast<std::size_t>(d * (d + 1) / 2 + b);
}

double& BivariatePolynomial::coeff(int a, int b) {
  if (a < 0 || b < 0 || a + b > degree_) throw InvalidArgument("monomial out of range");
  return c_[index(a, b)];
}

double BivariatePolynomial::coeff(int a, int b) const {
  if (a < 0 || b < 0 || a + b > degree_) throw InvalidArgument("monomial out of range");
  return c_[index(a, b)];
}

double BivariatePolynomial::scale() const {
  double m = 0.0;
  for (double c : c_) m = std::max(m, std::abs(c));
  return m;
}

double BivariatePolynomial::operator()(double s, double t) const {
  double v = 0.0;
  for (int a = 0; a <= degree_; ++a)
    for (int b = 0; a + b <= degree_; ++b)
      v += c_[index(a, b)] * std::pow(s, a) * std::pow(t, b);
  return v;
}

double BivariatePolynomial::ds(double s, double t) const {
  double v = 0.0;
  for (int a = 1; a <= degree_; ++a)
    for (int b = 0; a + b <= degree_; ++b)
      v += a * c_[index(a, b)] * std::pow(s, a - 1) * std::pow(t, b);
  return v;
}

double BivariatePolynomial::dt(double s, double t) const {
  double v = 0.0;
  for (int a = 0; a <= degree_; ++a)
    for (int b = 1; a + b <= degree_; ++b)
      v += b * c_[index(a, b)] * std::pow(s, a) * std::pow(t, b - 1);
  return v;
}

std::pair<double, double> lemma2_defect(int k, const BivariatePolynomial& psi) {
  if (k < 1 || k > 8) throw InvalidArgument("lemma2_defect supports k in [1, 8]");
  const LagrangeBasis& basis = lagrange_basis(k);
  const QuadratureRule& rule = builtin_rule(k + 1);
  Eigen::VectorXd nodal(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Vec2& p = basis.nodes().node(i);
    nodal[static_cast<Eigen::Index>(i)] = psi(p.x(), p.y());
  }
  const BasisTable table = tabulate(basis, rule.points);
  double is = 0.0, it = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Vec2& p = rule.points[q];
    const auto col = static_cast<Eigen::Index>(q);
    is += rule.weights[q] * (psi.ds(p.x(), p.y()) - nodal.dot(table.ds.col(col)));
    it += rule.weights[q] * (psi.dt(p.x(), p.y()) - nodal.dot(table.dt.col(col)));
  }
  return {is, it};
}

}  // namespace surfquad
