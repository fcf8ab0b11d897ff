#pragma once

#include "surfquad/quad_rules.hpp"

#include <Eigen/Dense>

#include <array>
#include <utility>
#include <vector>

namespace surfquad {

/// Equidistant lattice {(i/k, j/k) : i + j <= k} on the reference triangle.
///
/// Ordering: the vertices (0,0), (0,1), (1,0); then the edge nodes; then the
/// interior nodes, each group sorted lexicographically in (s, t). The vertex
/// order matches the affine chart xi(s,t) = q1 + (q3 - q1) s + (q2 - q1) t,
/// so local vertex v of a flat triangle sits at node v.
class ReferenceNodeSet {
 public:
  explicit ReferenceNodeSet(int degree);

  int degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<Vec2>& nodes() const noexcept { return nodes_; }
  const Vec2& node(std::size_t i) const { return nodes_[i]; }
  /// Integer barycentric weights (w1, w2, w3) of node i with respect to the
  /// local vertices; they sum to the degree.
  const std::array<int, 3>& lattice(std::size_t i) const { return lattice_[i]; }

 private:
  int degree_;
  std::vector<Vec2> nodes_;
  std::vector<std::array<int, 3>> lattice_;
};

/// Number of nodes (k+1)(k+2)/2 = dim P_k in two variables.
constexpr std::size_t node_count(int k) {
  return static_cast<std::size_t>((k + 1) * (k + 2) / 2);
}

struct EvalFlags {
  bool extrapolated = false;
  bool ill_conditioned = false;
};

/// Lagrange basis of total degree k on the equidistant lattice, stored as
/// monomial coefficients from the inverse generalised Vandermonde matrix.
class LagrangeBasis {
 public:
  static constexpr double kIllConditioned = 1e12;

  explicit LagrangeBasis(int degree);

  int degree() const noexcept { return nodes_.degree(); }
  std::size_t size() const noexcept { return nodes_.size(); }
  const ReferenceNodeSet& nodes() const noexcept { return nodes_; }
  /// 2-norm condition number of the Vandermonde matrix.
  double condition() const noexcept { return condition_; }
  bool ill_conditioned() const noexcept { return condition_ > kIllConditioned; }
  /// Column i holds the monomial coefficients of L_i.
  const Eigen::MatrixXd& coefficients() const noexcept { return coeff_; }
  /// Exponents (a, b) of the monomial basis s^a t^b, row order of coefficients().
  const std::vector<std::array<int, 2>>& exponents() const noexcept { return exps_; }

  void values(const Vec2& p, Eigen::Ref<Eigen::VectorXd> out) const;
  void gradients(const Vec2& p, Eigen::Ref<Eigen::VectorXd> ds,
                 Eigen::Ref<Eigen::VectorXd> dt) const;

 private:
  ReferenceNodeSet nodes_;
  std::vector<std::array<int, 2>> exps_;
  Eigen::MatrixXd coeff_;
  double condition_ = 1.0;
};

/// Shared basis for degree k, built once on first use. Thread-safe.
const LagrangeBasis& lagrange_basis(int k);

bool inside_reference(const Vec2& p, double tol = 1e-15);

Eigen::VectorXd eval_basis(const LagrangeBasis& basis, const Vec2& p,
                           EvalFlags* flags = nullptr);

/// Columns 0 and 1 hold d/ds and d/dt of each basis function.
Eigen::MatrixX2d eval_basis_grad(const LagrangeBasis& basis, const Vec2& p,
                                 EvalFlags* flags = nullptr);

/// sum_i v_i L_i(p) for nodal values given as an N x d matrix.
/// Throws DimensionMismatch if the row count differs from the basis size.
Eigen::VectorXd interpolate(const LagrangeBasis& basis,
                            const Eigen::MatrixXd& nodal_values, const Vec2& p);

/// Basis values and derivatives tabulated at fixed points (N x Q each).
struct BasisTable {
  Eigen::MatrixXd value, ds, dt;
};
BasisTable tabulate(const LagrangeBasis& basis, const std::vector<Vec2>& points);

/// Chebyshev-Lobatto points cos(k pi / n), k = 0..n, on [-1, 1].
struct ChebGrid {
  explicit ChebGrid(int n);

  int n;
  std::vector<double> nodes_1d;                  // descending, +1 .. -1
  std::vector<std::array<double, 2>> tensor_nodes;  // nodes_1d x nodes_1d
};

/// Maximum over [-1, 1] of the Lebesgue function of `nodes`, evaluated in
/// barycentric form. Each gap between neighbouring nodes is sampled on a
/// uniform grid (density / n points, at least 16) and the best sample is
/// refined by golden-section search.
double lebesgue_constant(const std::vector<double>& nodes,
                         const std::vector<double>& bary_weights, int density);

/// Lebesgue constant of Cheb_n (requires n >= 1, density >= 1000).
double cheb_lebesgue(int n, int density = 4000);
/// Same estimator for n + 1 equidistant nodes on [-1, 1].
double equidistant_lebesgue(int n, int density = 4000);
/// Tensor-product constant Lambda(Cheb_n)^2.
double cheb_lebesgue_tensor(int n, int density = 4000);
/// (2/pi) (log(n+1) + gamma + log(8/pi)).
double cheb_lebesgue_formula(int n);

/// Polynomial in (s, t) stored by monomial coefficients s^a t^b.
class BivariatePolynomial {
 public:
  explicit BivariatePolynomial(int degree);

  int degree() const noexcept { return degree_; }
  double& coeff(int a, int b);
  double coeff(int a, int b) const;
  /// max |coefficient|
  double scale() const;

  double operator()(double s, double t) const;
  double ds(double s, double t) const;
  double dt(double s, double t) const;

 private:
  static std::size_t index(int a, int b);
  int degree_;
  std::vector<double> c_;
};

/// Integrals over the reference triangle of d/ds and d/dt of (psi - I_k psi),
/// where I_k is degree-k interpolation on the equidistant lattice. Computed
/// with a triangle rule exact to degree k + 1. Requires k in [1, 8].
std::pair<double, double> lemma2_defect(int k, const BivariatePolynomial& psi);

}  // namespace surfquad
