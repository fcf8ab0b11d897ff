#include "surfquad/integrate.hpp"

#include "surfquad/errors.hpp"
#include "surfquad/parallel.hpp"

#include <cmath>

namespace surfquad {

IntegrandMode parse_mode(std::string_view name) {
  if (name == "exact" || name == "exact_f") return IntegrandMode::exact_f;
  if (name == "interp" || name == "interp_f") return IntegrandMode::interp_f;
  throw InvalidArgument("unknown integrand mode '" + std::string(name) +
                        "' (expected exact or interp)");
}

std::string_view to_string(IntegrandMode mode) {
  return mode == IntegrandMode::exact_f ? "exact" : "interp";
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

using NodeMatrix = Eigen::Matrix<double, 3, Eigen::Dynamic>;

// One element: nodes are the projected node coordinates (3 x N); f_nodal is
// used in interp mode, f in exact mode.
double element_sum(const NodeMatrix& nodes, const Vec3& flat_normal,
                   const Eigen::VectorXd* f_nodal, const ScalarField* f,
                   const BasisTable& table, const QuadratureRule& rule) {
  const NodeMatrix xs = nodes * table.ds;
  const NodeMatrix xt = nodes * table.dt;
  NodeMatrix xq;
  Eigen::VectorXd fq;
  if (f_nodal) {
    fq = table.value.transpose() * (*f_nodal);
  } else {
    xq = nodes * table.value;
  }
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto c = static_cast<Eigen::Index>(q);
    const Vec3 js = xs.col(c), jt = xt.col(c);
    const Vec3 n = js.cross(jt);
    if (!(n.dot(flat_normal) > 0.0))
      throw DegenerateJacobian("chart Jacobian is singular or reverses orientation");
    const double fv = f_nodal ? fq[c] : (*f)(Vec3(xq.col(c)));
    sum += rule.weights[q] * fv * n.norm();
  }
  return sum;
}

Vec3 chart_normal(const std::array<Vec3, 3>& tri) {
  return (tri[2] - tri[0]).cross(tri[1] - tri[0]);
}

}  // namespace

double integrate_element(const CurvedElement& elem, const ScalarField& f,
                         const QuadratureRule& rule, IntegrandMode mode) {
  if (!elem.basis) throw InvalidArgument("curved element has no basis");
  const LagrangeBasis& basis = *elem.basis;
  const BasisTable table = tabulate(basis, rule.points);
  NodeMatrix nodes(3, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    nodes.col(static_cast<Eigen::Index>(i)) = elem.projected_nodes[i];
  if (mode == IntegrandMode::interp_f) {
    Eigen::VectorXd fn(nodes.cols());
    for (Eigen::Index i = 0; i < nodes.cols(); ++i) fn[i] = f(Vec3(nodes.col(i)));
    return element_sum(nodes, chart_normal(elem.flat_vertices), &fn, nullptr, table, rule);
  }
  return element_sum(nodes, chart_normal(elem.flat_vertices), nullptr, &f, table, rule);
}

IntegralResult integrate_curved(const CurvedMesh& curved, const ScalarField& f,
                                const QuadratureRule& rule, IntegrandMode mode,
                                int threads) {
  const LagrangeBasis& basis = *curved.basis;
  const BasisTable table = tabulate(basis, rule.points);
  const std::size_t n_faces = curved.size();

  // interp mode samples f once per unique node on the surface
  std::vector<double> f_at_node;
  if (mode == IntegrandMode::interp_f) {
    f_at_node.resize(curved.nodes.size());
    parallel_for(curved.nodes.size(), threads,
                 [&](std::size_t i) { f_at_node[i] = f(curved.nodes[i]); });
  }

  std::vector<double> contrib(n_faces, 0.0);
  std::vector<std::string> failure(n_faces);
  std::vector<char> failed(n_faces, 0);
  parallel_for(n_faces, threads, [&](std::size_t e) {
    const auto& ids = curved.element_nodes[e];
    NodeMatrix nodes(3, static_cast<Eigen::Index>(ids.size()));
    Eigen::VectorXd fn;
    if (mode == IntegrandMode::interp_f) fn.resize(nodes.cols());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      nodes.col(static_cast<Eigen::Index>(i)) = curved.nodes[ids[i]];
      if (mode == IntegrandMode::interp_f) fn[static_cast<Eigen::Index>(i)] = f_at_node[ids[i]];
    }
    try {
      contrib[e] = element_sum(nodes, chart_normal(curved.flat[e]),
                               mode == IntegrandMode::interp_f ? &fn : nullptr, &f,
                               table, rule);
    } catch (const Error& err) {
      failed[e] = 1;
      failure[e] = ElementError(e, -1, err.what()).what();
    }
  });

  std::vector<std::size_t> bad;
  for (std::size_t e = 0; e < n_faces; ++e)
    if (failed[e]) bad.push_back(e);
  if (!bad.empty()) {
    const std::string first = failure[bad.front()];
    throw IntegrationError(std::move(bad), first);
  }

  IntegralResult out;
  out.value = pairwise_sum(contrib);
  out.n_elements = n_faces;
  out.mode = mode;
  out.k = curved.degree;
  return out;
}

IntegralResult integrate_surface(const FlatMesh& mesh, const ImplicitSurface& surface,
                                 const ScalarField& f, int k, const QuadratureRule& rule,
                                 IntegrandMode mode, const IntegrateOptions& options) {
  CurvedMeshOptions copt;
  copt.projection = options.projection;
  copt.threads = options.threads;
  const CurvedMesh curved = build_curved_mesh(mesh, surface, k, copt);
  return integrate_curved(curved, f, rule, mode, options.threads);
}

}  // namespace surfquad
