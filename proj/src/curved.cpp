#include "surfquad/curved.hpp"

#include "surfquad/errors.hpp"
#include "surfquad/parallel.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

namespace surfquad {

Vec3 flat_node(const std::array<Vec3, 3>& tri, const Vec2& p) {
  return tri[0] + (tri[2] - tri[0]) * p.x() + (tri[1] - tri[0]) * p.y();
}

CurvedElement build_element(const ImplicitSurface& surface,
                            const std::array<Vec3, 3>& flat_tri, int k,
                            const LagrangeBasis& basis, const ProjectOptions& options) {
  if (basis.degree() != k)
    throw InvalidArgument("basis degree does not match element degree");
  CurvedElement elem;
  elem.degree = k;
  elem.flat_vertices = flat_tri;
  elem.basis = &basis;
  elem.projected_nodes.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    try {
      elem.projected_nodes.push_back(
          project(surface, flat_node(flat_tri, basis.nodes().node(i)), options).point);
    } catch (const Error& e) {
      throw ElementError(0, static_cast<int>(i), e.what());
    }
  }
  return elem;
}

namespace {

// Area density with an orientation check against the flat triangle: a chart
// whose Jacobian turns against the parametrising triangle is folded.
double area_density(const Vec3& js, const Vec3& jt, const Vec3& flat_normal) {
  const Vec3 n = js.cross(jt);
  if (!(n.dot(flat_normal) > 0.0))
    throw DegenerateJacobian("chart Jacobian is singular or reverses orientation");
  return n.norm();
}

Vec3 chart_normal(const std::array<Vec3, 3>& tri) {
  // d xi/ds x d xi/dt
  return (tri[2] - tri[0]).cross(tri[1] - tri[0]);
}

}  // namespace

Vec3 chart_point(const CurvedElement& elem, const Vec2& p) {
  if (!elem.basis) throw InvalidArgument("curved element has no basis");
  Eigen::VectorXd v(static_cast<Eigen::Index>(elem.basis->size()));
  elem.basis->values(p, v);
  Vec3 x = Vec3::Zero();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    x += v[i] * elem.projected_nodes[static_cast<std::size_t>(i)];
  return x;
}

MetricSample chart_eval(const CurvedElement& elem, const Vec2& p) {
  if (!elem.basis) throw InvalidArgument("curved element has no basis");
  const LagrangeBasis& basis = *elem.basis;
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::VectorXd v(n), ds(n), dt(n);
  basis.values(p, v);
  basis.gradients(p, ds, dt);
  MetricSample out;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3& node = elem.projected_nodes[static_cast<std::size_t>(i)];
    out.point += v[i] * node;
    out.jacobian.col(0) += ds[i] * node;
    out.jacobian.col(1) += dt[i] * node;
  }
  out.g = area_density(out.jacobian.col(0), out.jacobian.col(1),
                       chart_normal(elem.flat_vertices));
  return out;
}

double element_diameter(const CurvedElement& elem) {
  return triangle_diameter(elem.flat_vertices);
}

CurvedElement CurvedMesh::element(std::size_t f) const {
  CurvedElement elem;
  elem.degree = degree;
  elem.basis = basis;
  elem.flat_vertices = flat[f];
  elem.projected_nodes.reserve(element_nodes[f].size());
  for (int id : element_nodes[f]) elem.projected_nodes.push_back(nodes[id]);
  return elem;
}

CurvedMesh build_curved_mesh(const FlatMesh& mesh, const ImplicitSurface& surface,
                             int k, const CurvedMeshOptions& options) {
  const LagrangeBasis& basis = lagrange_basis(k);
  const ReferenceNodeSet& ref = basis.nodes();

  CurvedMesh out;
  out.degree = k;
  out.basis = &basis;
  out.flat.reserve(mesh.faces.size());
  out.element_nodes.resize(mesh.faces.size());

  // Flat positions of every unique node; vertex nodes share the vertex index.
  std::vector<Vec3> flat_pos = mesh.vertices;
  std::unordered_map<std::uint64_t, int> edge_base;
  auto edge_node = [&](int a, int b, int m_toward_b) {
    const int lo = std::min(a, b), hi = std::max(a, b);
    const int m = (hi == b) ? m_toward_b : k - m_toward_b;  // weight of hi
    const std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) |
                              static_cast<std::uint64_t>(hi);
    auto [it, inserted] = edge_base.try_emplace(key, static_cast<int>(flat_pos.size()));
    if (inserted) {
      const Vec3& xl = mesh.vertices[lo];
      const Vec3& xh = mesh.vertices[hi];
      for (int j = 1; j < k; ++j)
        flat_pos.push_back((static_cast<double>(k - j) * xl + static_cast<double>(j) * xh) / k);
    }
    return it->second + (m - 1);
  };

  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& face = mesh.faces[f];
    const auto tri = mesh.triangle(f);
    out.flat.push_back(tri);
    auto& ids = out.element_nodes[f];
    ids.reserve(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const auto& w = ref.lattice(i);
      const int nonzero = (w[0] > 0) + (w[1] > 0) + (w[2] > 0);
      if (nonzero == 1) {
        ids.push_back(face[w[0] > 0 ? 0 : (w[1] > 0 ? 1 : 2)]);
      } else if (nonzero == 2) {
        const int va = w[0] > 0 ? 0 : 1;
        const int vb = w[2] > 0 ? 2 : 1;
        ids.push_back(edge_node(face[va], face[vb], w[vb]));
      } else {
        ids.push_back(static_cast<int>(flat_pos.size()));
        flat_pos.push_back(flat_node(tri, ref.node(i)));
      }
    }
  }

  out.nodes.resize(flat_pos.size());
  std::vector<std::string> failure(flat_pos.size());
  std::vector<char> failed(flat_pos.size(), 0);
  parallel_for(flat_pos.size(), options.threads, [&](std::size_t i) {
    try {
      out.nodes[i] = project(surface, flat_pos[i], options.projection).point;
    } catch (const Error& e) {
      failed[i] = 1;
      failure[i] = e.what();
    }
  });

  if (std::find(failed.begin(), failed.end(), 1) != failed.end()) {
    std::vector<std::size_t> faces;
    std::string first;
    for (std::size_t f = 0; f < out.element_nodes.size(); ++f) {
      const auto& ids = out.element_nodes[f];
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (failed[ids[i]]) {
          if (first.empty())
            first = ElementError(f, static_cast<int>(i), failure[ids[i]]).what();
          faces.push_back(f);
          break;
        }
      }
    }
    throw IntegrationError(std::move(faces), first);
  }
  return out;
}

}  // namespace surfquad
