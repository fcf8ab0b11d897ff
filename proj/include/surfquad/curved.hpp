#pragma once

#include "surfquad/interp.hpp"
#include "surfquad/refmesh.hpp"
#include "surfquad/surfaces.hpp"

#include <array>
#include <vector>

namespace surfquad {

using Jacobian = Eigen::Matrix<double, 3, 2>;

/// Degree-k isoparametric triangle: the flat parametrising triangle and the
/// closest-point images of every reference node (vertices included).
struct CurvedElement {
  int degree = 1;
  std::array<Vec3, 3> flat_vertices;
  std::vector<Vec3> projected_nodes;  // reference-node order
  const LagrangeBasis* basis = nullptr;
};

struct MetricSample {
  Vec3 point = Vec3::Zero();
  Jacobian jacobian = Jacobian::Zero();
  double g = 0.0;  // sqrt(det(J^T J))
};

/// Image of reference node i on the flat triangle, xi(s_i, t_i).
Vec3 flat_node(const std::array<Vec3, 3>& tri, const Vec2& p);

/// Projects xi(p_i) for every node of the degree-k lattice.
/// Projection failures surface as ElementError with face = 0 and the node.
CurvedElement build_element(const ImplicitSurface& surface,
                            const std::array<Vec3, 3>& flat_tri, int k,
                            const LagrangeBasis& basis,
                            const ProjectOptions& options = {});

/// Chart point only; no metric and no fold check.
Vec3 chart_point(const CurvedElement& elem, const Vec2& p);

/// Chart point, Jacobian and area density at p. Throws DegenerateJacobian
/// when det(J^T J) <= 0.
MetricSample chart_eval(const CurvedElement& elem, const Vec2& p);

double element_diameter(const CurvedElement& elem);

struct CurvedMeshOptions {
  ProjectOptions projection;
  int threads = 1;
};

/// All curved elements of a flat mesh. Vertex and edge nodes are projected
/// once through a table keyed by (vertex) or (sorted edge, lattice position),
/// so neighbouring elements share bitwise identical coordinates.
struct CurvedMesh {
  int degree = 1;
  const LagrangeBasis* basis = nullptr;
  std::vector<Vec3> nodes;                   // unique projected nodes
  std::vector<std::vector<int>> element_nodes;  // per face, reference order
  std::vector<std::array<Vec3, 3>> flat;        // per face

  std::size_t size() const noexcept { return element_nodes.size(); }
  CurvedElement element(std::size_t f) const;
};

/// Throws IntegrationError listing the faces whose nodes failed to project.
CurvedMesh build_curved_mesh(const FlatMesh& mesh, const ImplicitSurface& surface,
                             int k, const CurvedMeshOptions& options = {});

}  // namespace surfquad
