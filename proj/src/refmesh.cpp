#include "surfquad/refmesh.hpp"

#include "surfquad/errors.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <unordered_map>

namespace surfquad {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

// Octahedron faces split into resolution^2 lattice triangles. Vertices are
// returned as unit vectors; `map` places them on the target surface.
template <typename Map>
FlatMesh subdivided_octahedron(int n, Map map) {
  FlatMesh mesh;
  std::map<std::array<int, 3>, int> index;  // lattice point (|x|+|y|+|z| = n)
  auto vertex = [&](const std::array<int, 3>& key) {
    auto [it, inserted] = index.try_emplace(key, static_cast<int>(mesh.vertices.size()));
    if (inserted) {
      const Vec3 u = Vec3(key[0], key[1], key[2]).normalized();
      mesh.vertices.push_back(map(u));
    }
    return it->second;
  };

  for (int sz : {1, -1}) {
    for (int sy : {1, -1}) {
      for (int sx : {1, -1}) {
        std::array<std::array<int, 3>, 3> corner{{{sx, 0, 0}, {0, sy, 0}, {0, 0, sz}}};
        if (sx * sy * sz < 0) std::swap(corner[1], corner[2]);
        auto lattice = [&](int i, int j) {
          std::array<int, 3> key{};
          for (int d = 0; d < 3; ++d)
            key[d] = (n - i - j) * corner[0][d] + i * corner[1][d] + j * corner[2][d];
          return vertex(key);
        };
        for (int i = 0; i < n; ++i) {
          for (int j = 0; i + j < n; ++j) {
            mesh.faces.push_back({lattice(i, j), lattice(i + 1, j), lattice(i, j + 1)});
            if (i + j + 1 < n)
              mesh.faces.push_back(
                  {lattice(i + 1, j), lattice(i + 1, j + 1), lattice(i, j + 1)});
          }
        }
      }
    }
  }
  return mesh;
}

FlatMesh structured_torus(double R, double r, int res) {
  const int n = 4 * res;
  FlatMesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(n) * n);
  // i runs along the tube angle theta, j along the azimuth phi
  for (int i = 0; i < n; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / n;
    for (int j = 0; j < n; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / n;
      const double rho = R + r * std::cos(theta);
      mesh.vertices.emplace_back(rho * std::cos(phi), rho * std::sin(phi),
                                 r * std::sin(theta));
    }
  }
  auto id = [n](int i, int j) { return ((i % n) * n) + (j % n); };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1),
                v01 = id(i, j + 1);
      // outward cyclic order is v00, v01, v11, v10; diagonals alternate
      if ((i + j) % 2 == 0) {
        mesh.faces.push_back({v00, v01, v11});
        mesh.faces.push_back({v00, v11, v10});
      } else {
        mesh.faces.push_back({v00, v01, v10});
        mesh.faces.push_back({v01, v11, v10});
      }
    }
  }
  return mesh;
}

}  // namespace

BaseKind parse_base_kind(std::string_view name) {
  if (name == "octa_sphere") return BaseKind::octa_sphere;
  if (name == "struct_torus") return BaseKind::struct_torus;
  if (name == "scaled_ellipsoid") return BaseKind::scaled_ellipsoid;
  throw InvalidArgument("unknown mesh kind '" + std::string(name) +
                        "' (expected octa_sphere, struct_torus or scaled_ellipsoid)");
}

std::string_view to_string(BaseKind kind) {
  switch (kind) {
    case BaseKind::octa_sphere: return "octa_sphere";
    case BaseKind::struct_torus: return "struct_torus";
    case BaseKind::scaled_ellipsoid: return "scaled_ellipsoid";
  }
  return "?";
}

FlatMesh generate_base(const ImplicitSurface& surface, BaseKind kind,
                       int resolution) {
  if (resolution < 1) throw InvalidArgument("resolution must be >= 1");
  const Shape shape = surface.shape();
  switch (kind) {
    case BaseKind::octa_sphere: {
      if (shape != Shape::sphere)
        throw TopologyMismatch("octa_sphere requires a sphere surface");
      const double R = surface.param("R");
      return subdivided_octahedron(resolution, [R](const Vec3& u) { return Vec3(R * u); });
    }
    case BaseKind::struct_torus:
      if (shape != Shape::torus)
        throw TopologyMismatch("struct_torus requires a torus surface");
      return structured_torus(surface.param("R"), surface.param("r"), resolution);
    case BaseKind::scaled_ellipsoid: {
      if (shape != Shape::ellipsoid && shape != Shape::sphere)
        throw TopologyMismatch("scaled_ellipsoid requires an ellipsoid or sphere surface");
      Vec3 axes;
      if (shape == Shape::sphere) {
        axes.setConstant(surface.param("R"));
      } else {
        axes = {surface.param("a"), surface.param("b"), surface.param("c")};
      }
      return subdivided_octahedron(
          resolution, [axes](const Vec3& u) { return Vec3(axes.cwiseProduct(u)); });
    }
  }
  throw InvalidArgument("unhandled mesh kind");
}

FlatMesh bisect(const FlatMesh& mesh) {
  FlatMesh out;
  out.level = mesh.level + 1;
  out.vertices = mesh.vertices;
  out.faces.reserve(mesh.faces.size() * 4);
  out.parent_face.reserve(mesh.faces.size() * 4);

  std::unordered_map<std::uint64_t, int> midpoint;
  midpoint.reserve(mesh.faces.size() * 2);
  auto mid = [&](int a, int b) {
    auto [it, inserted] =
        midpoint.try_emplace(edge_key(a, b), static_cast<int>(out.vertices.size()));
    if (inserted) out.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    return it->second;
  };

  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto [a, b, c] = mesh.faces[f];
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    for (const Face& child : {Face{a, ab, ca}, Face{ab, b, bc}, Face{ca, bc, c},
                              Face{ab, bc, ca}}) {
      out.faces.push_back(child);
      out.parent_face.push_back(static_cast<int>(f));
    }
  }
  return out;
}

FlatMesh project_vertices(const FlatMesh& mesh, const ImplicitSurface& surface) {
  FlatMesh out = mesh;
  for (auto& v : out.vertices) v = project(surface, v).point;
  return out;
}

double triangle_diameter(const std::array<Vec3, 3>& tri) {
  return std::max({(tri[0] - tri[1]).norm(), (tri[1] - tri[2]).norm(),
                   (tri[2] - tri[0]).norm()});
}

double max_diameter(const FlatMesh& mesh) {
  double h = 0.0;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f)
    h = std::max(h, triangle_diameter(mesh.triangle(f)));
  return h;
}

std::size_t edge_count(const FlatMesh& mesh) {
  std::unordered_map<std::uint64_t, int> edges;
  for (const auto& t : mesh.faces)
    for (int e = 0; e < 3; ++e) ++edges[edge_key(t[e], t[(e + 1) % 3])];
  return edges.size();
}

long euler_characteristic(const FlatMesh& mesh) {
  return static_cast<long>(mesh.vertices.size()) -
         static_cast<long>(edge_count(mesh)) + static_cast<long>(mesh.faces.size());
}

bool is_closed_conforming(const FlatMesh& mesh) {
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : mesh.faces) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      if (a == b) return false;
      ++directed[{a, b}];
    }
  }
  for (const auto& [edge, count] : directed) {
    if (count != 1) return false;
    auto twin = directed.find({edge.second, edge.first});
    if (twin == directed.end() || twin->second != 1) return false;
  }
  return true;
}

MeshStats symmetry_census(const FlatMesh& mesh) {
  MeshStats stats;
  stats.n_faces = mesh.faces.size();
  stats.h = max_diameter(mesh);
  const double tol = 1e-12 * stats.h;

  std::vector<std::vector<int>> incident(mesh.vertices.size());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f)
    for (int v : mesh.faces[f]) incident[v].push_back(static_cast<int>(f));

  auto close = [tol](const Vec3& p, const Vec3& q) { return (p - q).norm() <= tol; };
  // g is the point reflection of f through their common vertex v
  auto reflected = [&](int f, int g, int v) {
    const Vec3& x1 = mesh.vertices[v];
    std::array<Vec3, 2> mine, theirs;
    int m = 0, n = 0;
    for (int u : mesh.faces[f])
      if (u != v) mine[m++] = mesh.vertices[u];
    for (int u : mesh.faces[g])
      if (u != v) theirs[n++] = mesh.vertices[u];
    if (m != 2 || n != 2) return false;
    const Vec3 r0 = 2.0 * x1 - mine[0], r1 = 2.0 * x1 - mine[1];
    return (close(r0, theirs[0]) && close(r1, theirs[1])) ||
           (close(r0, theirs[1]) && close(r1, theirs[0]));
  };

  // Candidate pairs form a bipartite graph (an odd cycle of point reflections
  // would map a triangle onto its own point reflection), so a maximum
  // matching gives the largest set of disjoint symmetric pairs.
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  Graph graph(mesh.faces.size());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f)
    for (int v : mesh.faces[f])
      for (int g : incident[v])
        if (g > static_cast<int>(f) && reflected(static_cast<int>(f), g, v))
          boost::add_edge(f, static_cast<std::size_t>(g), graph);
  std::vector<Graph::vertex_descriptor> mate(mesh.faces.size());
  boost::edmonds_maximum_cardinality_matching(graph, &mate[0]);
  stats.n_symmetric_pairs = boost::matching_size(graph, &mate[0]);
  stats.n_unpaired = stats.n_faces - 2 * stats.n_symmetric_pairs;
  return stats;
}

}  // namespace surfquad
