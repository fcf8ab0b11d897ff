#pragma once

#include "surfquad/surfaces.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

namespace surfquad {

using Face = std::array<int, 3>;

/// Indexed flat triangle mesh. Faces are counterclockwise seen from outside.
struct FlatMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  int level = 0;
  /// Per face index of the parent face at level - 1; empty at level 0.
  std::vector<int> parent_face;

  std::array<Vec3, 3> triangle(std::size_t f) const {
    const Face& t = faces[f];
    return {vertices[t[0]], vertices[t[1]], vertices[t[2]]};
  }
};

struct MeshStats {
  double h = 0.0;  // max face diameter
  std::size_t n_faces = 0;
  std::size_t n_symmetric_pairs = 0;
  std::size_t n_unpaired = 0;
};

enum class BaseKind { octa_sphere, struct_torus, scaled_ellipsoid };

BaseKind parse_base_kind(std::string_view name);
std::string_view to_string(BaseKind kind);

/// Deterministic level-0 mesh with all vertices on the surface.
/// Throws TopologyMismatch when the kind does not fit the surface.
FlatMesh generate_base(const ImplicitSurface& surface, BaseKind kind,
                       int resolution);

/// Splits every face into four through its flat edge midpoints.
FlatMesh bisect(const FlatMesh& mesh);

/// Replaces every vertex by its closest point on the surface.
FlatMesh project_vertices(const FlatMesh& mesh, const ImplicitSurface& surface);

/// Greedy pairing of faces that are point reflections of each other through
/// a shared vertex, with tolerance 1e-12 * h.
MeshStats symmetry_census(const FlatMesh& mesh);

double max_diameter(const FlatMesh& mesh);
double triangle_diameter(const std::array<Vec3, 3>& tri);
std::size_t edge_count(const FlatMesh& mesh);
long euler_characteristic(const FlatMesh& mesh);

/// Every undirected edge is shared by exactly two faces traversing it in
/// opposite directions.
bool is_closed_conforming(const FlatMesh& mesh);

// OFF I/O: "OFF", "V F 0", V lines of xyz, F lines "3 i j k".
// Reals are written with 17 significant digits.
FlatMesh read_off(std::istream& in);
FlatMesh read_off(const std::filesystem::path& path);
void write_off(const FlatMesh& mesh, std::ostream& out);
void write_off(const FlatMesh& mesh, const std::filesystem::path& path);

}  // namespace surfquad
