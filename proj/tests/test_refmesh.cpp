#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "surfquad/errors.hpp"
#include "surfquad/refmesh.hpp"

#include <cmath>
#include <functional>
#include <sstream>

using namespace surfquad;

namespace {

FlatMesh single_triangle() {
  FlatMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.3, 0.8, 0)};
  m.faces = {{0, 1, 2}};
  return m;
}

FlatMesh refine(FlatMesh m, int levels) {
  for (int i = 0; i < levels; ++i) m = bisect(m);
  return m;
}

// Largest number of disjoint symmetric pairs by exhaustive search, with the
// symmetry relation tested directly on coordinates.
std::size_t brute_force_pairs(const FlatMesh& m) {
  const std::size_t n = m.faces.size();
  const double tol = 1e-12 * max_diameter(m);
  auto symmetric = [&](std::size_t f, std::size_t g) {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const Vec3 v = m.vertices[m.faces[f][a]];
        if ((m.vertices[m.faces[g][b]] - v).norm() > tol) continue;
        const Vec3 p1 = m.vertices[m.faces[f][(a + 1) % 3]] - v;
        const Vec3 p2 = m.vertices[m.faces[f][(a + 2) % 3]] - v;
        const Vec3 q1 = m.vertices[m.faces[g][(b + 1) % 3]] - v;
        const Vec3 q2 = m.vertices[m.faces[g][(b + 2) % 3]] - v;
        if (((p1 + q1).norm() < tol && (p2 + q2).norm() < tol) ||
            ((p1 + q2).norm() < tol && (p2 + q1).norm() < tol))
          return true;
      }
    return false;
  };
  std::vector<char> used(n, 0);
  std::function<std::size_t(std::size_t)> best = [&](std::size_t f) -> std::size_t {
    while (f < n && used[f]) ++f;
    if (f >= n) return 0;
    used[f] = 1;
    std::size_t result = best(f + 1);  // f stays unpaired
    for (std::size_t g = f + 1; g < n; ++g) {
      if (used[g] || !symmetric(f, g)) continue;
      used[g] = 1;
      result = std::max(result, 1 + best(f + 1));
      used[g] = 0;
    }
    used[f] = 0;
    return result;
  };
  return best(0);
}

}  // namespace

TEST_CASE("base meshes") {
  const auto s = ImplicitSurface::sphere(1.0);
  const FlatMesh octa = generate_base(s, BaseKind::octa_sphere, 1);
  CHECK(octa.vertices.size() == 6);
  CHECK(octa.faces.size() == 8);
  CHECK(euler_characteristic(octa) == 2);
  CHECK(is_closed_conforming(octa));

  const auto t = ImplicitSurface::torus(2.0, 1.0);
  const FlatMesh tor = generate_base(t, BaseKind::struct_torus, 1);
  CHECK(tor.vertices.size() == 16);
  CHECK(tor.faces.size() == 32);
  CHECK(euler_characteristic(tor) == 0);
  CHECK(is_closed_conforming(tor));

  const auto e = ImplicitSurface::ellipsoid(2.0, 1.0, 1.0);
  const FlatMesh ell = generate_base(e, BaseKind::scaled_ellipsoid, 1);
  CHECK(ell.faces.size() == 8);
  bool found = false;
  for (const Vec3& v : ell.vertices) found |= (v - Vec3(2, 0, 0)).norm() == 0.0;
  CHECK(found);
}

TEST_CASE("base mesh vertices lie on the surface and faces point outward") {
  const ImplicitSurface surfaces[] = {ImplicitSurface::sphere(1.0), ImplicitSurface::torus(2.0, 1.0),
                                      ImplicitSurface::ellipsoid(1.0, 1.0, 0.6)};
  const BaseKind kinds[] = {BaseKind::octa_sphere, BaseKind::struct_torus, BaseKind::scaled_ellipsoid};
  for (int i = 0; i < 3; ++i) {
    for (int res : {1, 2, 3, 5}) {
      const FlatMesh m = generate_base(surfaces[i], kinds[i], res);
      CHECK(is_closed_conforming(m));
      CHECK(euler_characteristic(m) == surfaces[i].euler_characteristic());
      double worst = 0.0;
      for (const Vec3& v : m.vertices)
        worst = std::max(worst, std::abs(surfaces[i].phi(v)) / surfaces[i].grad_phi(v).norm());
      CHECK(worst <= 1e-12);
      for (std::size_t f = 0; f < m.faces.size(); ++f) {
        const auto tri = m.triangle(f);
        const Vec3 n = (tri[1] - tri[0]).cross(tri[2] - tri[0]);
        Vec3 g = Vec3::Zero();
        for (const Vec3& v : tri) g += surfaces[i].grad_phi(v);
        REQUIRE(n.dot(g) > 0.0);
      }
    }
  }
  CHECK(generate_base(surfaces[1], BaseKind::struct_torus, 3).faces.size() == 2 * 12 * 12);
}

TEST_CASE("kind must match the topology") {
  CHECK_THROWS_AS(generate_base(ImplicitSurface::torus(2, 1), BaseKind::octa_sphere, 1),
                  TopologyMismatch);
  CHECK_THROWS_AS(generate_base(ImplicitSurface::sphere(1), BaseKind::struct_torus, 1),
                  TopologyMismatch);
  CHECK_THROWS_AS(generate_base(ImplicitSurface::sphere(1), BaseKind::octa_sphere, 0),
                  InvalidArgument);
  CHECK(parse_base_kind("struct_torus") == BaseKind::struct_torus);
  CHECK(to_string(BaseKind::scaled_ellipsoid) == "scaled_ellipsoid");
  CHECK_THROWS_AS(parse_base_kind("icosahedron"), InvalidArgument);
}

TEST_CASE("bisection of one triangle") {
  const FlatMesh m = single_triangle();
  const FlatMesh c = bisect(m);
  REQUIRE(c.faces.size() == 4);
  const double h = triangle_diameter(m.triangle(0));
  for (std::size_t f = 0; f < 4; ++f)
    CHECK(triangle_diameter(c.triangle(f)) == doctest::Approx(h / 2).epsilon(1e-15));
  const auto& x = m.vertices;
  const auto corner = c.triangle(0);
  CHECK(corner[0] == x[0]);
  CHECK(corner[1] == 0.5 * (x[0] + x[1]));
  CHECK(corner[2] == 0.5 * (x[0] + x[2]));
  CHECK(c.level == 1);
  CHECK(c.parent_face == std::vector<int>{0, 0, 0, 0});
}

TEST_CASE("repeated bisection of the octahedron") {
  const auto s = ImplicitSurface::sphere(1.0);
  FlatMesh m = generate_base(s, BaseKind::octa_sphere, 1);
  double h = max_diameter(m);
  for (int level = 1; level <= 4; ++level) {
    m = bisect(m);
    CHECK(m.faces.size() == 8u << (2 * level));
    CHECK(is_closed_conforming(m));
    CHECK(euler_characteristic(m) == 2);
    CHECK(max_diameter(m) == doctest::Approx(h / 2).epsilon(1e-15));
    h = max_diameter(m);
  }
  // fine vertices stay on the flat macro faces
  double off = 0.0;
  for (const Vec3& v : m.vertices) off = std::max(off, std::abs(v.lpNorm<1>() - 1.0));
  CHECK(off < 1e-15);
  const FlatMesh p = project_vertices(m, s);
  for (const Vec3& v : p.vertices) REQUIRE(std::abs(v.norm() - 1.0) < 1e-15);
}

TEST_CASE("diameters") {
  CHECK(triangle_diameter({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(triangle_diameter({Vec3(1, 2, 3), Vec3(1, 2, 3), Vec3(1, 2, 3)}) == 0.0);
}

TEST_CASE("symmetry census agrees with exhaustive pairing") {
  for (int level = 0; level <= 2; ++level) {
    const FlatMesh m = refine(single_triangle(), level);
    const MeshStats s = symmetry_census(m);
    CHECK(s.n_symmetric_pairs == brute_force_pairs(m));
    CHECK(s.n_unpaired == s.n_faces - 2 * s.n_symmetric_pairs);
  }
  // One bisection: the corner children share an edge with the centre child,
  // never a single opposite vertex, so there is nothing to pair.
  CHECK(symmetry_census(refine(single_triangle(), 1)).n_symmetric_pairs == 0);
  CHECK(symmetry_census(refine(single_triangle(), 2)).n_symmetric_pairs == 4);
}

TEST_CASE("unpaired triangles grow like 2^m on one macro triangle") {
  for (int m = 1; m <= 5; ++m) {
    const MeshStats s = symmetry_census(refine(single_triangle(), m));
    CHECK(s.n_faces == (1u << (2 * m)));
    // up-minus-down count of the bisection lattice is a lower bound
    CHECK(s.n_unpaired >= (1u << m));
    CHECK(s.n_unpaired <= 2 * (1u << m));
  }
}

TEST_CASE("unpaired density decays like 1/sqrt(n) on the octahedron") {
  const FlatMesh base = generate_base(ImplicitSurface::sphere(1), BaseKind::octa_sphere, 1);
  const MeshStats s0 = symmetry_census(base);
  CHECK(s0.n_symmetric_pairs == 0);
  CHECK(s0.n_unpaired == 8);
  const double C = 2.0 * std::sqrt(8.0);  // 2 sqrt(F0)
  FlatMesh m = base;
  for (int level = 1; level <= 5; ++level) {
    m = bisect(m);
    const MeshStats s = symmetry_census(m);
    const double n = static_cast<double>(s.n_faces);
    if (level >= 3) CHECK(s.n_unpaired / n <= C / std::sqrt(n) * (1 + 1e-12));
    if (level <= 1) CHECK(s.n_unpaired >= 2 * s.n_symmetric_pairs);
    if (level >= 3) CHECK(s.n_unpaired < 2 * s.n_symmetric_pairs);
  }
}

TEST_CASE("torus checkerboard pairs quads at level 0") {
  const FlatMesh m = generate_base(ImplicitSurface::torus(2, 1), BaseKind::struct_torus, 1);
  const MeshStats s = symmetry_census(m);
  CHECK(s.n_faces == 32);
  CHECK(s.n_symmetric_pairs == brute_force_pairs(m));
}

TEST_CASE("OFF round trip") {
  const FlatMesh m = bisect(generate_base(ImplicitSurface::sphere(1), BaseKind::octa_sphere, 2));
  std::stringstream ss;
  write_off(m, ss);
  const FlatMesh r = read_off(ss);
  CHECK(r.vertices == m.vertices);
  CHECK(r.faces == m.faces);
}

TEST_CASE("OFF parse errors") {
  std::istringstream quad("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
  CHECK_THROWS_AS(read_off(quad), NonTriangleFace);

  std::istringstream empty("");
  try {
    read_off(empty);
    FAIL("empty file accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }

  std::istringstream header("OFX\n3 1 0\n");
  CHECK_THROWS_AS(read_off(header), ParseError);

  std::istringstream range("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n");
  CHECK_THROWS_AS(read_off(range), ParseError);

  std::istringstream truncated("OFF\n3 1 0\n0 0 0\n1 0 0\n");
  try {
    read_off(truncated);
    FAIL("truncated file accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
  }

  std::istringstream comments("# made by hand\nOFF\n\n3 1 0\n0 0 0  # origin\n1 0 0\n0 1 0\n3 0 1 2\n");
  CHECK(read_off(comments).faces.size() == 1);
}
