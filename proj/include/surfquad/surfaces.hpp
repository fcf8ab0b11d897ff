#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace surfquad {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class Shape { sphere, torus, ellipsoid, level_set };

/// User-supplied level set. Only phi, grad and the Euler characteristic are
/// mandatory; the Hessian falls back to central differences of grad and the
/// Gaussian curvature to the level-set formula built from grad and Hessian.
struct LevelSet {
  std::function<double(const Vec3&)> phi;
  std::function<Vec3(const Vec3&)> grad;
  std::function<Mat3(const Vec3&)> hessian;
  std::function<double(const Vec3&)> curvature;
  int euler_characteristic = 2;
  double length_scale = 1.0;
  double tube_radius = std::numeric_limits<double>::infinity();
  std::string name = "level_set";
};

struct ProjectionResult {
  Vec3 point = Vec3::Zero();
  double distance = 0.0;  // signed, positive outside
  int iterations = 0;
  double residual = 0.0;  // length units
};

struct ProjectOptions {
  double tol = 1e-13;
  int max_iter = 50;
  /// Ignore an available closed-form projection and run the Newton solver.
  bool force_newton = false;
};

/// Closed smooth surface given as the zero set of phi. Immutable.
class ImplicitSurface {
 public:
  static ImplicitSurface sphere(double R);
  /// Requires 0 < r < R.
  static ImplicitSurface torus(double R, double r);
  static ImplicitSurface ellipsoid(double a, double b, double c);
  static ImplicitSurface level_set(LevelSet desc);

  /// Parses `sphere:R=1`, `torus:R=2,r=1`, `ellipsoid:a=1,b=1,c=0.6`.
  /// Throws InvalidArgument on unknown shapes or keys, missing or
  /// non-finite values and violated parameter constraints.
  static ImplicitSurface parse(std::string_view spec);

  Shape shape() const noexcept { return shape_; }
  double param(const std::string& key) const;
  const std::map<std::string, double>& params() const noexcept {
    return params_;
  }
  int euler_characteristic() const noexcept { return euler_; }
  /// Characteristic length (R, R + r, max(a,b,c)).
  double length_scale() const noexcept { return length_scale_; }
  /// Largest inward distance at which projection is attempted (the smallest
  /// radius of curvature for the built-in shapes).
  double tube_radius() const noexcept { return tube_radius_; }
  /// Canonical spec string, parseable by parse().
  std::string spec() const;

  double phi(const Vec3& x) const;
  Vec3 grad_phi(const Vec3& x) const;
  Mat3 hessian_phi(const Vec3& x) const;
  /// Typical magnitude of phi terms near the surface; scales phi tolerances.
  double phi_scale() const noexcept { return phi_scale_; }

  bool has_analytic_projection() const noexcept {
    return shape_ == Shape::sphere || shape_ == Shape::torus;
  }
  /// Closed-form closest point; nullopt when the surface has none.
  /// Throws OutsideTube at points where the closest point is not unique.
  std::optional<ProjectionResult> analytic_project(const Vec3& x) const;

  double gauss_curvature(const Vec3& p) const;

 private:
  ImplicitSurface() = default;

  Shape shape_ = Shape::sphere;
  std::map<std::string, double> params_;
  int euler_ = 2;
  double length_scale_ = 1.0;
  double tube_radius_ = 1.0;
  double phi_scale_ = 1.0;
  std::shared_ptr<const LevelSet> custom_;
};

/// Closest point on the surface to x.
ProjectionResult project(const ImplicitSurface& surface, const Vec3& x,
                         const ProjectOptions& options = {});

/// Analytic Gaussian curvature; for the torus cos(theta) is recovered from
/// the distance to the axis. Throws DegeneratePoint on the torus axis.
double gauss_curvature_at(const ImplicitSurface& surface, const Vec3& p);

/// Closed-form area for spheres and tori, nullopt otherwise.
std::optional<double> surface_area_exact(const ImplicitSurface& surface);

}  // namespace surfquad
