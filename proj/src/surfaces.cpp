#include "surfquad/surfaces.hpp"

#include "surfquad/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace surfquad {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw InvalidArgument(std::string(what) + " must be a positive finite number");
}

double parse_double(std::string_view text, std::string_view key) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw InvalidArgument("invalid value for '" + std::string(key) + "': '" +
                          std::string(text) + "'");
  return v;
}

// Gaussian curvature of a level set: grad^T adj(H) grad / |grad|^4.
double level_set_curvature(const Vec3& g, const Mat3& h) {
  Mat3 adj;
  adj(0, 0) = h(1, 1) * h(2, 2) - h(1, 2) * h(2, 1);
  adj(0, 1) = h(0, 2) * h(2, 1) - h(0, 1) * h(2, 2);
  adj(0, 2) = h(0, 1) * h(1, 2) - h(0, 2) * h(1, 1);
  adj(1, 0) = h(1, 2) * h(2, 0) - h(1, 0) * h(2, 2);
  adj(1, 1) = h(0, 0) * h(2, 2) - h(0, 2) * h(2, 0);
  adj(1, 2) = h(0, 2) * h(1, 0) - h(0, 0) * h(1, 2);
  adj(2, 0) = h(1, 0) * h(2, 1) - h(1, 1) * h(2, 0);
  adj(2, 1) = h(0, 1) * h(2, 0) - h(0, 0) * h(2, 1);
  adj(2, 2) = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
  const double g2 = g.squaredNorm();
  return g.dot(adj * g) / (g2 * g2);
}

}  // namespace

ImplicitSurface ImplicitSurface::sphere(double R) {
  require_positive(R, "sphere radius R");
  ImplicitSurface s;
  s.shape_ = Shape::sphere;
  s.params_ = {{"R", R}};
  s.euler_ = 2;
  s.length_scale_ = R;
  s.tube_radius_ = R;
  s.phi_scale_ = R * R;
  return s;
}

ImplicitSurface ImplicitSurface::torus(double R, double r) {
  require_positive(R, "torus radius R");
  require_positive(r, "torus radius r");
  if (!(r < R)) throw InvalidArgument("torus requires 0 < r < R");
  ImplicitSurface s;
  s.shape_ = Shape::torus;
  s.params_ = {{"R", R}, {"r", r}};
  s.euler_ = 0;
  s.length_scale_ = R + r;
  s.tube_radius_ = r;
  s.phi_scale_ = 4.0 * R * R * (R + r) * (R + r);
  return s;
}

ImplicitSurface ImplicitSurface::ellipsoid(double a, double b, double c) {
  require_positive(a, "ellipsoid semi-axis a");
  require_positive(b, "ellipsoid semi-axis b");
  require_positive(c, "ellipsoid semi-axis c");
  ImplicitSurface s;
  s.shape_ = Shape::ellipsoid;
  s.params_ = {{"a", a}, {"b", b}, {"c", c}};
  s.euler_ = 2;
  const double lo = std::min({a, b, c});
  const double hi = std::max({a, b, c});
  s.length_scale_ = hi;
  // smallest principal radius of curvature
  s.tube_radius_ = lo * lo / hi;
  s.phi_scale_ = 1.0;
  return s;
}

ImplicitSurface ImplicitSurface::level_set(LevelSet desc) {
  if (!desc.phi || !desc.grad)
    throw InvalidArgument("level set needs both phi and grad");
  require_positive(desc.length_scale, "level set length scale");
  ImplicitSurface s;
  s.shape_ = Shape::level_set;
  s.euler_ = desc.euler_characteristic;
  s.length_scale_ = desc.length_scale;
  s.tube_radius_ = desc.tube_radius;
  s.phi_scale_ = 1.0;
  s.custom_ = std::make_shared<const LevelSet>(std::move(desc));
  return s;
}

ImplicitSurface ImplicitSurface::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string_view::npos) {
    std::string_view rest = spec.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0)
        throw InvalidArgument("expected key=value in surface spec, got '" +
                              std::string(item) + "'");
      const std::string key(item.substr(0, eq));
      if (kv.count(key))
        throw InvalidArgument("duplicate key '" + key + "' in surface spec");
      kv[key] = parse_double(item.substr(eq + 1), key);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
      if (rest.empty()) throw InvalidArgument("trailing comma in surface spec");
    }
  }

  auto take = [&](const std::set<std::string>& allowed) {
    for (const auto& [k, v] : kv)
      if (!allowed.count(k))
        throw InvalidArgument("unknown key '" + k + "' for surface '" +
                              std::string(name) + "'");
    for (const auto& k : allowed)
      if (!kv.count(k))
        throw InvalidArgument("missing key '" + k + "' for surface '" +
                              std::string(name) + "'");
  };

  if (name == "sphere") {
    take({"R"});
    return sphere(kv["R"]);
  }
  if (name == "torus") {
    take({"R", "r"});
    return torus(kv["R"], kv["r"]);
  }
  if (name == "ellipsoid") {
    take({"a", "b", "c"});
    return ellipsoid(kv["a"], kv["b"], kv["c"]);
  }
  throw InvalidArgument("unknown surface '" + std::string(name) +
                        "' (expected sphere, torus or ellipsoid)");
}

double ImplicitSurface::param(const std::string& key) const {
  auto it = params_.find(key);
  if (it == params_.end()) throw InvalidArgument("surface has no parameter " + key);
  return it->second;
}

std::string ImplicitSurface::spec() const {
  auto num = [](double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
  };
  switch (shape_) {
    case Shape::sphere:
      return "sphere:R=" + num(param("R"));
    case Shape::torus:
      return "torus:R=" + num(param("R")) + ",r=" + num(param("r"));
    case Shape::ellipsoid:
      return "ellipsoid:a=" + num(param("a")) + ",b=" + num(param("b")) +
             ",c=" + num(param("c"));
    case Shape::level_set:
      return custom_->name;
  }
  return {};
}

double ImplicitSurface::phi(const Vec3& x) const {
  switch (shape_) {
    case Shape::sphere: {
      const double R = params_.at("R");
      return x.squaredNorm() - R * R;
    }
    case Shape::torus: {
      const double R = params_.at("R"), r = params_.at("r");
      const double q = x.squaredNorm() + R * R - r * r;
      return q * q - 4.0 * R * R * (x.x() * x.x() + x.y() * x.y());
    }
    case Shape::ellipsoid: {
      const double a = params_.at("a"), b = params_.at("b"), c = params_.at("c");
      return x.x() * x.x() / (a * a) + x.y() * x.y() / (b * b) +
             x.z() * x.z() / (c * c) - 1.0;
    }
    case Shape::level_set:
      return custom_->phi(x);
  }
  return 0.0;
}

Vec3 ImplicitSurface::grad_phi(const Vec3& x) const {
  switch (shape_) {
    case Shape::sphere:
      return 2.0 * x;
    case Shape::torus: {
      const double R = params_.at("R"), r = params_.at("r");
      const double q = x.squaredNorm() + R * R - r * r;
      return 4.0 * q * x - 8.0 * R * R * Vec3(x.x(), x.y(), 0.0);
    }
    case Shape::ellipsoid: {
      const double a = params_.at("a"), b = params_.at("b"), c = params_.at("c");
      return {2.0 * x.x() / (a * a), 2.0 * x.y() / (b * b), 2.0 * x.z() / (c * c)};
    }
    case Shape::level_set:
      return custom_->grad(x);
  }
  return Vec3::Zero();
}

Mat3 ImplicitSurface::hessian_phi(const Vec3& x) const {
  switch (shape_) {
    case Shape::sphere:
      return 2.0 * Mat3::Identity();
    case Shape::torus: {
      const double R = params_.at("R"), r = params_.at("r");
      const double q = x.squaredNorm() + R * R - r * r;
      Mat3 h = 4.0 * q * Mat3::Identity() + 8.0 * x * x.transpose();
      h(0, 0) -= 8.0 * R * R;
      h(1, 1) -= 8.0 * R * R;
      return h;
    }
    case Shape::ellipsoid: {
      const double a = params_.at("a"), b = params_.at("b"), c = params_.at("c");
      return Vec3(2.0 / (a * a), 2.0 / (b * b), 2.0 / (c * c)).asDiagonal();
    }
    case Shape::level_set: {
      if (custom_->hessian) return custom_->hessian(x);
      const double step = 1e-5 * length_scale_;
      Mat3 h;
      for (int j = 0; j < 3; ++j) {
        Vec3 e = Vec3::Zero();
        e[j] = step;
        h.col(j) = (custom_->grad(x + e) - custom_->grad(x - e)) / (2.0 * step);
      }
      return 0.5 * (h + h.transpose());
    }
  }
  return Mat3::Zero();
}

std::optional<ProjectionResult> ImplicitSurface::analytic_project(
    const Vec3& x) const {
  ProjectionResult out;
  if (shape_ == Shape::sphere) {
    const double R = params_.at("R");
    const double n = x.norm();
    if (n == 0.0) throw OutsideTube("sphere centre has no unique closest point");
    out.point = (R / n) * x;
    out.distance = n - R;
    return out;
  }
  if (shape_ == Shape::torus) {
    const double R = params_.at("R"), r = params_.at("r");
    const double rho = std::hypot(x.x(), x.y());
    if (rho == 0.0) throw OutsideTube("torus axis has no unique closest point");
    const Vec3 core(R * x.x() / rho, R * x.y() / rho, 0.0);
    const Vec3 v = x - core;
    const double dv = v.norm();
    if (dv == 0.0) throw OutsideTube("torus core circle has no unique closest point");
    out.point = core + (r / dv) * v;
    out.distance = dv - r;
    return out;
  }
  return std::nullopt;
}

double ImplicitSurface::gauss_curvature(const Vec3& p) const {
  switch (shape_) {
    case Shape::sphere: {
      const double R = params_.at("R");
      return 1.0 / (R * R);
    }
    case Shape::torus: {
      const double R = params_.at("R"), r = params_.at("r");
      const double rho = std::hypot(p.x(), p.y());
      if (rho == 0.0) throw DegeneratePoint("torus curvature undefined on the axis");
      const double cos_theta = std::clamp((rho - R) / r, -1.0, 1.0);
      return cos_theta / (r * (R + r * cos_theta));
    }
    case Shape::ellipsoid: {
      const double a = params_.at("a"), b = params_.at("b"), c = params_.at("c");
      const double abc = a * b * c;
      const double s = p.x() * p.x() / (a * a * a * a) +
                       p.y() * p.y() / (b * b * b * b) +
                       p.z() * p.z() / (c * c * c * c);
      return 1.0 / (abc * abc * s * s);
    }
    case Shape::level_set: {
      if (custom_->curvature) return custom_->curvature(p);
      const Vec3 g = grad_phi(p);
      if (g.squaredNorm() == 0.0) throw DegeneratePoint("vanishing gradient");
      return level_set_curvature(g, hessian_phi(p));
    }
  }
  return 0.0;
}

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

// Stationarity residual of min |y - x| subject to phi(y) = 0, in length units.
double stationarity_residual(const ImplicitSurface& s, const Vec3& x,
                             const Vec3& y, double lambda) {
  const Vec3 g = s.grad_phi(y);
  const double gn = g.norm();
  const double r1 = (y - x + lambda * g).norm();
  const double r2 = std::abs(s.phi(y)) / gn;
  return std::max(r1, r2);
}

// Sphere and torus know their exact distance, and the closed form already
// rejects the medial axis. Outside a convex surface every point has a unique
// closest point. Elsewhere |phi|/|grad phi| is compared with tube_radius().
void check_tube(const ImplicitSurface& s, const Vec3& x) {
  if (s.shape() == Shape::sphere || s.shape() == Shape::torus) {
    if (s.analytic_project(x)->distance <= -s.tube_radius())
      throw OutsideTube("query point is outside the projection tube");
    return;
  }
  const double phi = s.phi(x);
  if (s.shape() == Shape::ellipsoid && phi >= 0.0) return;
  const double g = s.grad_phi(x).norm();
  if (g == 0.0) throw OutsideTube("vanishing gradient at query point");
  if (std::abs(phi) / g > s.tube_radius())
    throw OutsideTube("query point is outside the projection tube");
}

ProjectionResult newton_project(const ImplicitSurface& s, const Vec3& x,
                                const ProjectOptions& opt) {
  check_tube(s, x);

  Vec3 y = x;
  for (int i = 0; i < 5; ++i) {
    const Vec3 g = s.grad_phi(y);
    const double g2 = g.squaredNorm();
    if (g2 == 0.0) throw OutsideTube("vanishing gradient during seeding");
    y -= s.phi(y) * g / g2;
  }
  Vec3 g = s.grad_phi(y);
  double lambda = -(y - x).dot(g) / g.squaredNorm();
  double res = stationarity_residual(s, x, y, lambda);

  int it = 0;
  while (res > opt.tol) {
    if (it >= opt.max_iter) {
      throw NoConvergence(it, res,
                          "closest-point Newton did not converge (residual " +
                              sci(res) + " after " +
                              std::to_string(it) + " iterations)");
    }
    ++it;
    g = s.grad_phi(y);
    Eigen::Matrix4d jac = Eigen::Matrix4d::Zero();
    jac.topLeftCorner<3, 3>() = Mat3::Identity() + lambda * s.hessian_phi(y);
    jac.block<3, 1>(0, 3) = g;
    jac.block<1, 3>(3, 0) = g.transpose();
    Eigen::Vector4d rhs;
    rhs.head<3>() = -(y - x + lambda * g);
    rhs[3] = -s.phi(y);
    const Eigen::Vector4d step = jac.fullPivLu().solve(rhs);

    double t = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
      const Vec3 y_try = y + t * step.head<3>();
      const double l_try = lambda + t * step[3];
      const double r_try = stationarity_residual(s, x, y_try, l_try);
      if (r_try < res) {
        y = y_try;
        lambda = l_try;
        res = r_try;
        improved = true;
        break;
      }
    }
    if (!improved) {
      throw NoConvergence(it, res,
                          "closest-point Newton stalled at residual " + sci(res));
    }
  }

  ProjectionResult out;
  out.point = y;
  out.distance = (s.phi(x) >= 0.0 ? 1.0 : -1.0) * (x - y).norm();
  out.iterations = it;
  out.residual = res;
  return out;
}

}  // namespace

ProjectionResult project(const ImplicitSurface& surface, const Vec3& x,
                         const ProjectOptions& options) {
  if (!(options.tol > 0.0)) throw InvalidArgument("projection tol must be > 0");
  if (!x.allFinite()) throw OutsideTube("non-finite query point");
  if (!options.force_newton) {
    if (auto r = surface.analytic_project(x)) return *r;
  }
  return newton_project(surface, x, options);
}

double gauss_curvature_at(const ImplicitSurface& surface, const Vec3& p) {
  return surface.gauss_curvature(p);
}

std::optional<double> surface_area_exact(const ImplicitSurface& surface) {
  constexpr double pi = std::numbers::pi;
  switch (surface.shape()) {
    case Shape::sphere: {
      const double R = surface.param("R");
      return 4.0 * pi * R * R;
    }
    case Shape::torus:
      return 4.0 * pi * pi * surface.param("R") * surface.param("r");
    default:
      return std::nullopt;
  }
}

}  // namespace surfquad
