#include "surfquad/study.hpp"

#include "surfquad/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <numbers>

namespace surfquad {

Integrand parse_integrand(std::string_view name) {
  if (name == "one") return Integrand::one;
  if (name == "gauss_curvature") return Integrand::gauss_curvature;
  throw InvalidArgument("unknown integrand '" + std::string(name) +
                        "' (expected one or gauss_curvature)");
}

std::string_view to_string(Integrand f) {
  return f == Integrand::one ? "one" : "gauss_curvature";
}

ScalarField integrand_field(const ImplicitSurface& surface, Integrand f) {
  if (f == Integrand::one) return [](const Vec3&) { return 1.0; };
  return [surface](const Vec3& p) { return gauss_curvature_at(surface, p); };
}

double exact_target(const ImplicitSurface& surface, Integrand f) {
  if (f == Integrand::gauss_curvature)
    return 2.0 * std::numbers::pi * surface.euler_characteristic();
  if (auto area = surface_area_exact(surface)) return *area;
  throw InvalidArgument("no closed-form area for " + surface.spec());
}

double error_metric(double value, double exact) {
  return std::abs(value - exact) / std::max(1.0, std::abs(exact));
}

ConvergenceReport run_convergence(const StudyConfig& config) {
  if (config.levels < 3)
    throw InvalidArgument("a convergence study needs levels >= 3");
  ConvergenceReport report;
  report.config = config;
  report.exact = exact_target(config.surface, config.f);
  const QuadratureRule& rule = builtin_rule(config.rule_degree);
  const ScalarField f = integrand_field(config.surface, config.f);
  IntegrateOptions opt;
  opt.projection = config.projection;
  opt.threads = config.threads;

  FlatMesh mesh = generate_base(config.surface, config.kind, config.resolution);
  bool floored = false;
  for (int level = 0; level <= config.levels; ++level) {
    if (level > 0) {
      mesh = bisect(mesh);
      if (config.project_vertices) mesh = project_vertices(mesh, config.surface);
    }
    const IntegralResult r =
        integrate_surface(mesh, config.surface, f, config.k, rule, config.mode, opt);
    ConvergenceRow row;
    row.level = level;
    row.h = max_diameter(mesh);
    row.n_faces = mesh.faces.size();
    row.value = r.value;
    row.error = error_metric(r.value, report.exact);
    if (!report.rows.empty()) {
      const ConvergenceRow& prev = report.rows.back();
      row.eoc = std::log(prev.error / row.error) / std::log(2.0);
    }
    if (row.error <= kErrorFloor && !floored) {
      floored = true;
      report.warnings.push_back("error reached the round-off floor at level " +
                                std::to_string(level) + "; later rows are flagged");
    }
    row.flagged = floored;
    report.rows.push_back(row);
  }
  return report;
}

double fit_slope(std::span<const double> h, std::span<const double> error) {
  if (h.size() != error.size()) throw InvalidArgument("fit_slope: size mismatch");
  if (h.size() < 2) throw InsufficientData("fit_slope needs at least two rows");
  const auto n = static_cast<double>(h.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    sx += std::log(h[i]);
    sy += std::log(error[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dx = std::log(h[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(error[i]) - my);
  }
  if (sxx == 0.0) throw InsufficientData("fit_slope: all h are equal");
  return sxy / sxx;
}

double fit_slope(const ConvergenceReport& report, int tail) {
  std::vector<double> h, err;
  for (const auto& row : report.rows) {
    if (row.flagged || !(row.error > 0.0)) continue;
    h.push_back(row.h);
    err.push_back(row.error);
  }
  if (tail < 2 || h.size() < 2)
    throw InsufficientData("fit_slope needs at least two unflagged rows");
  const std::size_t take = std::min(h.size(), static_cast<std::size_t>(tail));
  return fit_slope(std::span(h).last(take), std::span(err).last(take));
}

RungeReport run_runge(const ImplicitSurface& surface, const FlatMesh& mesh,
                      const RungeConfig& config) {
  if (config.k_min < 1 || config.k_max > 12 || config.k_min > config.k_max)
    throw InvalidArgument("runge study needs 1 <= k_min <= k_max <= 12");
  RungeReport report;
  report.surface = surface.spec();
  report.n_faces = mesh.faces.size();
  report.exact = exact_target(surface, config.f);
  const QuadratureRule& rule = builtin_rule(config.rule_degree);
  const ScalarField f = integrand_field(surface, config.f);
  IntegrateOptions opt;
  opt.projection = config.projection;
  opt.threads = config.threads;
  for (int k = config.k_min; k <= config.k_max; ++k) {
    const IntegralResult r = integrate_surface(mesh, surface, f, k, rule, config.mode, opt);
    RungeRow row;
    row.k = k;
    row.value = r.value;
    row.error = error_metric(r.value, report.exact);
    row.cond_warning = lagrange_basis(k).ill_conditioned();
    report.rows.push_back(row);
  }
  return report;
}

std::vector<GeometricRow> chart_distance_study(const ImplicitSurface& surface,
                                               const std::array<Vec3, 3>& macro,
                                               int k, int levels, int samples) {
  if (samples < 1) throw InvalidArgument("samples must be >= 1");
  FlatMesh mesh;
  mesh.vertices.assign(macro.begin(), macro.end());
  mesh.faces.push_back({0, 1, 2});

  std::vector<Vec2> pts;
  for (int i = 0; i <= samples; ++i)
    for (int j = 0; i + j <= samples; ++j)
      pts.emplace_back(static_cast<double>(i) / samples, static_cast<double>(j) / samples);

  std::vector<GeometricRow> rows;
  for (int level = 0; level <= levels; ++level) {
    if (level > 0) mesh = bisect(mesh);
    const CurvedMesh curved = build_curved_mesh(mesh, surface, k);
    double worst = 0.0;
    for (std::size_t e = 0; e < curved.size(); ++e) {
      const CurvedElement elem = curved.element(e);
      for (const Vec2& p : pts) {
        const Vec3 x = chart_point(elem, p);
        worst = std::max(worst, std::abs(surface.phi(x)) / surface.grad_phi(x).norm());
      }
    }
    rows.push_back({level, max_diameter(mesh), worst});
  }
  return rows;
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void write_csv(const ConvergenceReport& report, std::ostream& out) {
  out << "level,h,n_faces,value,error,eoc\n";
  for (const auto& row : report.rows) {
    out << row.level << ',' << format_double(row.h) << ',' << row.n_faces << ','
        << format_double(row.value) << ',' << format_double(row.error) << ',';
    if (row.eoc) out << format_double(*row.eoc);
    out << '\n';
  }
}

void write_csv(const RungeReport& report, std::ostream& out) {
  out << "k,error,cond_warning\n";
  for (const auto& row : report.rows)
    out << row.k << ',' << format_double(row.error) << ',' << (row.cond_warning ? 1 : 0)
        << '\n';
}

void write_json(const ConvergenceReport& report, std::ostream& out) {
  nlohmann::ordered_json j;
  const StudyConfig& c = report.config;
  j["surface"] = c.surface.spec();
  j["kind"] = std::string(to_string(c.kind));
  j["resolution"] = c.resolution;
  j["k"] = c.k;
  j["f"] = std::string(to_string(c.f));
  j["mode"] = std::string(to_string(c.mode));
  j["rule_degree"] = c.rule_degree;
  j["project_vertices"] = c.project_vertices;
  j["exact"] = report.exact;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r;
    r["level"] = row.level;
    r["h"] = row.h;
    r["n_faces"] = row.n_faces;
    r["value"] = row.value;
    r["error"] = row.error;
    r["eoc"] = row.eoc ? nlohmann::ordered_json(*row.eoc) : nlohmann::ordered_json();
    r["flagged"] = row.flagged;
    j["rows"].push_back(r);
  }
  j["warnings"] = report.warnings;
  out << j.dump(2) << '\n';
}

void write_json(const RungeReport& report, std::ostream& out) {
  nlohmann::ordered_json j;
  j["surface"] = report.surface;
  j["n_faces"] = report.n_faces;
  j["exact"] = report.exact;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r;
    r["k"] = row.k;
    r["error"] = row.error;
    r["cond_warning"] = row.cond_warning;
    j["rows"].push_back(r);
  }
  out << j.dump(2) << '\n';
}

}  // namespace surfquad
