#pragma once

#include "surfquad/integrate.hpp"
#include "surfquad/refmesh.hpp"

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace surfquad {

enum class Integrand { one, gauss_curvature };

Integrand parse_integrand(std::string_view name);  // "one" | "gauss_curvature"
std::string_view to_string(Integrand f);

ScalarField integrand_field(const ImplicitSurface& surface, Integrand f);

/// Ground truth: 2 pi chi for the curvature, closed-form area for f = 1.
/// Throws InvalidArgument when no exact value is known.
double exact_target(const ImplicitSurface& surface, Integrand f);

/// |value - exact| / max(1, |exact|).
double error_metric(double value, double exact);

/// Errors at or below this are treated as round-off.
inline constexpr double kErrorFloor = 1e-13;

struct StudyConfig {
  ImplicitSurface surface = ImplicitSurface::sphere(1.0);
  BaseKind kind = BaseKind::octa_sphere;
  int resolution = 1;
  int k = 2;
  Integrand f = Integrand::gauss_curvature;
  /// Rows are produced for levels 0..levels.
  int levels = 4;
  IntegrandMode mode = IntegrandMode::interp_f;
  int rule_degree = 12;
  bool project_vertices = false;
  int threads = 1;
  ProjectOptions projection;
};

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  std::size_t n_faces = 0;
  double value = 0.0;
  double error = 0.0;
  std::optional<double> eoc;  // from the second row on
  bool flagged = false;       // at or past the round-off floor
};

struct ConvergenceReport {
  StudyConfig config;
  double exact = 0.0;
  std::vector<ConvergenceRow> rows;
  std::vector<std::string> warnings;
};

/// Integrates on the bisection hierarchy of one base mesh. Requires levels >= 3.
ConvergenceReport run_convergence(const StudyConfig& config);

/// Least-squares slope of log(error) against log(h) over the last `tail`
/// unflagged rows. Throws InsufficientData with fewer than two usable rows.
double fit_slope(const ConvergenceReport& report, int tail = 3);
double fit_slope(std::span<const double> h, std::span<const double> error);

struct RungeRow {
  int k = 1;
  double value = 0.0;
  double error = 0.0;
  bool cond_warning = false;  // Vandermonde condition above 1e12
};

struct RungeReport {
  std::string surface;
  std::size_t n_faces = 0;
  double exact = 0.0;
  std::vector<RungeRow> rows;
};

struct RungeConfig {
  int k_min = 1;
  int k_max = 10;
  Integrand f = Integrand::gauss_curvature;
  IntegrandMode mode = IntegrandMode::interp_f;
  int rule_degree = 12;
  int threads = 1;
  ProjectOptions projection;
};

/// Error per degree k on a fixed mesh. Requires 1 <= k_min <= k_max <= 12.
RungeReport run_runge(const ImplicitSurface& surface, const FlatMesh& mesh,
                      const RungeConfig& config);

struct GeometricRow {
  int level = 0;
  double h = 0.0;
  double max_distance = 0.0;
};

/// Bisects one flat macro triangle `levels` times and records, per level,
/// the largest |phi|/|grad phi| of the degree-k charts at a sampling lattice
/// of `samples` subdivisions per element edge.
std::vector<GeometricRow> chart_distance_study(const ImplicitSurface& surface,
                                               const std::array<Vec3, 3>& macro,
                                               int k, int levels, int samples = 8);

// Shortest round-trip decimal representation.
std::string format_double(double v);

/// `level,h,n_faces,value,error,eoc`
void write_csv(const ConvergenceReport& report, std::ostream& out);
/// `k,error,cond_warning`
void write_csv(const RungeReport& report, std::ostream& out);
void write_json(const ConvergenceReport& report, std::ostream& out);
void write_json(const RungeReport& report, std::ostream& out);

}  // namespace surfquad
