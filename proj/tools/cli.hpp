#pragma once

#include "surfquad/study.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace surfquad::cli {

/// Bad command line. `flag` names the offending option when one is known.
class UsageError : public std::runtime_error {
 public:
  UsageError(std::string flag, const std::string& msg)
      : std::runtime_error(flag.empty() ? msg : flag + ": " + msg), flag_(std::move(flag)) {}
  const std::string& flag() const noexcept { return flag_; }

 private:
  std::string flag_;
};

enum class Command { mesh, integrate, converge, runge_study, lebesgue };

struct Config {
  Command command = Command::integrate;
  ImplicitSurface surface = ImplicitSurface::sphere(1.0);
  BaseKind kind = BaseKind::octa_sphere;
  int resolution = 1;
  int levels = 0;
  int k = 2;
  Integrand f = Integrand::gauss_curvature;
  IntegrandMode mode = IntegrandMode::interp_f;
  int rule_degree = 12;
  int k_min = 1;
  int k_max = 10;
  int n_max = 64;
  std::string out;           // empty: stdout
  std::string mesh_in;       // integrate: read an OFF mesh instead of generating one
  std::string curved_nodes;  // mesh: optional CSV of projected nodes
  bool json = false;
  bool project_vertices = false;
  int threads = 1;
  ProjectOptions projection;
  std::string help;  // set when --help was requested
};

/// Parses argv (argv[0] is the program name). `env_threads` stands in for
/// SURFQUAD_THREADS. Throws UsageError.
Config parse_args(int argc, const char* const* argv,
                  std::optional<std::string> env_threads = std::nullopt);

/// Executes a parsed config. Returns 0, or 1 after printing a diagnostic to
/// `err` when the computation fails.
int run(const Config& config, std::ostream& out, std::ostream& err);

/// parse_args + run with exit codes 0 / 1 / 2.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace surfquad::cli
