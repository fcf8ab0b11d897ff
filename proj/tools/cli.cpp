#include "cli.hpp"

#include "surfquad/curved.hpp"
#include "surfquad/errors.hpp"
#include "surfquad/interp.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

namespace surfquad::cli {

namespace {

struct RawArgs {
  std::string surface = "sphere:R=1";
  std::string kind;
  int resolution = 1;
  std::optional<int> levels;
  int k = 2;
  std::string f = "gauss_curvature";
  std::string mode = "interp";
  int rule_degree = 12;
  int k_min = 1;
  int k_max = 10;
  int n_max = 64;
  std::string out;
  std::string mesh_in;
  std::string curved_nodes;
  std::string format = "csv";
  bool project_vertices = false;
  std::optional<int> threads;
  int max_iter = 50;
  bool newton = false;
};

void add_surface_options(CLI::App* app, RawArgs& a) {
  app->add_option("--surface", a.surface, "surface spec, e.g. torus:R=2,r=1")
      ->capture_default_str();
  app->add_option("--kind", a.kind,
                  "base mesh: octa_sphere | struct_torus | scaled_ellipsoid "
                  "(default: matches the surface)");
  app->add_option("--res", a.resolution, "base mesh resolution")->capture_default_str();
  app->add_flag("--project-vertices", a.project_vertices,
                "project fine vertices onto the surface after each bisection");
  app->add_option("--max-iter", a.max_iter, "closest-point iteration budget")
      ->capture_default_str();
  app->add_flag("--newton", a.newton, "use the Newton projector even where a closed form exists");
}

void add_threads(CLI::App* app, RawArgs& a) {
  app->add_option("--threads", a.threads, "worker threads (default: SURFQUAD_THREADS or 1)");
}

void add_integrand_options(CLI::App* app, RawArgs& a) {
  app->add_option("--k", a.k, "element degree, 1..12")->capture_default_str();
  app->add_option("--f", a.f, "integrand: one | gauss_curvature")->capture_default_str();
  app->add_option("--mode", a.mode, "exact | interp")->capture_default_str();
  app->add_option("--rule-degree", a.rule_degree, "quadrature degree, 1..12")
      ->capture_default_str();
}

void add_output(CLI::App* app, RawArgs& a, bool with_format) {
  app->add_option("--out", a.out, "output file (default: stdout)");
  if (with_format)
    app->add_option("--format", a.format, "csv | json")->capture_default_str();
}

void check_range(const std::string& flag, int v, int lo, int hi) {
  if (v < lo || v > hi)
    throw UsageError(flag, "value " + std::to_string(v) + " is outside [" +
                               std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

BaseKind default_kind(const ImplicitSurface& s) {
  switch (s.shape()) {
    case Shape::torus: return BaseKind::struct_torus;
    case Shape::ellipsoid: return BaseKind::scaled_ellipsoid;
    default: return BaseKind::octa_sphere;
  }
}

int parse_threads(const std::string& text) {
  int v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || v < 1)
    throw UsageError("SURFQUAD_THREADS", "expected a positive integer, got '" + text + "'");
  return v;
}

Config validate(Command cmd, const RawArgs& a, const std::optional<std::string>& env_threads) {
  Config c;
  c.command = cmd;
  try {
    c.surface = ImplicitSurface::parse(a.surface);
  } catch (const Error& e) {
    throw UsageError("--surface", e.what());
  }
  try {
    c.kind = a.kind.empty() ? default_kind(c.surface) : parse_base_kind(a.kind);
  } catch (const Error& e) {
    throw UsageError("--kind", e.what());
  }
  try {
    c.f = parse_integrand(a.f);
  } catch (const Error& e) {
    throw UsageError("--f", e.what());
  }
  try {
    c.mode = parse_mode(a.mode);
  } catch (const Error& e) {
    throw UsageError("--mode", e.what());
  }
  if (a.format != "csv" && a.format != "json")
    throw UsageError("--format", "expected csv or json, got '" + a.format + "'");
  c.json = a.format == "json";

  check_range("--res", a.resolution, 1, 64);
  check_range("--k", a.k, 1, 12);
  check_range("--rule-degree", a.rule_degree, 1, 12);
  check_range("--max-iter", a.max_iter, 0, 10000);
  c.resolution = a.resolution;
  c.k = a.k;
  c.rule_degree = a.rule_degree;
  c.projection.max_iter = a.max_iter;
  c.projection.force_newton = a.newton;

  c.levels = a.levels.value_or(cmd == Command::converge ? 4 : 0);
  check_range("--levels", c.levels, cmd == Command::converge ? 3 : 0, 8);

  check_range("--k-min", a.k_min, 1, 12);
  check_range("--k-max", a.k_max, 1, 12);
  if (a.k_min > a.k_max) throw UsageError("--k-min", "must not exceed --k-max");
  c.k_min = a.k_min;
  c.k_max = a.k_max;
  check_range("--n-max", a.n_max, 1, 1024);
  c.n_max = a.n_max;

  if (a.threads) {
    check_range("--threads", *a.threads, 1, 1024);
    c.threads = *a.threads;
  } else if (env_threads && !env_threads->empty()) {
    c.threads = parse_threads(*env_threads);
  }
  c.out = a.out;
  c.mesh_in = a.mesh_in;
  c.curved_nodes = a.curved_nodes;
  c.project_vertices = a.project_vertices;
  return c;
}

FlatMesh build_mesh(const Config& c) {
  FlatMesh mesh = generate_base(c.surface, c.kind, c.resolution);
  for (int i = 0; i < c.levels; ++i) {
    mesh = bisect(mesh);
    if (c.project_vertices) mesh = project_vertices(mesh, c.surface);
  }
  return mesh;
}

// Writes to --out when given, else to `out`.
template <class Fn>
void emit(const Config& c, std::ostream& out, Fn&& write) {
  if (c.out.empty()) {
    write(out);
    return;
  }
  std::ofstream file(c.out);
  if (!file) throw std::runtime_error("cannot open '" + c.out + "' for writing");
  write(file);
  if (!file) throw std::runtime_error("failed writing '" + c.out + "'");
}

void run_mesh(const Config& c, std::ostream& out) {
  const FlatMesh mesh = build_mesh(c);
  emit(c, out, [&](std::ostream& os) { write_off(mesh, os); });
  if (c.curved_nodes.empty()) return;
  CurvedMeshOptions opt;
  opt.projection = c.projection;
  opt.threads = c.threads;
  const CurvedMesh curved = build_curved_mesh(mesh, c.surface, c.k, opt);
  std::ofstream file(c.curved_nodes);
  if (!file) throw std::runtime_error("cannot open '" + c.curved_nodes + "' for writing");
  file << "face,node,x,y,z\n";
  for (std::size_t f = 0; f < curved.size(); ++f) {
    const auto& ids = curved.element_nodes[f];
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const Vec3& x = curved.nodes[ids[i]];
      file << f << ',' << i << ',' << format_double(x.x()) << ',' << format_double(x.y())
           << ',' << format_double(x.z()) << '\n';
    }
  }
}

void run_integrate(const Config& c, std::ostream& out) {
  const FlatMesh mesh = c.mesh_in.empty() ? build_mesh(c) : read_off(c.mesh_in);
  IntegrateOptions opt;
  opt.projection = c.projection;
  opt.threads = c.threads;
  const IntegralResult r = integrate_surface(mesh, c.surface, integrand_field(c.surface, c.f),
                                             c.k, builtin_rule(c.rule_degree), c.mode, opt);
  const double h = max_diameter(mesh);
  emit(c, out, [&](std::ostream& os) {
    if (c.json) {
      nlohmann::ordered_json j;
      j["value"] = r.value;
      j["n_elements"] = r.n_elements;
      j["h"] = h;
      os << j.dump(2) << '\n';
    } else {
      os << format_double(r.value) << ',' << r.n_elements << ',' << format_double(h) << '\n';
    }
  });
}

void run_converge(const Config& c, std::ostream& out, std::ostream& err) {
  StudyConfig s;
  s.surface = c.surface;
  s.kind = c.kind;
  s.resolution = c.resolution;
  s.k = c.k;
  s.f = c.f;
  s.levels = c.levels;
  s.mode = c.mode;
  s.rule_degree = c.rule_degree;
  s.project_vertices = c.project_vertices;
  s.threads = c.threads;
  s.projection = c.projection;
  const ConvergenceReport report = run_convergence(s);
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  emit(c, out, [&](std::ostream& os) {
    if (c.json)
      write_json(report, os);
    else
      write_csv(report, os);
  });
}

void run_runge_study(const Config& c, std::ostream& out) {
  RungeConfig r;
  r.k_min = c.k_min;
  r.k_max = c.k_max;
  r.f = c.f;
  r.mode = c.mode;
  r.rule_degree = c.rule_degree;
  r.threads = c.threads;
  r.projection = c.projection;
  const RungeReport report = run_runge(c.surface, build_mesh(c), r);
  emit(c, out, [&](std::ostream& os) {
    if (c.json)
      write_json(report, os);
    else
      write_csv(report, os);
  });
}

void run_lebesgue(const Config& c, std::ostream& out) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::ostringstream csv;
  csv << "n,lambda_measured,lambda_formula,diff\n";
  for (int n = 1; n <= c.n_max; ++n) {
    const double measured = cheb_lebesgue(n);
    const double formula = cheb_lebesgue_formula(n);
    csv << n << ',' << format_double(measured) << ',' << format_double(formula) << ','
        << format_double(measured - formula) << '\n';
    rows.push_back({{"n", n},
                    {"lambda_measured", measured},
                    {"lambda_formula", formula},
                    {"diff", measured - formula}});
  }
  emit(c, out, [&](std::ostream& os) {
    if (c.json)
      os << rows.dump(2) << '\n';
    else
      os << csv.str();
  });
}

}  // namespace

Config parse_args(int argc, const char* const* argv, std::optional<std::string> env_threads) {
  CLI::App app{"High-order integration over implicit surfaces", "surfquad"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  RawArgs a;
  CLI::App* mesh = app.add_subcommand("mesh", "write a refined flat mesh as OFF");
  add_surface_options(mesh, a);
  mesh->add_option("--levels", a.levels, "bisection levels, 0..8 (default 0)");
  mesh->add_option("--k", a.k, "degree for --curved-nodes")->capture_default_str();
  mesh->add_option("--curved-nodes", a.curved_nodes,
                   "also write projected nodes as CSV face,node,x,y,z");
  add_threads(mesh, a);
  add_output(mesh, a, false);

  CLI::App* integrate = app.add_subcommand("integrate", "integrate one field on one mesh");
  add_surface_options(integrate, a);
  integrate->add_option("--levels", a.levels, "bisection levels, 0..8 (default 0)");
  integrate->add_option("--mesh", a.mesh_in, "read the flat mesh from an OFF file");
  add_integrand_options(integrate, a);
  add_threads(integrate, a);
  add_output(integrate, a, true);

  CLI::App* converge = app.add_subcommand("converge", "convergence study under bisection");
  add_surface_options(converge, a);
  converge->add_option("--levels", a.levels, "finest level, 3..8 (default 4)");
  add_integrand_options(converge, a);
  add_threads(converge, a);
  add_output(converge, a, true);

  CLI::App* runge = app.add_subcommand("runge-study", "error against degree on a fixed mesh");
  add_surface_options(runge, a);
  runge->add_option("--levels", a.levels, "bisection levels, 0..8 (default 0)");
  add_integrand_options(runge, a);
  runge->add_option("--k-min", a.k_min, "lowest degree")->capture_default_str();
  runge->add_option("--k-max", a.k_max, "highest degree")->capture_default_str();
  add_threads(runge, a);
  add_output(runge, a, true);

  CLI::App* leb = app.add_subcommand("lebesgue", "Chebyshev-Lobatto Lebesgue constants");
  leb->add_option("--n-max", a.n_max, "largest node count index")->capture_default_str();
  add_output(leb, a, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    Config c;
    const auto subs = app.get_subcommands();
    c.help = subs.empty() ? app.help() : subs.front()->help();
    return c;
  } catch (const CLI::CallForAllHelp&) {
    Config c;
    c.help = app.help("", CLI::AppFormatMode::All);
    return c;
  } catch (const CLI::ParseError& e) {
    throw UsageError("", e.what());
  }

  Command cmd = Command::integrate;
  if (mesh->parsed())
    cmd = Command::mesh;
  else if (converge->parsed())
    cmd = Command::converge;
  else if (runge->parsed())
    cmd = Command::runge_study;
  else if (leb->parsed())
    cmd = Command::lebesgue;
  return validate(cmd, a, env_threads);
}

int run(const Config& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::mesh: run_mesh(config, out); break;
      case Command::integrate: run_integrate(config, out); break;
      case Command::converge: run_converge(config, out, err); break;
      case Command::runge_study: run_runge_study(config, out); break;
      case Command::lebesgue: run_lebesgue(config, out); break;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config config;
  try {
    const char* env = std::getenv("SURFQUAD_THREADS");
    config = parse_args(argc, argv, env ? std::optional<std::string>(env) : std::nullopt);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nrun with --help for the list of options\n";
    return 2;
  }
  if (!config.help.empty()) {
    out << config.help;
    return 0;
  }
  return run(config, out, err);
}

}  // namespace surfquad::cli
