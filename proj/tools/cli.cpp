#include "fracwave/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace fracwave::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kProblemKeys = {"schema_version", "alpha", "c",  "f",           "g",         "x_max",
                                            "t_max",          "nx",    "nt", "closed_form", "quadrature"};
const std::set<std::string> kQuadratureKeys = {"n_panels", "abs_tol", "rel_tol", "max_subdivisions"};

const json& require(const json& doc, const char* key) {
  if (!doc.contains(key)) throw InputError(std::string("missing key '") + key + "'");
  return doc.at(key);
}

double number_field(const json& doc, const char* key) {
  const json& v = require(doc, key);
  if (!v.is_number()) throw InputError(std::string("'") + key + "' must be a number");
  const double value = v.get<double>();
  if (!std::isfinite(value)) throw InputError(std::string("'") + key + "' must be finite");
  return value;
}

std::size_t count_field(const json& doc, const char* key, std::size_t minimum) {
  const json& v = require(doc, key);
  if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(minimum)) {
    throw InputError(std::string("'") + key + "' must be an integer >= " + std::to_string(minimum));
  }
  return v.get<std::size_t>();
}

expr::Expression expression_field(const json& doc, const char* key) {
  const json& v = require(doc, key);
  if (!v.is_string()) throw InputError(std::string("'") + key + "' must be an expression string");
  try {
    return expr::parse(v.get<std::string>());
  } catch (const expr::ParseError& e) {
    throw InputError(std::string("'") + key + "': " + e.what());
  }
}

solver::SolutionKind kind_from_string(const std::string& name) {
  for (auto kind : {solver::SolutionKind::dalembert, solver::SolutionKind::first_order,
                    solver::SolutionKind::cosine_product}) {
    if (name == solver::to_string(kind)) return kind;
  }
  throw InputError("'closed_form' must be one of dalembert, first_order, cosine_product");
}

ops::QuadratureConfig quadrature_field(const json& q) {
  if (!q.is_object()) throw InputError("'quadrature' must be an object");
  for (const auto& item : q.items()) {
    if (!kQuadratureKeys.count(item.key())) throw InputError("unknown quadrature key '" + item.key() + "'");
  }
  ops::QuadratureConfig cfg;
  if (q.contains("n_panels")) cfg.n_panels = static_cast<int>(count_field(q, "n_panels", 8));
  double abs_tol = cfg.adaptive_tol.abs_tol;
  double rel_tol = cfg.adaptive_tol.rel_tol;
  if (q.contains("abs_tol")) abs_tol = number_field(q, "abs_tol");
  if (q.contains("rel_tol")) rel_tol = number_field(q, "rel_tol");
  cfg.adaptive_tol = Tolerance(abs_tol, rel_tol);
  if (q.contains("max_subdivisions")) cfg.max_subdivisions = count_field(q, "max_subdivisions", 1);
  return cfg;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read problem file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory '" + dir.string() + "'");
}

std::string shortest(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

// Runs one stage and maps its failure to an exit code.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return exit_input;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return exit_io;
  } catch (const solver::FieldError& e) {
    err << "numerical failure " << e.what() << "\n";
    return exit_numerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  }
}

ProblemSpec load_or_input_error(const fs::path& path, const Overrides& overrides) {
  return apply_overrides(load_problem(path), overrides);
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json ic_json(const verify::InitialConditionReport& ic) {
  return {{"samples", ic.samples},
          {"max_displacement_error", ic.max_displacement_error},
          {"displacement_error_at_origin", ic.displacement_error_at_origin},
          {"displacement_ok", ic.displacement_ok},
          {"max_velocity_error", optional_number(ic.max_velocity_error)},
          {"velocity_ok", ic.velocity_ok}};
}

solver::Field2D solve_field(const ProblemSpec& spec) {
  return solver::evaluate_field(make_solution(spec), spec.nx, spec.nt);
}

}  // namespace

ProblemSpec parse_problem(std::string_view json_text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(source + ": " + e.what());
  }
  try {
    if (!doc.is_object()) throw InputError("problem file must be a JSON object");
    for (const auto& item : doc.items()) {
      if (!kProblemKeys.count(item.key())) throw InputError("unknown key '" + item.key() + "'");
    }
    const json& version = require(doc, "schema_version");
    if (!version.is_number_integer() || version.get<long long>() != 1) {
      throw InputError("'schema_version' must be 1");
    }
    const double alpha = number_field(doc, "alpha");
    const double c = number_field(doc, "c");
    const double x_max = number_field(doc, "x_max");
    const double t_max = number_field(doc, "t_max");
    const std::size_t nx = count_field(doc, "nx", 2);
    const std::size_t nt = count_field(doc, "nt", 2);
    auto f = expression_field(doc, "f");
    auto g = expression_field(doc, "g");
    auto kind = solver::SolutionKind::dalembert;
    if (doc.contains("closed_form")) {
      const json& v = doc.at("closed_form");
      if (!v.is_string()) throw InputError("'closed_form' must be a string");
      kind = kind_from_string(v.get<std::string>());
    }
    ops::QuadratureConfig cfg;
    if (doc.contains("quadrature")) cfg = quadrature_field(doc.at("quadrature"));
    cfg.validate();

    ProblemSpec spec{solver::WaveProblem(FractionalOrder(alpha), c, std::move(f), std::move(g), x_max, t_max),
                     kind, cfg, nx, nt};
    make_solution(spec);
    return spec;
  } catch (const std::exception& e) {
    throw InputError(source + ": " + e.what());
  }
}

ProblemSpec load_problem(const fs::path& path) { return parse_problem(read_file(path), path.string()); }

ProblemSpec apply_overrides(ProblemSpec spec, const Overrides& overrides) {
  if (overrides.nx) {
    if (*overrides.nx < 2) throw InputError("--nx must be at least 2");
    spec.nx = *overrides.nx;
  }
  if (overrides.nt) {
    if (*overrides.nt < 2) throw InputError("--nt must be at least 2");
    spec.nt = *overrides.nt;
  }
  if (overrides.tol) {
    if (!(*overrides.tol > 0.0)) throw InputError("--tol must be positive");
    spec.quadrature.adaptive_tol = Tolerance(*overrides.tol, *overrides.tol);
  }
  return spec;
}

solver::ClosedFormSolution make_solution(const ProblemSpec& spec) {
  switch (spec.closed_form) {
    case solver::SolutionKind::first_order: return solver::solve_first_order(spec.problem);
    case solver::SolutionKind::cosine_product: return solver::cosine_product_candidate(spec.problem);
    case solver::SolutionKind::dalembert: break;
  }
  return solver::solve_dalembert(spec.problem, spec.quadrature);
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(const solver::Field2D& field, std::ostream& out) {
  out << "x,t,u\n";
  for (std::size_t j = 0; j < field.nt; ++j) {
    const std::string t = format_double(field.t(j));
    for (std::size_t i = 0; i < field.nx; ++i) {
      out << format_double(field.x(i)) << ',' << t << ',' << format_double(field.at(i, j)) << '\n';
    }
  }
}

std::string field_csv(const solver::Field2D& field) {
  std::ostringstream out;
  write_csv(field, out);
  return out.str();
}

std::string report_json(const verify::VerificationReport& report, const ProblemSpec& spec) {
  const auto& r = report.residual;
  json levels = json::array();
  for (const auto& lv : r.levels) {
    levels.push_back({{"nx", lv.nx}, {"nt", lv.nt}, {"linf", lv.linf}, {"l2", lv.l2}});
  }
  json candidates = json::array();
  for (const auto& c : report.candidates) {
    candidates.push_back({{"name", c.name},
                          {"initial_conditions", ic_json(c.initial_conditions)},
                          {"displacement_error_near_origin", c.displacement_error_near_origin}});
  }
  const auto& problem = spec.problem;
  json doc = {
      {"schema_version", 1},
      {"problem",
       {{"alpha", problem.order().value()},
        {"c", problem.speed()},
        {"f", problem.f().to_string()},
        {"g", problem.g().to_string()},
        {"x_max", problem.x_max()},
        {"t_max", problem.t_max()}}},
      {"closed_form", solver::to_string(report.kind)},
      {"passed", report.passed()},
      {"initial_conditions", ic_json(report.initial_conditions)},
      {"residual",
       {{"alpha", r.alpha},
        {"nx", r.nx},
        {"nt", r.nt},
        {"residual_linf", r.residual_linf},
        {"residual_l2", r.residual_l2},
        {"levels", levels},
        {"observed_slope", optional_number(r.observed_slope)},
        {"extrapolated_linf", optional_number(r.extrapolated_linf)},
        {"monotone", r.monotone},
        {"at_rounding_floor", r.at_rounding_floor},
        {"notes", r.notes}}},
      {"route_deviation", optional_number(report.route_deviation)},
      {"route_tolerance", optional_number(report.route_tolerance)},
      {"candidates", candidates},
      {"notes", report.notes},
  };
  return doc.dump(2) + "\n";
}

std::vector<double> parse_alpha_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string_view item = text.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw InputError("invalid order '" + std::string(item) + "' in alpha list");
    }
    if (!(value > 0.0 && value <= 1.0)) {
      throw InputError("order " + std::string(item) + " is outside (0, 1]");
    }
    out.push_back(value);
    start = comma + 1;
  }
  return out;
}

std::string sweep_file_name(double alpha) { return "alpha_" + shortest(alpha) + ".csv"; }

std::string figure_file_name(int example, double alpha) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "example%d_alpha_%.1f.csv", example, alpha);
  return buf;
}

int cmd_solve(const fs::path& problem, const std::optional<fs::path>& out, const Overrides& overrides,
              std::ostream& out_stream, std::ostream& err) {
  std::optional<ProblemSpec> spec;
  if (int code = guarded(err, [&] {
        spec.emplace(load_or_input_error(problem, overrides));
        return exit_ok;
      })) {
    return code;
  }
  return guarded(err, [&] {
    const std::string csv = field_csv(solve_field(*spec));
    if (out) {
      write_file(*out, csv);
    } else {
      out_stream << csv;
    }
    return exit_ok;
  });
}

int cmd_verify(const fs::path& problem, const std::optional<fs::path>& out, const Overrides& overrides,
               std::ostream& out_stream, std::ostream& err) {
  std::optional<ProblemSpec> spec;
  if (int code = guarded(err, [&] {
        spec.emplace(load_or_input_error(problem, overrides));
        return exit_ok;
      })) {
    return code;
  }
  return guarded(err, [&] {
    verify::VerificationOptions options;
    options.ic_samples = spec->nx;
    if (overrides.nx) options.residual_nx = std::max<std::size_t>(32, *overrides.nx - 1);
    if (overrides.nt) options.residual_nt = std::max<std::size_t>(32, *overrides.nt - 1);
    const auto sol = make_solution(*spec);
    const auto report = verify::run_verification(spec->problem, sol, options);
    out_stream << verify::format_report(report);
    if (out) write_file(*out, report_json(report, *spec));
    return report.passed() ? exit_ok : exit_verification;
  });
}

int cmd_figures(const fs::path& out_dir, const Overrides& overrides, std::ostream& out_stream, std::ostream& err) {
  std::vector<ProblemSpec> specs;
  if (int code = guarded(err, [&] {
        const auto x = expr::Expression::variable();
        const expr::Expression profiles[2][2] = {{expr::pow(x, 2.0), expr::sin(x)},
                                                 {expr::Expression::literal(0.0), expr::sin(x)}};
        for (const auto& pair : profiles) {
          for (double alpha : figure_orders) {
            ProblemSpec spec{solver::WaveProblem(FractionalOrder(alpha), 1.0, pair[0], pair[1], figure_x_max,
                                                 figure_t_max),
                             solver::SolutionKind::dalembert, ops::QuadratureConfig{}, figure_points, figure_points};
            specs.push_back(apply_overrides(std::move(spec), overrides));
          }
        }
        return exit_ok;
      })) {
    return code;
  }
  return guarded(err, [&] {
    ensure_directory(out_dir);
    std::size_t index = 0;
    for (int example = 1; example <= 2; ++example) {
      for (double alpha : figure_orders) {
        const auto& spec = specs[index++];
        const fs::path path = out_dir / figure_file_name(example, alpha);
        write_file(path, field_csv(solve_field(spec)));
        out_stream << "wrote " << path.string() << "\n";
      }
    }
    std::ostringstream readme;
    readme << "Fractional D'Alembert solutions for the two example problems, c = 1,\n"
           << "x in [0, " << figure_x_max << "], t in [0, " << figure_t_max << "].\n\n"
           << "example1_alpha_*.csv  f(s) = s^2, g(s) = sin(s)\n"
           << "example2_alpha_*.csv  f(s) = 0,   g(s) = sin(s)\n\n"
           << "Columns x,t,u; rows ordered by t, then x. With X' = x^a / Gamma(1+a),\n"
           << "T' = t^a / Gamma(1+a) and C = c^a the solution is\n"
           << "  u = [f(X' + C T') + f(X' - C T')] / 2 + (1 / 2C) * integral of g over [X' - C T', X' + C T'].\n"
           << "The velocity integral is computed by adaptive quadrature. For g = sin it equals\n"
           << "sin(X') sin(C T') / C. The alternative form cos(X') cos(C T') / C does not satisfy\n"
           << "u(x, 0) = f(X'): for example 2 it gives u(0, 0) = 1 / C instead of 0, so it is not used.\n"
           << "At a = 1 the datasets reduce to x^2 + c^2 t^2 + sin(x) sin(ct) / c and sin(x) sin(ct) / c.\n";
    write_file(out_dir / "README.txt", readme.str());
    return exit_ok;
  });
}

int cmd_sweep(const fs::path& problem, std::string_view alphas, const fs::path& out_dir, const Overrides& overrides,
              std::ostream& out_stream, std::ostream& err) {
  std::optional<ProblemSpec> spec;
  std::vector<double> orders;
  if (int code = guarded(err, [&] {
        orders = parse_alpha_list(alphas);
        spec.emplace(load_or_input_error(problem, overrides));
        return exit_ok;
      })) {
    return code;
  }
  std::vector<ProblemSpec> variants;
  if (int code = guarded(err, [&] {
        for (double alpha : orders) {
          try {
            ProblemSpec variant = *spec;
            variant.problem = spec->problem.with_order(FractionalOrder(alpha));
            make_solution(variant);
            variants.push_back(std::move(variant));
          } catch (const std::exception& e) {
            throw InputError("order " + shortest(alpha) + ": " + e.what());
          }
        }
        return exit_ok;
      })) {
    return code;
  }
  return guarded(err, [&] {
    ensure_directory(out_dir);
    for (std::size_t k = 0; k < orders.size(); ++k) {
      const fs::path path = out_dir / sweep_file_name(orders[k]);
      write_file(path, field_csv(solve_field(variants[k])));
      out_stream << "wrote " << path.string() << "\n";
    }
    return exit_ok;
  });
}

int run(int argc, const char* const* argv, std::ostream& out_stream, std::ostream& err) {
  CLI::App app{"Closed-form fractional D'Alembert wave solutions and their numerical verification", "fracwave"};
  app.require_subcommand(1);

  Overrides overrides;
  auto add_overrides = [&overrides](CLI::App* cmd) {
    cmd->add_option("--nx", overrides.nx, "Grid points along x");
    cmd->add_option("--nt", overrides.nt, "Grid points along t");
    cmd->add_option("--tol", overrides.tol, "Absolute and relative quadrature tolerance");
  };

  fs::path problem;
  std::optional<fs::path> out;
  fs::path out_dir;
  std::string alphas;

  auto* solve = app.add_subcommand("solve", "Evaluate the closed form on a grid and write CSV");
  solve->add_option("problem", problem, "Problem file (JSON)")->required();
  solve->add_option("--out", out, "CSV output path (default: standard output)");
  add_overrides(solve);

  auto* verify_cmd = app.add_subcommand("verify", "Check initial conditions, PDE residual and route equivalence");
  verify_cmd->add_option("problem", problem, "Problem file (JSON)")->required();
  verify_cmd->add_option("--out", out, "JSON report path");
  add_overrides(verify_cmd);

  auto* figures = app.add_subcommand("figures", "Write the example datasets for a = 0.7, 0.8, 0.9, 1.0");
  figures->add_option("--out", out_dir, "Output directory")->required();
  add_overrides(figures);

  auto* sweep = app.add_subcommand("sweep", "Solve one problem for several orders");
  sweep->add_option("problem", problem, "Problem file (JSON)")->required();
  sweep->add_option("--alphas", alphas, "Comma-separated orders in (0, 1]")->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();
  add_overrides(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out_stream, err);
    return code == 0 ? exit_ok : exit_input;
  }

  if (solve->parsed()) return cmd_solve(problem, out, overrides, out_stream, err);
  if (verify_cmd->parsed()) return cmd_verify(problem, out, overrides, out_stream, err);
  if (figures->parsed()) return cmd_figures(out_dir, overrides, out_stream, err);
  return cmd_sweep(problem, alphas, out_dir, overrides, out_stream, err);
}

}  // namespace fracwave::cli
