#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fracwave/fracops.hpp"
#include "fracwave/solver.hpp"
#include "fracwave/verify.hpp"

namespace fracwave::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_input = 2,
  exit_numerical = 3,
  exit_io = 4,
  exit_verification = 5,
};

/// Malformed or invalid problem file, expression or argument.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File system failure.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A validated problem file.
///
/// JSON object with keys:
///   schema_version  1 (required)
///   alpha, c, x_max, t_max  numbers
///   f, g            expression text
///   nx, nt          output grid points per axis, >= 2
///   closed_form     optional: "dalembert" (default), "first_order", "cosine_product"
///   quadrature      optional object: n_panels, abs_tol, rel_tol, max_subdivisions
/// Unknown keys are rejected.
struct ProblemSpec {
  solver::WaveProblem problem;
  solver::SolutionKind closed_form = solver::SolutionKind::dalembert;
  ops::QuadratureConfig quadrature;
  std::size_t nx = 0;
  std::size_t nt = 0;
};

ProblemSpec parse_problem(std::string_view json_text, const std::string& source = "<input>");
ProblemSpec load_problem(const std::filesystem::path& path);

/// Command-line overrides shared by the subcommands.
struct Overrides {
  std::optional<std::size_t> nx;
  std::optional<std::size_t> nt;
  /// Replaces both the absolute and relative adaptive quadrature tolerance.
  std::optional<double> tol;
};

ProblemSpec apply_overrides(ProblemSpec spec, const Overrides& overrides);

solver::ClosedFormSolution make_solution(const ProblemSpec& spec);

/// Fixed-format number with 17 significant digits.
std::string format_double(double value);

/// CSV with header `x,t,u`, rows ordered by t then x.
void write_csv(const solver::Field2D& field, std::ostream& out);
std::string field_csv(const solver::Field2D& field);

/// Structured verification report.
std::string report_json(const verify::VerificationReport& report, const ProblemSpec& spec);

/// Comma-separated list of orders; every entry must lie in (0, 1].
std::vector<double> parse_alpha_list(std::string_view text);

/// Subcommands. Results meant for the user go to `out_stream`, diagnostics to `err`; the
/// return value is the exit code.
int cmd_solve(const std::filesystem::path& problem, const std::optional<std::filesystem::path>& out,
              const Overrides& overrides, std::ostream& out_stream, std::ostream& err);
int cmd_verify(const std::filesystem::path& problem, const std::optional<std::filesystem::path>& out,
               const Overrides& overrides, std::ostream& out_stream, std::ostream& err);
int cmd_figures(const std::filesystem::path& out_dir, const Overrides& overrides, std::ostream& out_stream,
                std::ostream& err);
int cmd_sweep(const std::filesystem::path& problem, std::string_view alphas, const std::filesystem::path& out_dir,
              const Overrides& overrides, std::ostream& out_stream, std::ostream& err);

/// Name of the sweep output file for one order, e.g. "alpha_0.7.csv".
std::string sweep_file_name(double alpha);

/// The figure datasets: examples 1 (f = x^2, g = sin) and 2 (f = 0, g = sin) with
/// c = 1 on [0, figure_x_max] x [0, figure_t_max], one file per order.
inline constexpr double figure_x_max = 5.0;
inline constexpr double figure_t_max = 5.0;
inline constexpr std::size_t figure_points = 101;
inline constexpr double figure_orders[] = {0.7, 0.8, 0.9, 1.0};
std::string figure_file_name(int example, double alpha);

/// Entry point behind the `fracwave` executable.
int run(int argc, const char* const* argv, std::ostream& out_stream, std::ostream& err);

}  // namespace fracwave::cli
