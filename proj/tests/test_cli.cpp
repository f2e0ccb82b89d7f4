#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "fracwave/cli.hpp"

namespace fs = std::filesystem;
using namespace fracwave;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

const fs::path kData = FRACWAVE_TEST_DATA;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fracwave_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs the installed executable, capturing both streams.
Run run_exe(const std::string& args, const std::string& tag) {
  const fs::path dir = scratch("exe_" + tag);
  const std::string cmd = std::string("\"") + FRACWAVE_EXE + "\" " + args + " > \"" + (dir / "out").string() +
                          "\" 2> \"" + (dir / "err").string() + "\"";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(dir / "out");
  r.err = slurp(dir / "err");
  return r;
}

struct Row {
  double x, t, u;
};

std::vector<Row> read_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  REQUIRE(line == "x,t,u");
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    Row r{};
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &r.x, &r.t, &r.u) == 3);
    rows.push_back(r);
  }
  return rows;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("problem file parsing", "[cli]") {
  const auto spec = cli::load_problem(kData / "example1_alpha09.json");
  REQUIRE(spec.problem.order().value() == 0.9);
  REQUIRE(spec.nx == 41);
  REQUIRE(spec.nt == 21);
  REQUIRE(spec.closed_form == solver::SolutionKind::dalembert);
  REQUIRE(spec.problem.f() == expr::parse("x^2"));

  const auto quad = cli::load_problem(kData / "example2_alpha08.json");
  REQUIRE(quad.quadrature.adaptive_tol.abs_tol == 1e-12);

  REQUIRE_THROWS_AS(cli::load_problem(kData / "unknown_key.json"), cli::InputError);
  REQUIRE_THROWS_AS(cli::load_problem(kData / "wrong_version.json"), cli::InputError);
  REQUIRE_THROWS_AS(cli::load_problem(kData / "bad_alpha.json"), cli::InputError);
  REQUIRE_THROWS_AS(cli::load_problem(kData / "not_json.json"), cli::InputError);
  REQUIRE_THROWS_AS(cli::load_problem(kData / "missing.json"), cli::InputError);
  REQUIRE_THROWS_AS(cli::parse_problem(R"({"schema_version": 1})"), cli::InputError);
  REQUIRE_THROWS_WITH(cli::load_problem(kData / "malformed_expression.json"), ContainsSubstring("position 4"));
  const std::string cosine_without_sine =
      R"json({"schema_version": 1, "alpha": 0.5, "c": 1, "f": "x", "g": "cos(x)", "x_max": 1, "t_max": 1,
          "nx": 3, "nt": 3, "closed_form": "cosine_product"})json";
  const std::string single_point =
      R"({"schema_version": 1, "alpha": 0.5, "c": 1, "f": "x", "g": "0", "x_max": 1, "t_max": 1, "nx": 1, "nt": 3})";
  const std::string few_panels =
      R"({"schema_version": 1, "alpha": 0.5, "c": 1, "f": "x", "g": "0", "x_max": 1, "t_max": 1, "nx": 3, "nt": 3,
          "quadrature": {"n_panels": 4}})";
  REQUIRE_THROWS_AS(cli::parse_problem(cosine_without_sine), cli::InputError);
  REQUIRE_THROWS_AS(cli::parse_problem(single_point), cli::InputError);
  REQUIRE_THROWS_AS(cli::parse_problem(few_panels), cli::InputError);
}

TEST_CASE("alpha lists", "[cli]") {
  REQUIRE(cli::parse_alpha_list("0.7,0.8, 0.9,1.0") == std::vector<double>{0.7, 0.8, 0.9, 1.0});
  REQUIRE(cli::parse_alpha_list("1") == std::vector<double>{1.0});
  REQUIRE_THROWS_AS(cli::parse_alpha_list("1.5"), cli::InputError);
  REQUIRE_THROWS_AS(cli::parse_alpha_list("0.5,,0.7"), cli::InputError);
  REQUIRE_THROWS_AS(cli::parse_alpha_list("0.5x"), cli::InputError);
  REQUIRE_THROWS_AS(cli::parse_alpha_list("0"), cli::InputError);
  REQUIRE(cli::sweep_file_name(0.7) == "alpha_0.7.csv");
  REQUIRE(cli::sweep_file_name(1.0) == "alpha_1.csv");
}

TEST_CASE("number formatting round-trips", "[cli]") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    REQUIRE(std::strtod(cli::format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("solve: t = 0 row of example 1 at a = 1 is x^2", "[cli][e2e]") {
  const auto dir = scratch("solve_ic");
  const auto r = run_exe("solve " + quoted(kData / "example1_alpha1.json") + " --out " + quoted(dir / "u.csv"),
                         "solve_ic");
  REQUIRE(r.code == 0);
  const auto rows = read_rows(slurp(dir / "u.csv"));
  REQUIRE(rows.size() == 41 * 21);
  for (std::size_t i = 0; i < 41; ++i) {
    REQUIRE(rows[i].t == 0.0);
    REQUIRE(rows[i].u == rows[i].x * rows[i].x);
  }
}

TEST_CASE("solve: classical golden file", "[cli][e2e]") {
  const std::string golden = slurp(kData / "classical_wave.csv");
  for (const auto& row : read_rows(golden)) {
    REQUIRE_THAT(row.u, WithinAbs(row.x * row.x + 4.0 * row.t * row.t, 1e-15));
  }
  const auto r = run_exe("solve " + quoted(kData / "classical_wave.json"), "golden");
  REQUIRE(r.code == 0);
  REQUIRE(r.out == golden);
}

TEST_CASE("solve: output equals library evaluation bit for bit", "[cli][e2e]") {
  const auto dir = scratch("solve_lib");
  const auto r = run_exe("solve " + quoted(kData / "example2_alpha08.json") + " --out " + quoted(dir / "u.csv"),
                         "solve_lib");
  REQUIRE(r.code == 0);
  const auto spec = cli::load_problem(kData / "example2_alpha08.json");
  const auto field = solver::evaluate_field(solver::solve_dalembert(spec.problem, spec.quadrature), 31, 21);
  const std::string expected = cli::field_csv(field);
  REQUIRE(slurp(dir / "u.csv") == expected);
  const auto rows = read_rows(expected);
  for (std::size_t k = 0; k < rows.size(); ++k) REQUIRE(rows[k].u == field.values[k]);
}

TEST_CASE("solve: overrides change the grid", "[cli][e2e]") {
  const auto r = run_exe("solve " + quoted(kData / "classical_wave.json") + " --nx 3 --nt 2", "overrides");
  REQUIRE(r.code == 0);
  REQUIRE(read_rows(r.out).size() == 6);
  REQUIRE(run_exe("solve " + quoted(kData / "classical_wave.json") + " --nx 1", "overrides_bad").code == 2);
  REQUIRE(run_exe("solve " + quoted(kData / "classical_wave.json") + " --tol -1", "tol_bad").code == 2);
}

TEST_CASE("solve is byte-deterministic", "[cli][e2e]") {
  const auto dir = scratch("determinism");
  const std::string base = "solve " + quoted(kData / "example1_alpha09.json") + " --out ";
  REQUIRE(run_exe(base + quoted(dir / "a.csv"), "det_a").code == 0);
  REQUIRE(run_exe(base + quoted(dir / "b.csv"), "det_b").code == 0);
  REQUIRE(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
}

TEST_CASE("exit codes", "[cli][e2e]") {
  const auto malformed = run_exe("solve " + quoted(kData / "malformed_expression.json"), "malformed");
  REQUIRE(malformed.code == 2);
  REQUIRE_THAT(malformed.err, ContainsSubstring("parse error at position 4"));
  REQUIRE(run_exe("solve " + quoted(kData / "unknown_key.json"), "unknown").code == 2);
  REQUIRE(run_exe("solve " + quoted(kData / "wrong_version.json"), "version").code == 2);
  REQUIRE(run_exe("solve " + quoted(kData / "not_json.json"), "notjson").code == 2);
  REQUIRE(run_exe("solve " + quoted(kData / "does_not_exist.json"), "missing").code == 2);
  REQUIRE(run_exe("frobnicate", "badcmd").code == 2);
  REQUIRE(run_exe("", "nocmd").code == 2);
  REQUIRE(run_exe("--help", "help").code == 0);

  const auto singular = run_exe("solve " + quoted(kData / "singular_profile.json"), "singular");
  REQUIRE(singular.code == 3);
  REQUIRE_THAT(singular.err, ContainsSubstring("x=1"));

  const auto dir = scratch("io");
  const fs::path blocker = dir / "file";
  std::ofstream(blocker) << "x";
  REQUIRE(run_exe("solve " + quoted(kData / "classical_wave.json") + " --out " + quoted(blocker / "u.csv"), "io")
              .code == 4);
  REQUIRE(run_exe("figures --out " + quoted(blocker / "figs"), "io_fig").code == 4);
}

TEST_CASE("verify: example 1 at a = 0.9 passes", "[cli][e2e]") {
  const auto dir = scratch("verify_ok");
  const auto r = run_exe("verify " + quoted(kData / "example1_alpha09.json") + " --out " + quoted(dir / "r.json"),
                         "verify_ok");
  REQUIRE(r.code == 0);
  REQUIRE_THAT(r.out, ContainsSubstring("monotone decrease: yes"));
  const auto report = nlohmann::json::parse(slurp(dir / "r.json"));
  REQUIRE(report["schema_version"] == 1);
  REQUIRE(report["passed"] == true);
  REQUIRE(report["residual"]["monotone"] == true);
  REQUIRE(report["residual"]["levels"].size() == 3);
  REQUIRE(report["initial_conditions"]["samples"] == 41);
  REQUIRE(report["candidates"].size() == 1);
}

TEST_CASE("verify: classical problem reaches the finite-difference floor", "[cli][e2e]") {
  const auto dir = scratch("verify_classical");
  const auto r = run_exe(
      "verify " + quoted(kData / "example1_alpha1.json") + " --out " + quoted(dir / "r.json"), "verify_classical");
  REQUIRE(r.code == 0);
  const auto report = nlohmann::json::parse(slurp(dir / "r.json"));
  REQUIRE(report["residual"]["nx"] == 256);
  REQUIRE(report["residual"]["residual_linf"].get<double>() <= 1e-6);
}

TEST_CASE("verify: cosine-product form fails with a quantified IC error", "[cli][e2e]") {
  const auto dir = scratch("verify_bad");
  const auto r = run_exe(
      "verify " + quoted(kData / "example2_cosine_product.json") + " --out " + quoted(dir / "r.json"), "verify_bad");
  REQUIRE(r.code == 5);
  const auto report = nlohmann::json::parse(slurp(dir / "r.json"));
  REQUIRE(report["passed"] == false);
  REQUIRE(report["initial_conditions"]["displacement_ok"] == false);
  REQUIRE_THAT(report["initial_conditions"]["displacement_error_at_origin"].get<double>(), WithinAbs(1.0, 1e-15));
}

TEST_CASE("figures: eight datasets with the classical limit", "[cli][e2e]") {
  const auto dir = scratch("figures");
  const auto r = run_exe("figures --out " + quoted(dir) + " --nx 41 --nt 41", "figures");
  REQUIRE(r.code == 0);
  REQUIRE(fs::exists(dir / "README.txt"));
  REQUIRE_THAT(slurp(dir / "README.txt"), ContainsSubstring("sin(X') sin(C T')"));
  for (int example = 1; example <= 2; ++example) {
    std::vector<std::vector<Row>> by_order;
    for (double a : cli::figure_orders) {
      const fs::path path = dir / cli::figure_file_name(example, a);
      REQUIRE(fs::exists(path));
      by_order.push_back(read_rows(slurp(path)));
      REQUIRE(by_order.back().size() == 41 * 41);
    }
    for (const auto& row : by_order.back()) {
      const double wave = std::sin(row.x) * std::sin(row.t);
      const double expected = example == 1 ? row.x * row.x + row.t * row.t + wave : wave;
      REQUIRE_THAT(row.u, WithinAbs(expected, 1e-10));
    }
    for (std::size_t i = 0; i < by_order.size(); ++i) {
      for (std::size_t j = i + 1; j < by_order.size(); ++j) {
        double gap = 0.0;
        for (std::size_t k = 0; k < by_order[i].size(); ++k) {
          gap = std::max(gap, std::abs(by_order[i][k].u - by_order[j][k].u));
        }
        REQUIRE(gap > 1e-3);
      }
    }
  }
}

TEST_CASE("sweep", "[cli][e2e]") {
  const auto dir = scratch("sweep");
  const auto problem = quoted(kData / "example1_alpha1.json");
  const auto r = run_exe("sweep " + problem + " --alphas 0.7,0.8,0.9,1.0 --out " + quoted(dir), "sweep");
  REQUIRE(r.code == 0);
  for (const char* name : {"alpha_0.7.csv", "alpha_0.8.csv", "alpha_0.9.csv", "alpha_1.csv"}) {
    REQUIRE(fs::exists(dir / name));
  }
  const auto single_dir = scratch("sweep_single");
  REQUIRE(run_exe("sweep " + problem + " --alphas 1.0 --out " + quoted(single_dir), "sweep_single").code == 0);
  const auto solved = run_exe("solve " + problem, "sweep_solve");
  REQUIRE(solved.code == 0);
  REQUIRE(slurp(single_dir / "alpha_1.csv") == solved.out);

  const auto bad = run_exe("sweep " + problem + " --alphas 1.5 --out " + quoted(dir), "sweep_bad");
  REQUIRE(bad.code == 2);
  REQUIRE_THAT(bad.err, ContainsSubstring("outside (0, 1]"));
}

TEST_CASE("in-process entry point", "[cli]") {
  std::ostringstream out;
  std::ostringstream err;
  const std::string path = (kData / "classical_wave.json").string();
  const char* argv[] = {"fracwave", "solve", path.c_str()};
  REQUIRE(cli::run(3, argv, out, err) == cli::exit_ok);
  REQUIRE(out.str() == slurp(kData / "classical_wave.csv"));
  REQUIRE(err.str().empty());
}
