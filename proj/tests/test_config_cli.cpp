#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "degeneig/config.hpp"
#include "degeneig/errors.hpp"
#include "degeneig/io.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace degeneig;
namespace fs = std::filesystem;

namespace {

#ifdef DEGENEIG_TOOL
const char* kTool = DEGENEIG_TOOL;
#else
const char* kTool = nullptr;
#endif

int run(const std::string& args) {
  REQUIRE(kTool != nullptr);
  std::string cmd = std::string(kTool) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("degeneig_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  REQUIRE(out.good());
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kBaseConfig =
    "mesh.square_n = 16\nweight.kind = constant\nsolver.k = 5\noutput_dir = smoke\n";

}  // namespace

TEST_CASE("config defaults and parsing") {
  RunConfig cfg = parse_config_text("");
  CHECK(cfg.square_n == 16);
  CHECK(cfg.k == 5);
  CHECK(cfg.tol == 1e-9);
  CHECK(cfg.seed == 12345);
  CHECK(cfg.cluster_rel_tol == 1e-6);
  CHECK(cfg.output_dir == ".");
  CHECK(cfg.checks.empty());

  RunConfig full = parse_config_text(
      "# comment line\n"
      "mesh.square_n = 24\n"
      "mesh.crisscross = true\n"
      "mesh.refine = 1\n"
      "weight.kind = point_degenerate\n"
      "weight.alpha = 1.5\n"
      "weight.x0_x = 0.25\n"
      "weight.x0_y = 0.5\n"
      "potential.constant = -2.5\n"
      "solver.k = 7\n"
      "solver.tol = 1e-8\n"
      "solver.seed = 99\n"
      "checks = hardy, poincare ,a2\n"
      "split.eps = 0.2\n");
  CHECK(full.square_n == 24);
  CHECK(full.crisscross);
  CHECK(full.refine == 1);
  CHECK(full.weight_kind == "point_degenerate");
  CHECK(full.alpha == 1.5);
  CHECK(full.x0_x == 0.25);
  CHECK(full.potential_constant_set);
  CHECK(full.potential_constant == -2.5);
  CHECK(full.k == 7);
  CHECK(full.seed == 99);
  REQUIRE(full.checks.size() == 3);
  CHECK(full.checks[1] == "poincare");
  CHECK(full.split_eps == 0.2);
}

TEST_CASE("config rejects malformed input") {
  CHECK_THROWS_AS(parse_config_text("bogus.key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("solver.k = 5\nsolver.k = 6\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("solver.k = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("solver.k = five\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("mesh.square_n = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("solver.tol = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("cluster.rel_tol = 0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("checks = hardy,bogus\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("checks = hardy,hardy\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("no_equals_sign\n"), ConfigError);

  // weight.alpha range enforced for the degenerate kind
  CHECK_THROWS_AS(
      parse_config_text("weight.kind = point_degenerate\nweight.alpha = 2.0\n"),
      ConfigError);
  // point degenerate weights need an explicit alpha
  CHECK_THROWS_AS(parse_config_text("weight.kind = point_degenerate\n"), ConfigError);
  // mutually exclusive sources
  CHECK_THROWS_AS(
      parse_config_text("mesh.file = m.degenmesh\nmesh.square_n = 8\n"), ConfigError);
  CHECK_THROWS_AS(
      parse_config_text("potential.constant = 1\npotential.field = f.field\n"),
      ConfigError);
}

TEST_CASE("config hash is stable and order independent") {
  RunConfig a = parse_config_text(kBaseConfig);
  CHECK(config_hash(a) == "37dc73995db92894");  // frozen

  RunConfig b = parse_config_text(
      "output_dir = smoke\nsolver.k = 5\nweight.kind = constant\nmesh.square_n = 16\n");
  CHECK(config_hash(b) == config_hash(a));

  RunConfig c = parse_config_text(
      "mesh.square_n = 32\nweight.kind = constant\nsolver.k = 5\noutput_dir = smoke\n");
  CHECK(config_hash(c) != config_hash(a));
  CHECK(config_hash(c).size() == 16);
}

TEST_CASE("missing config file is a config error") {
  CHECK_THROWS_AS(load_config_file("/nonexistent/degeneig.conf"), ConfigError);
}

TEST_CASE("cli exit codes") {
  fs::path dir = fresh_dir("exit_codes");
  fs::path conf = dir / "run.conf";
  write_file(conf, std::string("mesh.square_n = 12\nweight.kind = constant\n") +
                       "solver.k = 5\noutput_dir = " + (dir / "out").string() + "\n");

  CHECK(run("solve --config " + conf.string()) == 0);
  CHECK(fs::exists(dir / "out" / "eigenvalues.csv"));
  CHECK(fs::exists(dir / "out" / "phi_5.field"));
  CHECK(fs::exists(dir / "out" / "solve_report.json"));

  // verify failure: no degenerate cluster to split on this mesh
  fs::path vconf = dir / "verify.conf";
  write_file(vconf, std::string("mesh.square_n = 12\nweight.kind = constant\n") +
                        "solver.k = 5\nchecks = split\noutput_dir = " +
                        (dir / "vout").string() + "\n");
  CHECK(run("verify --config " + vconf.string()) == 1);
  CHECK(fs::exists(dir / "vout" / "verify_report.json"));

  // config errors
  fs::path bad = dir / "bad.conf";
  write_file(bad, "bogus.key = 1\n");
  CHECK(run("solve --config " + bad.string()) == 2);
  CHECK(run("solve --config " + (dir / "missing.conf").string()) == 2);
  CHECK(run("solve") == 2);
  CHECK(run("") == 2);
  CHECK(run("--help") == 0);

  // solver failure: impossible tolerance with one iteration
  fs::path sconf = dir / "stall.conf";
  write_file(sconf, std::string("mesh.square_n = 24\nweight.kind = constant\n") +
                        "solver.k = 4\nsolver.tol = 1e-300\nsolver.max_iterations = 1\n" +
                        "output_dir = " + (dir / "sout").string() + "\n");
  CHECK(run("solve --config " + sconf.string()) == 3);

  // missing artifacts for plotdata
  fs::path pconf = dir / "plot.conf";
  write_file(pconf, std::string("mesh.square_n = 12\nweight.kind = constant\n") +
                        "solver.k = 5\noutput_dir = " + (dir / "nothere").string() +
                        "\n");
  CHECK(run("plotdata --config " + pconf.string()) == 4);
}

TEST_CASE("cli artifacts are deterministic and well formed") {
  fs::path dir = fresh_dir("artifacts");
  fs::path conf = dir / "run.conf";
  write_file(conf, std::string("mesh.square_n = 16\nweight.kind = point_degenerate\n") +
                       "weight.alpha = 1.0\nsolver.k = 4\noutput_dir = " +
                       (dir / "a").string() + "\n");
  REQUIRE(run("solve --config " + conf.string()) == 0);
  REQUIRE(run("solve --config " + conf.string() + " --output " + (dir / "b").string()) ==
          0);

  std::string csv_a = slurp(dir / "a" / "eigenvalues.csv");
  std::string csv_b = slurp(dir / "b" / "eigenvalues.csv");
  CHECK(csv_a == csv_b);
  CHECK(csv_a.rfind("index,lambda,residual,cluster_id\n", 0) == 0);

  for (int i = 1; i <= 4; ++i) {
    std::string fa = slurp(dir / "a" / ("phi_" + std::to_string(i) + ".field"));
    std::string fb = slurp(dir / "b" / ("phi_" + std::to_string(i) + ".field"));
    CHECK(fa == fb);
    CHECK(fa.rfind("degenfield 1 ", 0) == 0);
  }

  nlohmann::json ra = nlohmann::json::parse(slurp(dir / "a" / "solve_report.json"));
  nlohmann::json rb = nlohmann::json::parse(slurp(dir / "b" / "solve_report.json"));
  CHECK(ra["lambdas"] == rb["lambdas"]);
  CHECK(ra["seed"] == 12345);
  CHECK(ra["version"].get<std::string>() == "0.1.0");
  // hash covers the effective configuration, including overrides
  CHECK(ra["config_hash"] != rb["config_hash"]);

  // seed override lands in the report
  REQUIRE(run("solve --config " + conf.string() + " --output " + (dir / "c").string() +
              " --seed 777") == 0);
  nlohmann::json rc = nlohmann::json::parse(slurp(dir / "c" / "solve_report.json"));
  CHECK(rc["seed"] == 777);
  // eigenvalues agree across seeds to solver tolerance
  double la = ra["lambdas"][0].get<double>();
  double lc = rc["lambdas"][0].get<double>();
  CHECK(std::abs(la - lc) <= 1e-8 * la);

  // plotdata consumes the solve artifacts
  REQUIRE(run("plotdata --config " + conf.string()) == 0);
  CHECK(fs::exists(dir / "a" / "phi_1.xyz"));
  CHECK(fs::exists(dir / "a" / "nodal_4.xyz"));

  // mesh subcommand round trips through the mesh reader
  REQUIRE(run("mesh --config " + conf.string()) == 0);
  Mesh m = read_mesh_file((dir / "a" / "mesh.degenmesh").string());
  CHECK(m.nv() == 17 * 17);
  nlohmann::json mr = nlohmann::json::parse(slurp(dir / "a" / "mesh_report.json"));
  CHECK(mr["vertices"] == 289);
  CHECK(mr["triangles"] == 512);
}

TEST_CASE("verify report records every configured check") {
  fs::path dir = fresh_dir("verify_report");
  fs::path conf = dir / "run.conf";
  write_file(conf, std::string("mesh.square_n = 10\nweight.kind = point_degenerate\n") +
                       "weight.alpha = 1.0\nsolver.k = 5\n" +
                       "checks = hardy,poincare,a2,minmax,courant\noutput_dir = " +
                       (dir / "out").string() + "\n");
  REQUIRE(run("verify --config " + conf.string()) == 0);
  nlohmann::json rep = nlohmann::json::parse(slurp(dir / "out" / "verify_report.json"));
  CHECK(rep["pass"] == true);
  REQUIRE(rep["checks"].size() == 5);
  for (const auto& entry : rep["checks"]) {
    CHECK(entry["pass"] == true);
    CHECK(entry.contains("paper_anchor"));
    CHECK(entry.contains("details"));
  }
  CHECK(rep["checks"][0]["name"] == "hardy");
  CHECK(rep["checks"][0]["paper_anchor"] == "weighted-hardy-inequality");

  // hardy needs a degenerate weight; a constant weight cannot be configured
  fs::path cconf = dir / "const.conf";
  write_file(cconf, std::string("mesh.square_n = 10\nweight.kind = constant\n") +
                        "solver.k = 5\nchecks = hardy\noutput_dir = " +
                        (dir / "cout").string() + "\n");
  CHECK(run("verify --config " + cconf.string()) == 2);

  // empty check list is a config error
  fs::path econf = dir / "empty.conf";
  write_file(econf, std::string("mesh.square_n = 10\nweight.kind = constant\n") +
                        "solver.k = 5\noutput_dir = " + (dir / "eout").string() + "\n");
  CHECK(run("verify --config " + econf.string()) == 2);
}
