#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "degeneig/config.hpp"
#include "degeneig/errors.hpp"
#include "degeneig/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string output_dir;
  std::uint64_t seed = 0;
};

void attach_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_path, "run configuration file")->required();
  cmd->add_option("--output", args->output_dir, "override output_dir");
  cmd->add_option("--seed", args->seed, "override solver.seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"solver and verifier for weighted Dirichlet eigenvalue problems"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* solve = app.add_subcommand("solve", "compute the leading eigenpairs");
  CLI::App* verify = app.add_subcommand("verify", "run the configured spectral checks");
  CLI::App* plotdata = app.add_subcommand("plotdata", "export eigenfield plot data");
  CLI::App* mesh = app.add_subcommand("mesh", "build and export the configured mesh");
  for (CLI::App* cmd : {solve, verify, plotdata, mesh}) attach_common(cmd, &args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help exits clean; every other usage problem is a config error
    return app.exit(e) == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    degeneig::RunConfig cfg = degeneig::load_config_file(args.config_path);
    if (sub->count("--output") > 0) {
      cfg.output_dir = args.output_dir;
      cfg.raw["output_dir"] = args.output_dir;
    }
    if (sub->count("--seed") > 0) {
      cfg.seed = args.seed;
      cfg.raw["solver.seed"] = std::to_string(args.seed);
    }
    if (solve->parsed()) return degeneig::cmd_solve(cfg);
    if (verify->parsed()) return degeneig::cmd_verify(cfg);
    if (plotdata->parsed()) return degeneig::cmd_plotdata(cfg);
    return degeneig::cmd_mesh(cfg);
  } catch (const degeneig::Error& e) {
    std::cerr << "error (" << e.code() << "): " << e.what() << "\n";
    return degeneig::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
