#pragma once

#include <string>

#include "degeneig/config.hpp"
#include "degeneig/errors.hpp"
#include "degeneig/mesh.hpp"
#include "degeneig/perturbation.hpp"
#include "degeneig/weight.hpp"

namespace degeneig {

// Exit code contract: 0 pass, 1 check failure, 2 config error, 3 solver or
// runtime failure, 4 missing artifact.
int exit_code_for(const Error& e);

Mesh build_mesh_from(const RunConfig& cfg);
WeightSpec weight_from(const RunConfig& cfg);
PotentialField potential_from(const RunConfig& cfg, int nv);

// Subcommand drivers. Each returns 0 or 1 (check failure) and throws
// degeneig::Error for config, solver, or artifact problems; main() maps
// those through exit_code_for.
int cmd_solve(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_plotdata(const RunConfig& cfg);
int cmd_mesh(const RunConfig& cfg);

}  // namespace degeneig
