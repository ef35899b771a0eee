#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace degeneig {

// Parsed run configuration. The file format is flat `dotted.key = value`
// lines with '#' comments; unknown or duplicate keys are hard errors so a
// typo cannot silently change a verification run.
struct RunConfig {
  // mesh source: structured square (optionally crisscross) or a mesh file
  int square_n = 16;
  bool crisscross = false;
  std::string mesh_file;
  int refine = 0;
  int grading_depth = 0;
  double grading_radius = 0.25;

  // weight
  std::string weight_kind = "constant";
  bool alpha_set = false;
  double alpha = 0.0;
  double x0_x = 0.0;
  double x0_y = 0.0;
  double c0 = 1.0;

  // potential: at most one source
  bool potential_constant_set = false;
  double potential_constant = 0.0;
  std::string potential_field_file;

  // solver
  int k = 5;
  double tol = 1e-9;
  std::uint64_t seed = 12345;
  int max_iterations = 500;

  double cluster_rel_tol = 1e-6;
  double nodal_tol = 1e-8;
  int a2_depth = 4;
  int a2_quad_order = 16;
  double split_eps = 0.1;

  std::vector<std::string> checks;
  std::string output_dir = ".";

  // raw key/value pairs as parsed, for hashing and report replay
  std::map<std::string, std::string> raw;
};

extern const std::vector<std::string> kKnownChecks;

RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

// FNV-1a over the sorted raw pairs; stable across runs and platforms.
std::string config_hash(const RunConfig& cfg);

}  // namespace degeneig
