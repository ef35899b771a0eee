#include "degeneig/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "degeneig/errors.hpp"

namespace degeneig {

const std::vector<std::string> kKnownChecks = {
    "hardy",    "poincare",  "a2",    "minmax",    "courant",  "nodal_eig",
    "monotone", "lipschitz", "rates", "split",     "simplify", "openness"};

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  const char* start = value.c_str();
  char* end = nullptr;
  double v = std::strtod(start, &end);
  if (end == start || *end != '\0' || !std::isfinite(v)) {
    throw ConfigError("key '" + key + "': expected a finite number, got '" + value + "'");
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& value) {
  const char* start = value.c_str();
  char* end = nullptr;
  long long v = std::strtoll(start, &end, 10);
  if (end == start || *end != '\0') {
    throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  const char* start = value.c_str();
  char* end = nullptr;
  unsigned long long v = std::strtoull(start, &end, 10);
  if (end == start || *end != '\0' || value.find('-') != std::string::npos) {
    throw ConfigError("key '" + key + "': expected a nonnegative integer, got '" + value +
                      "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw ConfigError("key '" + key + "': expected 0/1/true/false, got '" + value + "'");
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "mesh.square_n") {
    cfg.square_n = static_cast<int>(parse_int(key, value));
    if (cfg.square_n < 2) throw ConfigError("mesh.square_n must be >= 2");
  } else if (key == "mesh.crisscross") {
    cfg.crisscross = parse_bool(key, value);
  } else if (key == "mesh.file") {
    cfg.mesh_file = value;
  } else if (key == "mesh.refine") {
    cfg.refine = static_cast<int>(parse_int(key, value));
    if (cfg.refine < 0) throw ConfigError("mesh.refine must be >= 0");
  } else if (key == "mesh.grading_depth") {
    cfg.grading_depth = static_cast<int>(parse_int(key, value));
    if (cfg.grading_depth < 0) throw ConfigError("mesh.grading_depth must be >= 0");
  } else if (key == "mesh.grading_radius") {
    cfg.grading_radius = parse_double(key, value);
    if (!(cfg.grading_radius > 0)) throw ConfigError("mesh.grading_radius must be > 0");
  } else if (key == "weight.kind") {
    if (value != "constant" && value != "point_degenerate") {
      throw ConfigError("weight.kind must be 'constant' or 'point_degenerate'");
    }
    cfg.weight_kind = value;
  } else if (key == "weight.alpha") {
    cfg.alpha = parse_double(key, value);
    cfg.alpha_set = true;
  } else if (key == "weight.x0_x") {
    cfg.x0_x = parse_double(key, value);
  } else if (key == "weight.x0_y") {
    cfg.x0_y = parse_double(key, value);
  } else if (key == "weight.c0") {
    cfg.c0 = parse_double(key, value);
    if (!(cfg.c0 > 0)) throw ConfigError("weight.c0 must be > 0");
  } else if (key == "potential.constant") {
    cfg.potential_constant = parse_double(key, value);
    cfg.potential_constant_set = true;
  } else if (key == "potential.field") {
    cfg.potential_field_file = value;
  } else if (key == "solver.k") {
    cfg.k = static_cast<int>(parse_int(key, value));
    if (cfg.k < 1) throw ConfigError("solver.k must be >= 1");
  } else if (key == "solver.tol") {
    cfg.tol = parse_double(key, value);
    if (!(cfg.tol > 0)) throw ConfigError("solver.tol must be > 0");
  } else if (key == "solver.seed") {
    cfg.seed = parse_u64(key, value);
  } else if (key == "solver.max_iterations") {
    cfg.max_iterations = static_cast<int>(parse_int(key, value));
    if (cfg.max_iterations < 1) throw ConfigError("solver.max_iterations must be >= 1");
  } else if (key == "cluster.rel_tol") {
    cfg.cluster_rel_tol = parse_double(key, value);
    if (!(cfg.cluster_rel_tol > 0) || cfg.cluster_rel_tol > 1e-2) {
      throw ConfigError("cluster.rel_tol must lie in (0, 1e-2]");
    }
  } else if (key == "nodal.tol") {
    cfg.nodal_tol = parse_double(key, value);
    if (!(cfg.nodal_tol > 0)) throw ConfigError("nodal.tol must be > 0");
  } else if (key == "a2.depth") {
    cfg.a2_depth = static_cast<int>(parse_int(key, value));
    if (cfg.a2_depth < 1) throw ConfigError("a2.depth must be >= 1");
  } else if (key == "a2.quad_order") {
    cfg.a2_quad_order = static_cast<int>(parse_int(key, value));
    if (cfg.a2_quad_order < 2) throw ConfigError("a2.quad_order must be >= 2");
  } else if (key == "split.eps") {
    cfg.split_eps = parse_double(key, value);
    if (!(cfg.split_eps > 0)) throw ConfigError("split.eps must be > 0");
  } else if (key == "checks") {
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      if (std::find(kKnownChecks.begin(), kKnownChecks.end(), item) ==
          kKnownChecks.end()) {
        throw ConfigError("unknown check '" + item + "'");
      }
      if (std::find(cfg.checks.begin(), cfg.checks.end(), item) != cfg.checks.end()) {
        throw ConfigError("check '" + item + "' listed twice");
      }
      cfg.checks.push_back(item);
    }
  } else if (key == "output_dir") {
    cfg.output_dir = value;
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

void validate(const RunConfig& cfg) {
  if (!cfg.mesh_file.empty() && cfg.raw.count("mesh.square_n")) {
    throw ConfigError("mesh.file and mesh.square_n are mutually exclusive");
  }
  if (cfg.weight_kind == "point_degenerate") {
    if (!cfg.alpha_set) {
      throw ConfigError("weight.alpha is required for weight.kind = point_degenerate");
    }
    if (!(cfg.alpha > 0) || !(cfg.alpha < 2)) {
      throw ConfigError("weight.alpha must lie in (0, 2)");
    }
  }
  if (cfg.potential_constant_set && !cfg.potential_field_file.empty()) {
    throw ConfigError("potential.constant and potential.field are mutually exclusive");
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    }
    if (cfg.raw.count(key)) throw ConfigError("duplicate key '" + key + "'");
    cfg.raw[key] = value;
    apply_key(cfg, key, value);
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001B3ULL;
    }
  };
  for (const auto& [key, value] : cfg.raw) {
    mix(key);
    mix("=");
    mix(value);
    mix("\n");
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace degeneig
