#include "degeneig/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "degeneig/assembly.hpp"
#include "degeneig/eigensolver.hpp"
#include "degeneig/io.hpp"
#include "degeneig/nodal.hpp"
#include "degeneig/rng.hpp"
#include "degeneig/version.hpp"
#include "json.hpp"

namespace degeneig {

namespace {

using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolveOptions options_from(const RunConfig& cfg) {
  SolveOptions o;
  o.k = cfg.k;
  o.tol = cfg.tol;
  o.seed = cfg.seed;
  o.max_iterations = cfg.max_iterations;
  if (cfg.potential_constant_set) {
    o.rho_tag = "constant:" + fmt17(cfg.potential_constant);
  } else if (!cfg.potential_field_file.empty()) {
    o.rho_tag = "field:" + cfg.potential_field_file;
  } else {
    o.rho_tag = "none";
  }
  return o;
}

json json_of(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json report_header(const RunConfig& cfg, const std::string& command) {
  json j;
  j["version"] = kVersion;
  j["config_hash"] = config_hash(cfg);
  j["seed"] = cfg.seed;
  j["command"] = command;
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<double> random_interior_field(const Mesh& mesh, Rng& rng) {
  std::vector<double> f(mesh.nv(), 0.0);
  for (int v = 0; v < mesh.nv(); ++v) {
    if (!mesh.boundary[v]) f[v] = rng.uniform(-1.0, 1.0);
  }
  return f;
}

// Everything the verify checks share. The decomposition of the configured
// pencil is solved once; checks about the potential-free operator use
// `free_decomp`, identical to `decomp` when no potential is configured.
struct VerifyContext {
  const RunConfig& cfg;
  Mesh mesh;
  WeightSpec wspec;
  PencilFactory factory;
  PotentialField rho;
  SolveOptions opts;
  EigenDecomposition decomp;
  bool rho_is_zero;
  EigenDecomposition free_decomp;

  explicit VerifyContext(const RunConfig& c)
      : cfg(c),
        mesh(build_mesh_from(c)),
        wspec(weight_from(c)),
        factory(mesh, wspec),
        rho(potential_from(c, mesh.nv())),
        opts(options_from(c)),
        decomp(factory.solve(rho, opts)),
        rho_is_zero(rho.is_zero()),
        free_decomp(rho_is_zero ? decomp
                                : factory.solve(PotentialField::zero(mesh.nv()), opts)) {}
};

struct CheckOutcome {
  bool pass = false;
  json details;
};

CheckOutcome check_hardy(VerifyContext& ctx) {
  CheckOutcome out;
  const double bound = hardy_constant(ctx.wspec);
  Rng rng = Rng(ctx.cfg.seed).fork(101);
  double max_ratio = 0.0;
  int tested = 0;
  for (int t = 0; t < 100; ++t) {
    double r = hardy_ratio(ctx.mesh, ctx.wspec, random_interior_field(ctx.mesh, rng));
    max_ratio = std::max(max_ratio, r);
    ++tested;
  }
  for (int i = 0; i < std::min(5, ctx.decomp.k()); ++i) {
    std::vector<double> f = ctx.factory.system().to_full(ctx.decomp.vectors.col(i));
    max_ratio = std::max(max_ratio, hardy_ratio(ctx.mesh, ctx.wspec, f));
    ++tested;
  }
  out.pass = max_ratio <= bound;
  out.details["bound"] = bound;
  out.details["max_ratio"] = max_ratio;
  out.details["fields_tested"] = tested;
  return out;
}

CheckOutcome check_poincare(VerifyContext& ctx) {
  CheckOutcome out;
  const double lambda1 = ctx.free_decomp.lambdas(0);
  const double bound = 1.0 / lambda1 + 1e-8;
  Rng rng = Rng(ctx.cfg.seed).fork(102);
  double max_ratio = 0.0;
  int tested = 0;
  for (int t = 0; t < 100; ++t) {
    double r = poincare_ratio(ctx.mesh, ctx.wspec, random_interior_field(ctx.mesh, rng));
    max_ratio = std::max(max_ratio, r);
    ++tested;
  }
  for (int i = 0; i < std::min(5, ctx.free_decomp.k()); ++i) {
    std::vector<double> f = ctx.factory.system().to_full(ctx.free_decomp.vectors.col(i));
    max_ratio = std::max(max_ratio, poincare_ratio(ctx.mesh, ctx.wspec, f));
    ++tested;
  }
  out.pass = max_ratio <= bound;
  out.details["lambda1"] = lambda1;
  out.details["bound"] = bound;
  out.details["max_ratio"] = max_ratio;
  out.details["fields_tested"] = tested;
  return out;
}

CheckOutcome check_a2(VerifyContext& ctx) {
  CheckOutcome out;
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi{-lo.x, -lo.y};
  for (const Vec2& p : ctx.mesh.vertices) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  double estimate =
      estimate_a2_constant(ctx.wspec, lo, hi, ctx.cfg.a2_depth, ctx.cfg.a2_quad_order);
  out.pass = std::isfinite(estimate) && estimate >= 1.0 - 1e-12;
  out.details["estimate"] = estimate;
  out.details["depth"] = ctx.cfg.a2_depth;
  out.details["quad_order"] = ctx.cfg.a2_quad_order;
  return out;
}

CheckOutcome check_minmax(VerifyContext& ctx) {
  CheckOutcome out;
  SparseSymMatrix k_eff = ctx.factory.effective_stiffness(ctx.rho);
  out.pass = true;
  json per_i = json::array();
  for (int i = 1; i <= std::min(4, ctx.decomp.k() - 1); ++i) {
    MinmaxReport r = verify_minmax(ctx.decomp, k_eff, ctx.factory.system().mass, i, 200,
                                   Rng(ctx.cfg.seed).fork(200 + i).next_u64());
    if (!r.all_trials_ge || !r.basis_achieves) out.pass = false;
    per_i.push_back({{"i", i},
                     {"achieved", r.achieved},
                     {"worst_trial", r.worst_trial},
                     {"all_trials_ge", r.all_trials_ge},
                     {"basis_achieves", r.basis_achieves}});
  }
  out.details["subspaces_per_index"] = 200;
  out.details["per_index"] = per_i;
  return out;
}

CheckOutcome check_courant(VerifyContext& ctx) {
  CheckOutcome out;
  std::vector<CourantEntry> entries =
      courant_check(ctx.decomp, ctx.factory.system(), ctx.mesh, ctx.cfg.nodal_tol);
  out.pass = true;
  json rows = json::array();
  for (const CourantEntry& e : entries) {
    if (!e.pass || e.micro_count > 2) out.pass = false;
    if (e.index == 1 && e.filtered_count != 1) out.pass = false;
    if (e.index == 2 && e.filtered_count != 2) out.pass = false;
    rows.push_back({{"index", e.index},
                    {"raw_count", e.raw_count},
                    {"filtered_count", e.filtered_count},
                    {"micro_count", e.micro_count},
                    {"pass", e.pass}});
  }
  out.details["per_index"] = rows;
  return out;
}

CheckOutcome check_nodal_eig(VerifyContext& ctx) {
  CheckOutcome out;
  out.details["note"] = "potential-free pencil";
  std::vector<double> phi2 = ctx.factory.system().to_full(ctx.free_decomp.vectors.col(1));
  NodalDecomposition nd = nodal_decomposition(ctx.mesh, phi2, ctx.cfg.nodal_tol);
  const double med = median_triangle_area(ctx.mesh);
  std::vector<const NodalDomain*> macro;
  for (const NodalDomain& d : nd.domains) {
    if (!is_micro_domain(d, med)) macro.push_back(&d);
  }
  out.details["macro_domains"] = macro.size();
  if (macro.size() != 2) {
    out.pass = false;
    return out;
  }
  const double lambda2 = ctx.free_decomp.lambdas(1);
  out.pass = true;
  json gaps = json::array();
  for (const NodalDomain* d : macro) {
    DomainEigenvalueReport r =
        nodal_domain_eigenvalue(ctx.mesh, ctx.wspec, d->triangles, lambda2, ctx.opts);
    gaps.push_back({{"sign", d->sign},
                    {"triangles", d->triangles.size()},
                    {"lambda1_sub", r.lambda1_sub},
                    {"rel_gap", r.rel_gap}});
    if (!(r.rel_gap <= 0.05)) out.pass = false;
  }
  out.details["lambda2"] = lambda2;
  out.details["domains"] = gaps;
  return out;
}

CheckOutcome check_monotone(VerifyContext& ctx) {
  CheckOutcome out;
  out.details["note"] = "potential-free pencil";
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi{-lo.x, -lo.y};
  for (const Vec2& p : ctx.mesh.vertices) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  const double w = hi.x - lo.x, h = hi.y - lo.y;
  auto subset_below = [&](double fx, double fy) {
    std::vector<int> s;
    for (int t = 0; t < ctx.mesh.nt(); ++t) {
      const auto& tri = ctx.mesh.triangles[t];
      Vec2 c = (1.0 / 3.0) * (ctx.mesh.vertices[tri[0]] + ctx.mesh.vertices[tri[1]] +
                              ctx.mesh.vertices[tri[2]]);
      if (c.x < lo.x + fx * w && c.y < lo.y + fy * h) s.push_back(t);
    }
    return s;
  };
  const double cuts[3][2] = {{1.1, 0.95}, {0.95, 0.95}, {0.75, 0.75}};
  const int ksub = std::min(5, ctx.cfg.k);
  out.pass = true;
  json rows = json::array();
  std::vector<std::vector<double>> child_lambdas;
  for (const auto& cut : cuts) {
    MonotonicityReport r = domain_monotonicity_check(
        ctx.mesh, subset_below(cut[0], cut[1]), ctx.wspec, ksub, ctx.opts);
    if (!r.pass) out.pass = false;
    child_lambdas.push_back(r.lambda_child);
    rows.push_back({{"lambda_parent", r.lambda_parent},
                    {"lambda_child", r.lambda_child},
                    {"max_extension_error", r.max_extension_error},
                    {"pass", r.pass}});
  }
  // nested children: eigenvalues must grow as the domain shrinks
  for (size_t m = 0; m + 1 < child_lambdas.size(); ++m) {
    for (int i = 0; i < ksub; ++i) {
      if (child_lambdas[m][i] > child_lambdas[m + 1][i] * (1.0 + 1e-6)) out.pass = false;
    }
  }
  out.details["subdomains"] = rows;
  return out;
}

CheckOutcome check_lipschitz(VerifyContext& ctx) {
  CheckOutcome out;
  Rng rng = Rng(ctx.cfg.seed).fork(103);
  const int pairs = 20;
  const int n = std::min(8, ctx.factory.system().dim() - 1);
  double worst = 0.0;
  out.pass = true;
  for (int t = 0; t < pairs; ++t) {
    PotentialField rho1 = PotentialField::zero(ctx.mesh.nv());
    PotentialField rho2 = rho1;
    for (int v = 0; v < ctx.mesh.nv(); ++v) {
      rho1.values[v] = rng.uniform(-5.0, 5.0);
      rho2.values[v] = rho1.values[v] + rng.uniform(-5.0, 5.0);
    }
    LipschitzReport r = lipschitz_check(ctx.factory, rho1, rho2, n, ctx.opts);
    worst = std::max(worst, r.max_violation);
    if (!r.pass) out.pass = false;
  }
  // constant shift moves the whole spectrum exactly
  const double c = 3.7;
  PotentialField base = PotentialField::zero(ctx.mesh.nv());
  SolveOptions o = ctx.opts;
  o.k = n;
  EigenDecomposition d0 = ctx.factory.solve(base, o);
  EigenDecomposition d1 = ctx.factory.solve(PotentialField::constant(ctx.mesh.nv(), c), o);
  double shift_err = 0.0;
  for (int i = 0; i < n; ++i) {
    double expect = d0.lambdas(i) + c;
    shift_err = std::max(shift_err,
                         std::abs(d1.lambdas(i) - expect) / std::max(1.0, std::abs(expect)));
  }
  if (shift_err > 1e-8) out.pass = false;
  out.details["pairs"] = pairs;
  out.details["eigenvalues_per_pair"] = n;
  out.details["max_violation"] = worst;
  out.details["constant_shift_rel_error"] = shift_err;
  return out;
}

// First degenerate cluster that fits the solve window with a neighbor above.
bool find_degenerate_cluster(const VerifyContext& ctx, SpectralCluster* found) {
  std::vector<SpectralCluster> clusters =
      cluster_eigenvalues(ctx.decomp, ctx.cfg.cluster_rel_tol);
  for (const SpectralCluster& c : clusters) {
    if (c.h >= 2 && c.last() + 1 < ctx.decomp.k()) {
      *found = c;
      return true;
    }
  }
  return false;
}

CheckOutcome check_rates(VerifyContext& ctx) {
  CheckOutcome out;
  SpectralCluster cluster;
  if (!find_degenerate_cluster(ctx, &cluster)) {
    out.pass = false;
    out.details["error"] = "no degenerate cluster inside the solve window";
    return out;
  }
  PotentialField sigma =
      ctx.factory.vertex_product(ctx.decomp, cluster.first, cluster.first + 1);
  RatesReport r = first_order_rates(ctx.factory, ctx.rho, cluster, sigma,
                                    {0.02, 0.01, 0.005, 0.0025}, ctx.opts);
  out.pass = r.exact || (r.order_estimate >= 0.8 && r.order_estimate <= 1.2);
  out.details["cluster_first"] = cluster.first + 1;
  out.details["cluster_size"] = cluster.h;
  out.details["taus"] = r.taus;
  out.details["errors"] = r.errors;
  out.details["predicted_slopes"] = json_of(r.predicted);
  out.details["order_estimate"] = r.order_estimate;
  out.details["exact"] = r.exact;
  return out;
}

CheckOutcome check_split(VerifyContext& ctx) {
  CheckOutcome out;
  SpectralCluster cluster;
  if (!find_degenerate_cluster(ctx, &cluster)) {
    out.pass = false;
    out.details["error"] = "no degenerate cluster inside the solve window";
    return out;
  }
  SplittingReport r = split_cluster(ctx.factory, ctx.rho, cluster, ctx.cfg.split_eps,
                                    ctx.cfg.cluster_rel_tol, ctx.opts);
  double moved = sup_diff(r.rho_after, ctx.rho);
  double thresh = ctx.cfg.cluster_rel_tol * std::max(1.0, std::abs(r.cluster.lambda_ref));
  out.pass = moved < ctx.cfg.split_eps && r.gap_after > thresh;
  out.details["cluster_first"] = cluster.first + 1;
  out.details["cluster_size"] = cluster.h;
  out.details["tau"] = r.tau;
  out.details["halvings"] = r.halvings;
  out.details["gap_after"] = r.gap_after;
  out.details["potential_moved"] = moved;
  out.details["budget"] = ctx.cfg.split_eps;
  out.details["lambdas_after"] = json_of(r.lambdas_after);
  return out;
}

CheckOutcome check_simplify(VerifyContext& ctx) {
  CheckOutcome out;
  const int n = std::min(4, ctx.cfg.k - 2);
  SimplificationTrace trace = simplify_spectrum(ctx.factory, ctx.rho, n,
                                                ctx.cfg.split_eps,
                                                ctx.cfg.cluster_rel_tol, ctx.opts);
  out.pass = trace.total_perturbation < ctx.cfg.split_eps;
  out.details["n"] = n;
  out.details["steps"] = trace.steps.size();
  out.details["total_perturbation"] = trace.total_perturbation;
  out.details["budget"] = ctx.cfg.split_eps;
  out.details["min_gap_final"] = trace.min_gap_final;
  return out;
}

CheckOutcome check_openness(VerifyContext& ctx) {
  CheckOutcome out;
  const int n = std::min(4, ctx.cfg.k - 2);
  SimplificationTrace trace = simplify_spectrum(ctx.factory, ctx.rho, n,
                                                ctx.cfg.split_eps,
                                                ctx.cfg.cluster_rel_tol, ctx.opts);
  SolveOptions o = ctx.opts;
  o.k = std::max(ctx.opts.k, n + 2);
  EigenDecomposition d = ctx.factory.solve(trace.rho_final, o);
  const double radius = openness_radius(d, n, ctx.cfg.cluster_rel_tol);

  Rng rng = Rng(ctx.cfg.seed).fork(104);
  const double s = 0.95 * radius;
  const int samples = 10;
  out.pass = true;
  double min_gap_seen = std::numeric_limits<double>::infinity();
  for (int t = 0; t < samples; ++t) {
    PotentialField probe = trace.rho_final;
    for (int v = 0; v < ctx.mesh.nv(); ++v) probe.values[v] += rng.uniform(-s, s);
    EigenDecomposition dp = ctx.factory.solve(probe, o);
    for (int j = 0; j < n; ++j) {
      double gap = dp.lambdas(j + 1) - dp.lambdas(j);
      min_gap_seen = std::min(min_gap_seen, gap);
      if (gap <= ctx.cfg.cluster_rel_tol * std::max(1.0, std::abs(dp.lambdas(j)))) {
        out.pass = false;
      }
    }
  }
  out.details["n"] = n;
  out.details["radius"] = radius;
  out.details["samples"] = samples;
  out.details["sample_sup_norm"] = s;
  out.details["min_gap_seen"] = min_gap_seen;
  return out;
}

struct CheckSpec {
  const char* name;
  const char* anchor;
  CheckOutcome (*run)(VerifyContext&);
};

const CheckSpec kCheckTable[] = {
    {"hardy", "weighted-hardy-inequality", check_hardy},
    {"poincare", "weighted-poincare-inequality", check_poincare},
    {"a2", "muckenhoupt-a2-condition", check_a2},
    {"minmax", "courant-fischer-minmax", check_minmax},
    {"courant", "courant-nodal-domain-theorem", check_courant},
    {"nodal_eig", "nodal-domain-eigenvalue-identity", check_nodal_eig},
    {"monotone", "dirichlet-domain-monotonicity", check_monotone},
    {"lipschitz", "eigenvalue-lipschitz-continuity", check_lipschitz},
    {"rates", "degenerate-first-order-perturbation", check_rates},
    {"split", "degenerate-cluster-splitting", check_split},
    {"simplify", "generic-simplicity-of-spectrum", check_simplify},
    {"openness", "simple-spectrum-openness", check_openness},
};

// Config-level prerequisites; violations are config errors, not failures.
void validate_check_prerequisites(const RunConfig& cfg) {
  for (const std::string& name : cfg.checks) {
    if (name == "hardy" && cfg.weight_kind != "point_degenerate") {
      throw ConfigError("check 'hardy' needs weight.kind = point_degenerate");
    }
    if ((name == "minmax" || name == "nodal_eig") && cfg.k < 2) {
      throw ConfigError("check '" + name + "' needs solver.k >= 2");
    }
    if ((name == "rates" || name == "split" || name == "simplify" ||
         name == "openness") &&
        cfg.k < 3) {
      throw ConfigError("check '" + name + "' needs solver.k >= 3");
    }
  }
}

}  // namespace

int exit_code_for(const Error& e) {
  const std::string& code = e.code();
  if (code == "config-error") return 2;
  if (code == "missing-artifact") return 4;
  if (code == "factorization-failure" || code == "convergence-failure" ||
      code == "splitting-failure" || code == "simplification-failure" ||
      code == "cluster-tracking-failure" || code == "io-error") {
    return 3;
  }
  return 2;
}

Mesh build_mesh_from(const RunConfig& cfg) {
  Mesh mesh = [&] {
    if (!cfg.mesh_file.empty()) return read_mesh_file(cfg.mesh_file);
    return cfg.crisscross ? build_unit_square_crisscross_mesh(cfg.square_n)
                          : build_unit_square_mesh(cfg.square_n);
  }();
  for (int r = 0; r < cfg.refine; ++r) mesh = refine_uniform(mesh);
  if (cfg.grading_depth > 0) {
    mesh = refine_toward(mesh, {cfg.x0_x, cfg.x0_y}, cfg.grading_depth,
                         cfg.grading_radius);
  }
  return mesh;
}

WeightSpec weight_from(const RunConfig& cfg) {
  if (cfg.weight_kind == "point_degenerate") {
    return WeightSpec::point_degenerate(cfg.alpha, {cfg.x0_x, cfg.x0_y});
  }
  return WeightSpec::constant(cfg.c0);
}

PotentialField potential_from(const RunConfig& cfg, int nv) {
  if (cfg.potential_constant_set) {
    return PotentialField::constant(nv, cfg.potential_constant);
  }
  if (!cfg.potential_field_file.empty()) {
    std::vector<double> values = read_field_file(cfg.potential_field_file);
    if (static_cast<int>(values.size()) != nv) {
      throw ConfigError("potential.field length does not match the configured mesh");
    }
    PotentialField f{std::move(values)};
    f.validate();
    return f;
  }
  return PotentialField::zero(nv);
}

int cmd_solve(const RunConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  Mesh mesh = build_mesh_from(cfg);
  WeightSpec wspec = weight_from(cfg);
  PencilFactory factory(mesh, wspec);
  PotentialField rho = potential_from(cfg, mesh.nv());
  SolveOptions opts = options_from(cfg);
  EigenDecomposition decomp = factory.solve(rho, opts);
  std::vector<SpectralCluster> clusters = cluster_eigenvalues(decomp, cfg.cluster_rel_tol);

  std::vector<int> cluster_id(decomp.k(), 0);
  for (size_t c = 0; c < clusters.size(); ++c) {
    for (int i = clusters[c].first; i <= clusters[c].last(); ++i) {
      cluster_id[i] = static_cast<int>(c);
    }
  }

  std::filesystem::create_directories(cfg.output_dir);
  {
    std::ofstream csv(cfg.output_dir + "/eigenvalues.csv");
    if (!csv) throw IoError("cannot write eigenvalues.csv");
    csv << "index,lambda,residual,cluster_id\n";
    for (int i = 0; i < decomp.k(); ++i) {
      csv << (i + 1) << ',' << fmt17(decomp.lambdas(i)) << ','
          << fmt17(decomp.residuals(i)) << ',' << cluster_id[i] << "\n";
    }
  }
  for (int i = 0; i < decomp.k(); ++i) {
    write_field_file(cfg.output_dir + "/phi_" + std::to_string(i + 1) + ".field",
                     factory.system().to_full(decomp.vectors.col(i)));
  }

  json report = report_header(cfg, "solve");
  report["k"] = decomp.k();
  report["lambdas"] = json_of(decomp.lambdas);
  report["residuals"] = json_of(decomp.residuals);
  report["cluster_ids"] = cluster_id;
  report["rho_tag"] = decomp.rho_tag;
  report["weight"] = wspec.describe();
  report["mesh"] = {{"vertices", mesh.nv()},
                    {"triangles", mesh.nt()},
                    {"boundary_vertices", mesh.boundary_count()},
                    {"reduced_dim", factory.system().dim()}};
  report["timing_seconds"] = seconds_since(t0);
  write_json_file(cfg.output_dir + "/solve_report.json", report);
  std::cout << "solve: k=" << decomp.k() << " lambda1=" << decomp.lambdas(0)
            << " wrote " << cfg.output_dir << "\n";
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  if (cfg.checks.empty()) {
    throw ConfigError("verify needs a nonempty 'checks' list");
  }
  validate_check_prerequisites(cfg);
  auto t0 = std::chrono::steady_clock::now();
  VerifyContext ctx(cfg);

  json entries = json::array();
  bool all_pass = true;
  for (const CheckSpec& spec : kCheckTable) {
    if (std::find(cfg.checks.begin(), cfg.checks.end(), spec.name) == cfg.checks.end()) {
      continue;
    }
    CheckOutcome outcome;
    try {
      outcome = spec.run(ctx);
    } catch (const Error& e) {
      const std::string& code = e.code();
      if (code == "config-error" || code == "missing-artifact" ||
          code == "factorization-failure" || code == "convergence-failure") {
        throw;  // environment problems, not verdicts about the theorem
      }
      outcome.pass = false;
      outcome.details["error"] = e.what();
      outcome.details["error_code"] = code;
    }
    all_pass = all_pass && outcome.pass;
    entries.push_back({{"name", spec.name},
                       {"pass", outcome.pass},
                       {"paper_anchor", spec.anchor},
                       {"details", outcome.details}});
    std::cout << "check " << spec.name << ": " << (outcome.pass ? "pass" : "FAIL")
              << "\n";
  }

  json report = report_header(cfg, "verify");
  report["pass"] = all_pass;
  report["checks"] = entries;
  report["timing_seconds"] = seconds_since(t0);
  std::filesystem::create_directories(cfg.output_dir);
  write_json_file(cfg.output_dir + "/verify_report.json", report);
  return all_pass ? 0 : 1;
}

int cmd_plotdata(const RunConfig& cfg) {
  Mesh mesh = build_mesh_from(cfg);
  for (int i = 1; i <= cfg.k; ++i) {
    std::vector<double> f =
        read_field_file(cfg.output_dir + "/phi_" + std::to_string(i) + ".field");
    if (static_cast<int>(f.size()) != mesh.nv()) {
      throw ConfigError("phi_" + std::to_string(i) +
                        ".field does not match the configured mesh");
    }
    double max_abs = 0.0;
    for (double v : f) max_abs = std::max(max_abs, std::abs(v));
    const double cut = cfg.nodal_tol * max_abs;

    std::ofstream xyz(cfg.output_dir + "/phi_" + std::to_string(i) + ".xyz");
    std::ofstream mask(cfg.output_dir + "/nodal_" + std::to_string(i) + ".xyz");
    if (!xyz || !mask) throw IoError("cannot write plot data files");
    for (int v = 0; v < mesh.nv(); ++v) {
      xyz << fmt17(mesh.vertices[v].x) << ' ' << fmt17(mesh.vertices[v].y) << ' '
          << fmt17(f[v]) << "\n";
      int s = 0;
      if (max_abs > 0 && std::abs(f[v]) > cut) s = f[v] > 0 ? 1 : -1;
      mask << fmt17(mesh.vertices[v].x) << ' ' << fmt17(mesh.vertices[v].y) << ' ' << s
           << "\n";
    }
  }
  std::cout << "plotdata: wrote " << cfg.k << " field and mask files\n";
  return 0;
}

int cmd_mesh(const RunConfig& cfg) {
  Mesh mesh = build_mesh_from(cfg);
  std::filesystem::create_directories(cfg.output_dir);
  write_mesh_file(cfg.output_dir + "/mesh.degenmesh", mesh);

  json report = report_header(cfg, "mesh");
  report["vertices"] = mesh.nv();
  report["triangles"] = mesh.nt();
  report["boundary_vertices"] = mesh.boundary_count();
  report["total_area"] = mesh.total_area();
  write_json_file(cfg.output_dir + "/mesh_report.json", report);
  std::cout << "mesh: " << mesh.nv() << " vertices, " << mesh.nt() << " triangles\n";
  return 0;
}

}  // namespace degeneig
