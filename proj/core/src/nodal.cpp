#include "degeneig/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "degeneig/errors.hpp"

namespace degeneig {

namespace {

struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

bool subset_connected(const Mesh& mesh, const std::vector<int>& subset) {
  if (subset.empty()) return false;
  std::vector<int> local(mesh.nt(), -1);
  for (size_t i = 0; i < subset.size(); ++i) local[subset[i]] = static_cast<int>(i);
  UnionFind uf(static_cast<int>(subset.size()));
  for (size_t i = 0; i < subset.size(); ++i) {
    for (int nb : mesh.neighbors[subset[i]]) {
      if (nb >= 0 && local[nb] >= 0) uf.unite(static_cast<int>(i), local[nb]);
    }
  }
  int root = uf.find(0);
  for (size_t i = 1; i < subset.size(); ++i) {
    if (uf.find(static_cast<int>(i)) != root) return false;
  }
  return true;
}

double solve_lambda1(const Mesh& child, const WeightSpec& spec, const SolveOptions& opts) {
  AssembledSystem sys;
  try {
    sys = build_system(child, spec);
  } catch (const InvalidMeshError&) {
    throw DomainTooCoarseError("domain has no interior vertices");
  }
  if (sys.dim() == 1) {
    // one interior dof: the pencil is scalar
    return sys.stiffness.values()[0] / sys.mass.values()[0];
  }
  SolveOptions o = opts;
  o.k = 1;
  return solve_eigs(sys.stiffness, sys.mass, o).lambdas(0);
}

}  // namespace

NodalDecomposition nodal_decomposition(const Mesh& mesh,
                                       const std::vector<double>& field, double tol) {
  if (!(tol > 0)) throw InvalidArgumentError("nodal tolerance must be positive");
  if (static_cast<int>(field.size()) != mesh.nv()) {
    throw InvalidArgumentError("field length does not match vertex count");
  }
  double max_abs = 0.0;
  for (double v : field) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs == 0.0) throw NoDomainsError("field is identically zero");

  const double cut = tol * max_abs;
  std::vector<int> sign(mesh.nt(), 0);
  for (int t = 0; t < mesh.nt(); ++t) {
    const auto& tri = mesh.triangles[t];
    double mean = (field[tri[0]] + field[tri[1]] + field[tri[2]]) / 3.0;
    if (std::abs(mean) > cut) sign[t] = mean > 0 ? 1 : -1;
  }

  UnionFind uf(mesh.nt());
  for (int t = 0; t < mesh.nt(); ++t) {
    if (sign[t] == 0) continue;
    for (int nb : mesh.neighbors[t]) {
      if (nb > t && sign[nb] == sign[t]) uf.unite(t, nb);
    }
  }

  NodalDecomposition out;
  out.tol_used = tol;
  std::vector<int> domain_of_root(mesh.nt(), -1);
  for (int t = 0; t < mesh.nt(); ++t) {
    if (sign[t] == 0) {
      out.zero_triangles.push_back(t);
      continue;
    }
    int root = uf.find(t);
    if (domain_of_root[root] < 0) {
      domain_of_root[root] = static_cast<int>(out.domains.size());
      out.domains.push_back({sign[t], {}, 0.0});
    }
    NodalDomain& d = out.domains[domain_of_root[root]];
    d.triangles.push_back(t);
    d.area += mesh.areas[t];
  }
  return out;
}

double median_triangle_area(const Mesh& mesh) {
  std::vector<double> a = mesh.areas;
  if (a.empty()) throw InvalidMeshError("mesh has no triangles");
  std::nth_element(a.begin(), a.begin() + a.size() / 2, a.end());
  return a[a.size() / 2];
}

bool is_micro_domain(const NodalDomain& domain, double median_area) {
  return domain.area < 3.0 * median_area;
}

std::vector<CourantEntry> courant_check(const EigenDecomposition& decomp,
                                        const AssembledSystem& sys, const Mesh& mesh,
                                        double tol) {
  if (sys.full_dim != mesh.nv()) {
    throw InvalidArgumentError("system and mesh vertex counts differ");
  }
  if (decomp.dim() != sys.dim()) {
    throw InvalidArgumentError("decomposition and system dimensions differ");
  }
  const double med = median_triangle_area(mesh);
  std::vector<CourantEntry> out;
  for (int i = 1; i <= decomp.k(); ++i) {
    NodalDecomposition nd =
        nodal_decomposition(mesh, sys.to_full(decomp.vectors.col(i - 1)), tol);
    CourantEntry e;
    e.index = i;
    e.raw_count = static_cast<int>(nd.domains.size());
    for (const NodalDomain& d : nd.domains) {
      if (is_micro_domain(d, med)) ++e.micro_count;
    }
    e.filtered_count = e.raw_count - e.micro_count;
    e.pass = e.filtered_count <= i;
    out.push_back(e);
  }
  return out;
}

DomainEigenvalueReport nodal_domain_eigenvalue(const Mesh& mesh, const WeightSpec& spec,
                                               const std::vector<int>& domain_triangles,
                                               double lambda_i,
                                               const SolveOptions& opts) {
  if (domain_triangles.size() < 8) {
    throw DomainTooCoarseError("nodal domain has fewer than 8 triangles");
  }
  if (lambda_i == 0.0) {
    throw UndefinedRatioError("relative gap against a zero eigenvalue");
  }
  SubmeshMap map = extract_submesh(mesh, domain_triangles);
  DomainEigenvalueReport report;
  report.lambda_i = lambda_i;
  report.lambda1_sub = solve_lambda1(map.child, spec, opts);
  report.rel_gap = std::abs(report.lambda1_sub - lambda_i) / std::abs(lambda_i);
  return report;
}

MonotonicityReport domain_monotonicity_check(const Mesh& parent,
                                             const std::vector<int>& subset,
                                             const WeightSpec& spec, int k,
                                             const SolveOptions& opts) {
  if (k < 1) throw InvalidArgumentError("eigenvalue count must be >= 1");
  std::vector<int> picked = subset;
  std::sort(picked.begin(), picked.end());
  picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
  if (picked.empty() || picked.size() >= static_cast<size_t>(parent.nt())) {
    throw InvalidSubdomainError("subset must be a proper nonempty triangle subset");
  }
  for (int t : picked) {
    if (t < 0 || t >= parent.nt()) throw InvalidSubdomainError("triangle index out of range");
  }
  if (!subset_connected(parent, picked)) {
    throw InvalidSubdomainError("subset does not induce a connected child");
  }

  SubmeshMap map = extract_submesh(parent, picked);
  AssembledSystem parent_sys = build_system(parent, spec);
  AssembledSystem child_sys = build_system(map.child, spec);

  SolveOptions o = opts;
  o.k = k;
  EigenDecomposition parent_d = solve_eigs(parent_sys.stiffness, parent_sys.mass, o);
  EigenDecomposition child_d = solve_eigs(child_sys.stiffness, child_sys.mass, o);

  MonotonicityReport report;
  report.monotone = true;
  for (int i = 0; i < k; ++i) {
    double lp = parent_d.lambdas(i);
    double lc = child_d.lambdas(i);
    report.lambda_parent.push_back(lp);
    report.lambda_child.push_back(lc);
    if (lp > lc + 1e-6 * lc) report.monotone = false;

    std::vector<double> child_full = child_sys.to_full(child_d.vectors.col(i));
    std::vector<double> parent_full = extend_by_zero(child_full, map, parent);
    double quotient = rayleigh_quotient(parent_sys.stiffness, parent_sys.mass,
                                        parent_sys.to_reduced(parent_full));
    double err = std::abs(quotient - lc) / std::max(1.0, std::abs(lc));
    report.max_extension_error = std::max(report.max_extension_error, err);
  }
  report.pass = report.monotone && report.max_extension_error <= 1e-10;
  return report;
}

}  // namespace degeneig
