#pragma once

#include <vector>

#include "degeneig/assembly.hpp"
#include "degeneig/eigensolver.hpp"
#include "degeneig/mesh.hpp"
#include "degeneig/weight.hpp"

namespace degeneig {

struct NodalDomain {
  int sign = 0;  // +1 or -1
  std::vector<int> triangles;
  double area = 0.0;
};

// Sign decomposition of a vertex field: triangles carry the sign of their
// vertex mean when it clears the relative tolerance, the rest are
// zero-class; domains are edge-connected components of one sign.
struct NodalDecomposition {
  int eigen_index = -1;  // label set by callers that know it, else -1
  std::vector<NodalDomain> domains;
  std::vector<int> zero_triangles;
  double tol_used = 0.0;
};

NodalDecomposition nodal_decomposition(const Mesh& mesh,
                                       const std::vector<double>& field, double tol);

double median_triangle_area(const Mesh& mesh);

// Domains below 3 median triangle areas are treated as tolerance artifacts
// along nodal lines, reported but excluded from pass/fail counting.
bool is_micro_domain(const NodalDomain& domain, double median_area);

struct CourantEntry {
  int index = 0;  // 1-based eigenfunction index, also the bound
  int raw_count = 0;
  int filtered_count = 0;
  int micro_count = 0;
  bool pass = false;  // filtered_count <= index
};

std::vector<CourantEntry> courant_check(const EigenDecomposition& decomp,
                                        const AssembledSystem& sys, const Mesh& mesh,
                                        double tol);

struct DomainEigenvalueReport {
  double lambda1_sub = 0.0;
  double lambda_i = 0.0;
  double rel_gap = 0.0;
};

// First Dirichlet eigenvalue of one nodal domain, solved on the extracted
// submesh with its full topological rim pinned, against the eigenvalue the
// domain came from.
DomainEigenvalueReport nodal_domain_eigenvalue(const Mesh& mesh, const WeightSpec& spec,
                                               const std::vector<int>& domain_triangles,
                                               double lambda_i,
                                               const SolveOptions& opts = {});

struct MonotonicityReport {
  std::vector<double> lambda_parent;
  std::vector<double> lambda_child;
  // worst |R_parent(extended phi) - lambda_child| / max(1, lambda_child)
  double max_extension_error = 0.0;
  bool monotone = false;
  bool pass = false;  // monotone and extension identity within 1e-10
};

// Checks lambda_i(parent) <= lambda_i(child) for i = 1..k on the submesh
// induced by the triangle subset, and that zero-extended child
// eigenfunctions reproduce their Rayleigh quotient on the parent exactly.
MonotonicityReport domain_monotonicity_check(const Mesh& parent,
                                             const std::vector<int>& subset,
                                             const WeightSpec& spec, int k,
                                             const SolveOptions& opts = {});

}  // namespace degeneig
