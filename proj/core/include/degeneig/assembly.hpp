#pragma once

#include <Eigen/Dense>
#include <vector>

#include "degeneig/mesh.hpp"
#include "degeneig/sparse.hpp"
#include "degeneig/weight.hpp"

namespace degeneig {

// Reduced generalized pencil (K, M) over interior (non-Dirichlet) vertices,
// plus the index maps between full and reduced numbering.
struct AssembledSystem {
  SparseSymMatrix stiffness;          // reduced weighted stiffness
  SparseSymMatrix mass;               // reduced consistent mass
  std::vector<int> interior_index;    // vertex -> reduced index, -1 on boundary
  std::vector<int> vertex_of_reduced; // reduced index -> vertex
  int full_dim = 0;

  int dim() const { return static_cast<int>(vertex_of_reduced.size()); }

  Eigen::VectorXd to_reduced(const std::vector<double>& full_field) const;
  std::vector<double> to_full(const Eigen::VectorXd& reduced) const;
};

std::vector<int> interior_index_of(const Mesh& mesh);

// Weighted stiffness with Dirichlet rows and columns eliminated:
// entry (i,j) = sum_T (int_T w) grad(phi_i) . grad(phi_j), with the weight
// integrated by the degree-5 rule (plus subdivision toward x0 on triangles
// touching it). P1 gradients are constant per triangle, so the quadrature
// choice only enters through int_T w.
SparseSymMatrix assemble_stiffness(const Mesh& mesh, const WeightSpec& spec);

// Consistent P1 mass over all vertices (boundary included):
// element matrix (A/12) [[2,1,1],[1,2,1],[1,1,2]].
SparseSymMatrix assemble_mass(const Mesh& mesh);

// Potential matrix over all vertices: entry (i,j) = int rho phi_i phi_j with
// rho the P1 interpolant of per-vertex values. The cubic integrand is
// integrated exactly, so rho = c reproduces c*M entrywise.
SparseSymMatrix assemble_potential(const Mesh& mesh, const std::vector<double>& rho);
SparseSymMatrix assemble_potential(const Mesh& mesh, double constant_rho);

// Restriction of a full-vertex matrix to interior rows and columns.
SparseSymMatrix reduce_matrix(const SparseSymMatrix& full,
                              const std::vector<int>& interior_index);

AssembledSystem build_system(const Mesh& mesh, const WeightSpec& spec);

// sqrt(u^T K u); the discrete weighted H1 seminorm when K is a stiffness.
double weighted_h1_norm(const SparseSymMatrix& k, const Eigen::VectorXd& u);

}  // namespace degeneig
