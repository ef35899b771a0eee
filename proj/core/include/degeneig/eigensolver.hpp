#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "degeneig/sparse.hpp"

namespace degeneig {

// Leading eigenpairs of the generalized pencil K_eff u = lambda M u.
// Invariants kept by solve_eigs: lambdas non-decreasing, columns of vectors
// M-orthonormal to 1e-10, each residual <= the solve tolerance, and the
// largest-magnitude entry of each vector positive (ties: lowest index).
struct EigenDecomposition {
  Eigen::VectorXd lambdas;
  Eigen::MatrixXd vectors;    // column i pairs with lambdas(i)
  Eigen::VectorXd residuals;  // ||K_eff phi - lambda M phi||_2 / ||phi||_2
  std::string rho_tag;        // label of the potential the pencil used

  int k() const { return static_cast<int>(lambdas.size()); }
  int dim() const { return static_cast<int>(vectors.rows()); }
};

struct SolveOptions {
  int k = 5;
  double tol = 1e-9;          // residual tolerance
  std::uint64_t seed = 12345; // start-block randomness
  int max_iterations = 500;
  int block_extra = 6;        // iterate k + block_extra vectors
  // Must lie strictly below the pencil spectrum; lambda_1 > min(0, rho_min)
  // whenever the weighted stiffness is positive definite, so the default is
  // safe for potential-free pencils. Callers adding a potential with negative
  // values pass min(0, rho_min) - 1.
  double shift = -1.0;
  std::string rho_tag;
};

// k algebraically smallest eigenpairs by shift-inverted block subspace
// iteration (dense solve below a size cutoff). `potential` is an optional
// reduced-dimension matrix added to the stiffness.
EigenDecomposition solve_eigs(const SparseSymMatrix& stiffness,
                              const SparseSymMatrix& mass,
                              const SparseSymMatrix* potential,
                              const SolveOptions& opts);
EigenDecomposition solve_eigs(const SparseSymMatrix& stiffness,
                              const SparseSymMatrix& mass,
                              const SolveOptions& opts);

double rayleigh_quotient(const SparseSymMatrix& k_eff, const SparseSymMatrix& mass,
                         const Eigen::VectorXd& u);

struct MinmaxReport {
  double achieved = 0.0;      // max Rayleigh quotient over span{Phi_1..Phi_i}
  bool basis_achieves = false;// achieved matches lambda_i to 1e-8 relative
  double worst_trial = 0.0;   // smallest max-quotient seen over random trials
  bool all_trials_ge = false; // every trial >= lambda_i (1 - 1e-6)
  int trials = 0;
};

// Monte Carlo check of the min-max characterization: every i-dimensional
// subspace has max Rayleigh quotient >= lambda_i, with equality on the
// eigenbasis span. Failures are recorded in the report, not thrown.
MinmaxReport verify_minmax(const EigenDecomposition& decomp,
                           const SparseSymMatrix& k_eff, const SparseSymMatrix& mass,
                           int i, int trials, std::uint64_t seed);

// Contiguous run of numerically coincident eigenvalues standing in for one
// eigenvalue of multiplicity h.
struct SpectralCluster {
  int first = 0;          // index into the decomposition
  int h = 1;              // multiplicity (run length)
  double lambda_ref = 0;  // cluster mean

  int last() const { return first + h - 1; }
  bool contains(int i) const { return i >= first && i <= last(); }
};

// Greedy grouping: lambda_{j+1} joins lambda_j's cluster iff their gap is
// <= rel_tol * max(1, |lambda_j|).
std::vector<SpectralCluster> cluster_eigenvalues(const EigenDecomposition& decomp,
                                                 double rel_tol);

// Orthogonal projection of f onto the cluster eigenspace (M-geometry).
Eigen::VectorXd projector_apply(const EigenDecomposition& decomp,
                                const SpectralCluster& cluster,
                                const SparseSymMatrix& mass,
                                const Eigen::VectorXd& f);

// Pseudo-inverse of the shifted pencil on the computed span:
//   Q f = -sum_{i not in cluster} (lambda_i - lambda_ref)^{-1} (f^T M Phi_i) Phi_i,
// so Q (lambda_ref f - M^{-1} K_eff f) = (id - projector) f for in-span f.
// f must lie in the computed span to 1e-6 of its M-norm.
Eigen::VectorXd pseudo_inverse_apply(const EigenDecomposition& decomp,
                                     const SpectralCluster& cluster,
                                     const SparseSymMatrix& mass,
                                     const Eigen::VectorXd& f);

// Truncated spectral H2 functional: sqrt(sum_i (u^T M Phi_i)^2 lambda_i^2).
// Defined only on the computed span (same 1e-6 tolerance).
double spectral_h2_norm(const EigenDecomposition& decomp, const SparseSymMatrix& mass,
                        const Eigen::VectorXd& u);

}  // namespace degeneig
