#pragma once

#include <Eigen/Dense>
#include <vector>

#include "degeneig/assembly.hpp"
#include "degeneig/eigensolver.hpp"
#include "degeneig/mesh.hpp"
#include "degeneig/weight.hpp"

namespace degeneig {

// Bounded potential as a P1 vertex field (full vertex numbering).
struct PotentialField {
  std::vector<double> values;

  static PotentialField zero(int nv);
  static PotentialField constant(int nv, double c);

  double sup_norm() const;
  bool is_zero() const;
  void validate() const;  // finite values
};

PotentialField add_scaled(const PotentialField& base, double scale,
                          const PotentialField& direction);
double sup_diff(const PotentialField& a, const PotentialField& b);

// One mesh + weight, many potentials: assembles the weighted pencil once and
// solves (K + M_rho) u = lambda M u for any supplied rho. Holds a reference
// to the mesh; the mesh must outlive the factory.
class PencilFactory {
 public:
  PencilFactory(const Mesh& mesh, const WeightSpec& spec);

  const Mesh& mesh() const { return *mesh_; }
  const WeightSpec& weight() const { return spec_; }
  const AssembledSystem& system() const { return sys_; }

  SparseSymMatrix reduced_potential(const PotentialField& rho) const;
  SparseSymMatrix effective_stiffness(const PotentialField& rho) const;

  // Solves with the factorization shift placed below min(0, min rho) so the
  // shifted pencil stays positive definite for any bounded potential.
  EigenDecomposition solve(const PotentialField& rho, const SolveOptions& opts) const;

  // Vertexwise product of two computed eigenfunctions, zero on the boundary.
  PotentialField vertex_product(const EigenDecomposition& decomp, int i, int j) const;

 private:
  const Mesh* mesh_;
  WeightSpec spec_;
  AssembledSystem sys_;
};

struct LipschitzReport {
  double sup_rho_diff = 0.0;
  double bound = 0.0;      // sup_rho_diff + 1e-8 (1 + sup_rho_diff)
  double max_diff = 0.0;   // max_i |lambda_i(rho1) - lambda_i(rho2)|
  double max_violation = 0.0;
  bool pass = false;
};

// Eigenvalues are 1-Lipschitz in the potential sup-norm; this holds exactly
// for the consistent-mass pencil, so the tolerance only covers rounding.
LipschitzReport lipschitz_check(const PencilFactory& factory,
                                const PotentialField& rho1, const PotentialField& rho2,
                                int n, const SolveOptions& opts = {});

// S(j,k) = Phi_j^T M_sigma Phi_k over the cluster basis. Its eigenvalues are
// the first-order slopes of the eigenvalue branches under rho + tau sigma.
Eigen::MatrixXd interaction_matrix(const EigenDecomposition& decomp,
                                   const SpectralCluster& cluster,
                                   const SparseSymMatrix& m_sigma);

struct RatesReport {
  std::vector<double> taus;
  Eigen::MatrixXd slopes_at_tau;  // row per tau, h sorted slope values
  Eigen::VectorXd predicted;      // sorted eigenvalues of the interaction matrix
  std::vector<double> errors;     // max slope deviation per tau
  double order_estimate = 0.0;    // mean Richardson order between consecutive taus
  bool exact = false;             // deviations at rounding floor, order meaningless
};

RatesReport first_order_rates(const PencilFactory& factory, const PotentialField& rho,
                              const SpectralCluster& cluster, const PotentialField& sigma,
                              const std::vector<double>& taus,
                              const SolveOptions& opts = {});

struct SplittingReport {
  SpectralCluster cluster;
  PotentialField sigma;
  Eigen::MatrixXd s_matrix;
  Eigen::VectorXd predicted_slopes;
  double tau = 0.0;
  int halvings = 0;
  Eigen::VectorXd lambdas_before;
  Eigen::VectorXd lambdas_after;
  double gap_after = 0.0;  // min consecutive gap within the tracked cluster
  double eps_budget = 0.0;
  PotentialField rho_after;
};

// Separates a degenerate cluster with sigma = (product of its first two
// eigenfunctions) and the largest admissible tau = eps / (2 sup|sigma|),
// halving until exactly h eigenvalues stay in the isolation interval and at
// least two of them split beyond the cluster tolerance.
SplittingReport split_cluster(const PencilFactory& factory, const PotentialField& rho,
                              const SpectralCluster& cluster, double eps,
                              double cluster_rel_tol = 1e-6,
                              const SolveOptions& opts = {});

struct SimplificationTrace {
  std::vector<SplittingReport> steps;
  PotentialField rho_final;
  int n = 0;
  double min_gap_final = 0.0;
  double total_perturbation = 0.0;
};

// Iterated splitting until the first n eigenvalues are pairwise separated
// beyond the cluster tolerance; total potential change stays below eps.
SimplificationTrace simplify_spectrum(const PencilFactory& factory,
                                      const PotentialField& rho, int n, double eps,
                                      double cluster_rel_tol = 1e-6,
                                      const SolveOptions& opts = {});

// Half the minimal gap among the first n+1 eigenvalues: every potential
// within this sup-norm radius keeps the first n eigenvalues simple.
double openness_radius(const EigenDecomposition& decomp, int n,
                       double cluster_rel_tol = 1e-6);

}  // namespace degeneig
