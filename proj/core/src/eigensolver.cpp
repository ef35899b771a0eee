#include "degeneig/eigensolver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "degeneig/errors.hpp"
#include "degeneig/rng.hpp"

namespace degeneig {

namespace {

constexpr int kDenseCutoff = 96;
constexpr int kFactorizationRetries = 3;
constexpr int kStartBlockRetries = 5;

Eigen::MatrixXd apply_block(const SparseSymMatrix& a, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd y(x.rows(), x.cols());
  for (int j = 0; j < x.cols(); ++j) y.col(j) = a.apply(x.col(j));
  return y;
}

Eigen::MatrixXd dense_of(const SparseSymMatrix& a) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.dim(), a.dim());
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& vals = a.values();
  for (int r = 0; r < a.dim(); ++r) {
    for (int p = rp[r]; p < rp[r + 1]; ++p) {
      d(r, ci[p]) = vals[p];
      d(ci[p], r) = vals[p];
    }
  }
  return d;
}

void fill_random(Eigen::MatrixXd& x, Rng& rng) {
  for (int j = 0; j < x.cols(); ++j) {
    for (int i = 0; i < x.rows(); ++i) x(i, j) = rng.uniform(-1.0, 1.0);
  }
}

// X <- X R^{-1} with R^T R = X^T M X (two passes for orthogonality to
// rounding). Returns false when the Gram matrix is numerically singular.
bool m_orthonormalize(const SparseSymMatrix& mass, Eigen::MatrixXd& x) {
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::MatrixXd mx = apply_block(mass, x);
    Eigen::MatrixXd g = x.transpose() * mx;
    g = 0.5 * (g + g.transpose()).eval();
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) return false;
    Eigen::MatrixXd xt = llt.matrixL().solve(x.transpose());
    x = xt.transpose();
  }
  return true;
}

void apply_sign_convention(Eigen::MatrixXd& vectors) {
  for (int j = 0; j < vectors.cols(); ++j) {
    int arg = 0;
    double best = std::abs(vectors(0, j));
    for (int i = 1; i < vectors.rows(); ++i) {
      double v = std::abs(vectors(i, j));
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    if (vectors(arg, j) < 0) vectors.col(j) = -vectors.col(j);
  }
}

Eigen::VectorXd pair_residuals(const SparseSymMatrix& k_eff, const SparseSymMatrix& mass,
                               const Eigen::VectorXd& lambdas,
                               const Eigen::MatrixXd& vectors) {
  Eigen::VectorXd res(lambdas.size());
  for (int j = 0; j < lambdas.size(); ++j) {
    Eigen::VectorXd phi = vectors.col(j);
    Eigen::VectorXd r = k_eff.apply(phi) - lambdas(j) * mass.apply(phi);
    double nrm = phi.norm();
    res(j) = nrm > 0 ? r.norm() / nrm : r.norm();
  }
  return res;
}

// Lower estimate of the pencil spectrum from Gershgorin rows of K scaled by
// the mass diagonal; only consulted when a factorization shift fails.
double gershgorin_floor(const SparseSymMatrix& k_eff, const SparseSymMatrix& mass) {
  const int n = k_eff.dim();
  std::vector<double> diag(n, 0.0), offsum(n, 0.0), mdiag(n, 1.0);
  const auto& rp = k_eff.row_ptr();
  const auto& ci = k_eff.col_idx();
  const auto& vals = k_eff.values();
  for (int r = 0; r < n; ++r) {
    for (int p = rp[r]; p < rp[r + 1]; ++p) {
      if (ci[p] == r) {
        diag[r] += vals[p];
      } else {
        offsum[r] += std::abs(vals[p]);
        offsum[ci[p]] += std::abs(vals[p]);
      }
    }
  }
  const auto& mrp = mass.row_ptr();
  const auto& mci = mass.col_idx();
  const auto& mvals = mass.values();
  for (int r = 0; r < n; ++r) {
    for (int p = mrp[r]; p < mrp[r + 1]; ++p) {
      if (mci[p] == r) mdiag[r] = std::max(mvals[p], 1e-300);
    }
  }
  double lo = 0.0;
  for (int r = 0; r < n; ++r) {
    lo = std::min(lo, (diag[r] - offsum[r]) / mdiag[r]);
  }
  return lo;
}

EigenDecomposition solve_dense(const SparseSymMatrix& k_eff, const SparseSymMatrix& mass,
                               const SolveOptions& opts) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_of(k_eff),
                                                               dense_of(mass));
  if (es.info() != Eigen::Success) {
    throw FactorizationError("dense generalized eigensolve failed");
  }
  EigenDecomposition out;
  out.lambdas = es.eigenvalues().head(opts.k);
  out.vectors = es.eigenvectors().leftCols(opts.k);
  apply_sign_convention(out.vectors);
  out.residuals = pair_residuals(k_eff, mass, out.lambdas, out.vectors);
  out.rho_tag = opts.rho_tag;
  return out;
}

EigenDecomposition solve_iterative(const SparseSymMatrix& k_eff,
                                   const SparseSymMatrix& mass,
                                   const SolveOptions& opts) {
  const int n = k_eff.dim();
  const int p = std::min(n, opts.k + std::max(1, opts.block_extra));

  double shift = opts.shift;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower> fact;
  for (int attempt = 0;; ++attempt) {
    SparseSymMatrix shifted = add_matrices(k_eff, 1.0, mass, -shift);
    fact.compute(shifted.to_eigen_lower());
    if (fact.info() == Eigen::Success) break;
    if (attempt >= kFactorizationRetries) {
      std::ostringstream msg;
      msg << "factorization failed at shift " << shift;
      throw FactorizationError(msg.str());
    }
    shift = std::min(shift, gershgorin_floor(k_eff, mass)) - 10.0 * (1.0 + std::abs(shift));
  }

  Rng rng(opts.seed);
  Eigen::MatrixXd x(n, p);
  for (int attempt = 0;; ++attempt) {
    fill_random(x, rng);
    if (m_orthonormalize(mass, x)) break;
    if (attempt >= kStartBlockRetries) {
      throw FactorizationError("could not build an M-orthonormal start block");
    }
  }

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  double best_resid = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    Eigen::MatrixXd mx = apply_block(mass, x);
    for (int j = 0; j < p; ++j) x.col(j) = fact.solve(mx.col(j));
    if (!m_orthonormalize(mass, x)) {
      fill_random(x, rng);
      m_orthonormalize(mass, x);
      continue;
    }
    Eigen::MatrixXd h = x.transpose() * apply_block(k_eff, x);
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    theta = es.eigenvalues();
    x = (x * es.eigenvectors()).eval();

    double worst = 0.0;
    for (int j = 0; j < opts.k; ++j) {
      Eigen::VectorXd phi = x.col(j);
      double nrm = phi.norm();
      Eigen::VectorXd r = k_eff.apply(phi) - theta(j) * mass.apply(phi);
      worst = std::max(worst, nrm > 0 ? r.norm() / nrm : r.norm());
    }
    best_resid = std::min(best_resid, worst);
    if (worst <= opts.tol) {
      EigenDecomposition out;
      out.lambdas = theta.head(opts.k);
      out.vectors = x.leftCols(opts.k);
      apply_sign_convention(out.vectors);
      out.residuals = pair_residuals(k_eff, mass, out.lambdas, out.vectors);
      out.rho_tag = opts.rho_tag;
      return out;
    }
  }
  std::ostringstream msg;
  msg << "no convergence after " << opts.max_iterations
      << " iterations; best residual " << best_resid << " vs tolerance " << opts.tol;
  throw ConvergenceError(msg.str());
}

Eigen::VectorXd span_coefficients(const EigenDecomposition& decomp,
                                  const SparseSymMatrix& mass,
                                  const Eigen::VectorXd& f) {
  if (f.size() != decomp.dim()) {
    throw InvalidArgumentError("vector length does not match decomposition dimension");
  }
  Eigen::VectorXd mf = mass.apply(f);
  Eigen::VectorXd c = decomp.vectors.transpose() * mf;
  Eigen::VectorXd resid = f - decomp.vectors * c;
  double rn = std::sqrt(std::max(0.0, mass.bilinear_form(resid, resid)));
  double fn = std::sqrt(std::max(0.0, f.dot(mf)));
  if (rn > 1e-6 * fn) {
    std::ostringstream msg;
    msg << "component outside the computed span: " << rn << " vs M-norm " << fn;
    throw SpanInsufficientError(msg.str());
  }
  return c;
}

}  // namespace

EigenDecomposition solve_eigs(const SparseSymMatrix& stiffness,
                              const SparseSymMatrix& mass,
                              const SparseSymMatrix* potential,
                              const SolveOptions& opts) {
  if (mass.dim() != stiffness.dim()) {
    throw InvalidArgumentError("stiffness and mass dimensions differ");
  }
  if (potential && potential->dim() != stiffness.dim()) {
    throw InvalidArgumentError("potential matrix dimension differs from pencil");
  }
  if (opts.k < 1 || opts.k >= stiffness.dim()) {
    throw InvalidArgumentError("eigenpair count must satisfy 1 <= k < reduced dimension");
  }
  if (!(opts.tol > 0)) throw InvalidArgumentError("residual tolerance must be positive");
  if (opts.max_iterations < 1) throw InvalidArgumentError("max_iterations must be >= 1");

  if (potential) {
    SparseSymMatrix k_eff = add_matrices(stiffness, 1.0, *potential, 1.0);
    return stiffness.dim() <= kDenseCutoff ? solve_dense(k_eff, mass, opts)
                                           : solve_iterative(k_eff, mass, opts);
  }
  return stiffness.dim() <= kDenseCutoff ? solve_dense(stiffness, mass, opts)
                                         : solve_iterative(stiffness, mass, opts);
}

EigenDecomposition solve_eigs(const SparseSymMatrix& stiffness,
                              const SparseSymMatrix& mass,
                              const SolveOptions& opts) {
  return solve_eigs(stiffness, mass, nullptr, opts);
}

double rayleigh_quotient(const SparseSymMatrix& k_eff, const SparseSymMatrix& mass,
                         const Eigen::VectorXd& u) {
  if (u.size() != k_eff.dim() || u.size() != mass.dim()) {
    throw InvalidArgumentError("vector length does not match pencil dimension");
  }
  double den = mass.quadratic_form(u);
  if (!(den > 0)) throw UndefinedRatioError("Rayleigh quotient of the zero vector");
  return k_eff.quadratic_form(u) / den;
}

MinmaxReport verify_minmax(const EigenDecomposition& decomp,
                           const SparseSymMatrix& k_eff, const SparseSymMatrix& mass,
                           int i, int trials, std::uint64_t seed) {
  if (i < 1 || i > decomp.k() - 1) {
    throw InvalidArgumentError("subspace dimension must satisfy 1 <= i <= k - 1");
  }
  if (trials < 0) throw InvalidArgumentError("trial count must be nonnegative");
  const double lambda_i = decomp.lambdas(i - 1);
  const double floor = lambda_i - 1e-6 * std::abs(lambda_i);

  auto max_quotient = [&](const Eigen::MatrixXd& v) {
    Eigen::MatrixXd h = v.transpose() * apply_block(k_eff, v);
    Eigen::MatrixXd g = v.transpose() * apply_block(mass, v);
    h = 0.5 * (h + h.transpose()).eval();
    g = 0.5 * (g + g.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(h, g);
    if (es.info() != Eigen::Success) {
      throw FactorizationError("projected pencil solve failed");
    }
    return es.eigenvalues().maxCoeff();
  };

  MinmaxReport report;
  report.trials = trials;
  report.achieved = max_quotient(decomp.vectors.leftCols(i));
  report.basis_achieves =
      std::abs(report.achieved - lambda_i) <= 1e-8 * std::max(1.0, std::abs(lambda_i));

  Rng rng(seed);
  report.all_trials_ge = true;
  report.worst_trial = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd v(decomp.dim(), i);
  for (int t = 0; t < trials; ++t) {
    fill_random(v, rng);
    double q = max_quotient(v);
    report.worst_trial = std::min(report.worst_trial, q);
    if (q < floor) report.all_trials_ge = false;
  }
  if (trials == 0) report.worst_trial = report.achieved;
  return report;
}

std::vector<SpectralCluster> cluster_eigenvalues(const EigenDecomposition& decomp,
                                                 double rel_tol) {
  if (!(rel_tol > 0) || rel_tol > 1e-2) {
    throw InvalidArgumentError("cluster tolerance must lie in (0, 1e-2]");
  }
  std::vector<SpectralCluster> clusters;
  int first = 0;
  for (int j = 0; j < decomp.k(); ++j) {
    bool close_here =
        j + 1 < decomp.k() &&
        std::abs(decomp.lambdas(j + 1) - decomp.lambdas(j)) <=
            rel_tol * std::max(1.0, std::abs(decomp.lambdas(j)));
    if (!close_here) {
      SpectralCluster c;
      c.first = first;
      c.h = j - first + 1;
      c.lambda_ref = decomp.lambdas.segment(first, c.h).mean();
      clusters.push_back(c);
      first = j + 1;
    }
  }
  return clusters;
}

Eigen::VectorXd projector_apply(const EigenDecomposition& decomp,
                                const SpectralCluster& cluster,
                                const SparseSymMatrix& mass,
                                const Eigen::VectorXd& f) {
  if (cluster.first < 0 || cluster.last() >= decomp.k()) {
    throw InvalidArgumentError("cluster indices outside the decomposition");
  }
  if (f.size() != decomp.dim()) {
    throw InvalidArgumentError("vector length does not match decomposition dimension");
  }
  Eigen::VectorXd mf = mass.apply(f);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(f.size());
  for (int i = cluster.first; i <= cluster.last(); ++i) {
    out += decomp.vectors.col(i).dot(mf) * decomp.vectors.col(i);
  }
  return out;
}

Eigen::VectorXd pseudo_inverse_apply(const EigenDecomposition& decomp,
                                     const SpectralCluster& cluster,
                                     const SparseSymMatrix& mass,
                                     const Eigen::VectorXd& f) {
  if (cluster.first < 0 || cluster.last() >= decomp.k()) {
    throw InvalidArgumentError("cluster indices outside the decomposition");
  }
  Eigen::VectorXd c = span_coefficients(decomp, mass, f);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(f.size());
  for (int i = 0; i < decomp.k(); ++i) {
    if (cluster.contains(i)) continue;
    out -= c(i) / (decomp.lambdas(i) - cluster.lambda_ref) * decomp.vectors.col(i);
  }
  return out;
}

double spectral_h2_norm(const EigenDecomposition& decomp, const SparseSymMatrix& mass,
                        const Eigen::VectorXd& u) {
  Eigen::VectorXd c = span_coefficients(decomp, mass, u);
  double acc = 0.0;
  for (int i = 0; i < decomp.k(); ++i) {
    acc += c(i) * c(i) * decomp.lambdas(i) * decomp.lambdas(i);
  }
  return std::sqrt(acc);
}

}  // namespace degeneig
