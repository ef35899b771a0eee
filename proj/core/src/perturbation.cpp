#include "degeneig/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "degeneig/errors.hpp"

namespace degeneig {

namespace {

constexpr int kMaxHalvings = 20;

double cluster_threshold(double rel_tol, double lambda_ref) {
  return rel_tol * std::max(1.0, std::abs(lambda_ref));
}

// k large enough to expose the cluster plus one neighbor above it.
int window_k(const SolveOptions& opts, int needed) {
  return std::max(opts.k, needed);
}

void check_cluster(const EigenDecomposition& decomp, const SpectralCluster& cluster) {
  if (cluster.first < 0 || cluster.h < 1 || cluster.last() >= decomp.k()) {
    throw InvalidArgumentError("cluster indices outside the decomposition");
  }
}

// Isolation interval around the cluster: midpoints toward the neighboring
// eigenvalues, unbounded below when the cluster starts the spectrum.
struct Interval {
  double lo;
  double hi;
  bool contains(double x) const { return x > lo && x < hi; }
};

Interval isolation_interval(const Eigen::VectorXd& lambdas, const SpectralCluster& c) {
  if (c.last() + 1 >= lambdas.size()) {
    throw InvalidArgumentError(
        "cluster reaches the end of the solve window; increase k");
  }
  double hi = 0.5 * (lambdas(c.last()) + lambdas(c.last() + 1));
  double lo = c.first > 0 ? 0.5 * (lambdas(c.first - 1) + lambdas(c.first))
                          : -std::numeric_limits<double>::infinity();
  return {lo, hi};
}

// Locate the perturbed cluster by M-projection onto the unperturbed cluster
// basis, falling back to the original index range when projections are
// ambiguous. Returns indices sorted ascending.
std::vector<int> track_cluster(const EigenDecomposition& base,
                               const SpectralCluster& cluster,
                               const SparseSymMatrix& mass,
                               const EigenDecomposition& perturbed) {
  Eigen::MatrixXd basis = base.vectors.middleCols(cluster.first, cluster.h);
  std::vector<std::pair<double, int>> mass_in_span;
  for (int j = 0; j < perturbed.k(); ++j) {
    Eigen::VectorXd c = basis.transpose() * mass.apply(perturbed.vectors.col(j));
    mass_in_span.push_back({c.norm(), j});
  }
  std::sort(mass_in_span.begin(), mass_in_span.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<int> picked;
  for (int m = 0; m < cluster.h; ++m) picked.push_back(mass_in_span[m].second);
  if (mass_in_span[cluster.h - 1].first < 0.5) {
    picked.clear();
    for (int i = cluster.first; i <= cluster.last(); ++i) picked.push_back(i);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace

PotentialField PotentialField::zero(int nv) {
  if (nv < 1) throw InvalidArgumentError("vertex count must be positive");
  return {std::vector<double>(static_cast<size_t>(nv), 0.0)};
}

PotentialField PotentialField::constant(int nv, double c) {
  if (nv < 1) throw InvalidArgumentError("vertex count must be positive");
  if (!std::isfinite(c)) throw InvalidArgumentError("potential value is not finite");
  return {std::vector<double>(static_cast<size_t>(nv), c)};
}

double PotentialField::sup_norm() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

bool PotentialField::is_zero() const {
  for (double v : values) {
    if (v != 0.0) return false;
  }
  return true;
}

void PotentialField::validate() const {
  if (values.empty()) throw InvalidArgumentError("potential field is empty");
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgumentError("potential value is not finite");
  }
}

PotentialField add_scaled(const PotentialField& base, double scale,
                          const PotentialField& direction) {
  if (base.values.size() != direction.values.size()) {
    throw InvalidArgumentError("potential field lengths differ");
  }
  if (!std::isfinite(scale)) throw InvalidArgumentError("scale is not finite");
  PotentialField out = base;
  for (size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] += scale * direction.values[i];
  }
  return out;
}

double sup_diff(const PotentialField& a, const PotentialField& b) {
  if (a.values.size() != b.values.size()) {
    throw InvalidArgumentError("potential field lengths differ");
  }
  double s = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    s = std::max(s, std::abs(a.values[i] - b.values[i]));
  }
  return s;
}

PencilFactory::PencilFactory(const Mesh& mesh, const WeightSpec& spec)
    : mesh_(&mesh), spec_(spec), sys_(build_system(mesh, spec)) {}

SparseSymMatrix PencilFactory::reduced_potential(const PotentialField& rho) const {
  rho.validate();
  if (static_cast<int>(rho.values.size()) != mesh_->nv()) {
    throw InvalidArgumentError("potential field length does not match vertex count");
  }
  return reduce_matrix(assemble_potential(*mesh_, rho.values), sys_.interior_index);
}

SparseSymMatrix PencilFactory::effective_stiffness(const PotentialField& rho) const {
  if (rho.is_zero()) return sys_.stiffness;
  return add_matrices(sys_.stiffness, 1.0, reduced_potential(rho), 1.0);
}

EigenDecomposition PencilFactory::solve(const PotentialField& rho,
                                        const SolveOptions& opts) const {
  SolveOptions o = opts;
  double rho_min = 0.0;
  for (double v : rho.values) rho_min = std::min(rho_min, v);
  o.shift = rho_min - 1.0;
  if (rho.is_zero()) return solve_eigs(sys_.stiffness, sys_.mass, o);
  SparseSymMatrix m_rho = reduced_potential(rho);
  return solve_eigs(sys_.stiffness, sys_.mass, &m_rho, o);
}

PotentialField PencilFactory::vertex_product(const EigenDecomposition& decomp, int i,
                                             int j) const {
  if (i < 0 || j < 0 || i >= decomp.k() || j >= decomp.k()) {
    throw InvalidArgumentError("eigenfunction index outside the decomposition");
  }
  std::vector<double> a = sys_.to_full(decomp.vectors.col(i));
  std::vector<double> b = sys_.to_full(decomp.vectors.col(j));
  PotentialField out;
  out.values.resize(a.size());
  for (size_t v = 0; v < a.size(); ++v) out.values[v] = a[v] * b[v];
  return out;
}

LipschitzReport lipschitz_check(const PencilFactory& factory,
                                const PotentialField& rho1, const PotentialField& rho2,
                                int n, const SolveOptions& opts) {
  if (n < 1) throw InvalidArgumentError("eigenvalue count must be >= 1");
  SolveOptions o = opts;
  o.k = n;
  EigenDecomposition d1 = factory.solve(rho1, o);
  EigenDecomposition d2 = factory.solve(rho2, o);

  LipschitzReport report;
  report.sup_rho_diff = sup_diff(rho1, rho2);
  report.bound = report.sup_rho_diff + 1e-8 * (1.0 + report.sup_rho_diff);
  for (int i = 0; i < n; ++i) {
    report.max_diff = std::max(report.max_diff, std::abs(d1.lambdas(i) - d2.lambdas(i)));
  }
  report.max_violation = std::max(0.0, report.max_diff - report.bound);
  report.pass = report.max_diff <= report.bound;
  return report;
}

Eigen::MatrixXd interaction_matrix(const EigenDecomposition& decomp,
                                   const SpectralCluster& cluster,
                                   const SparseSymMatrix& m_sigma) {
  check_cluster(decomp, cluster);
  if (m_sigma.dim() != decomp.dim()) {
    throw InvalidArgumentError("potential matrix dimension does not match decomposition");
  }
  Eigen::MatrixXd s(cluster.h, cluster.h);
  for (int a = 0; a < cluster.h; ++a) {
    Eigen::VectorXd m_phi = m_sigma.apply(decomp.vectors.col(cluster.first + a));
    for (int b = 0; b < cluster.h; ++b) {
      s(a, b) = decomp.vectors.col(cluster.first + b).dot(m_phi);
    }
  }
  s = 0.5 * (s + s.transpose()).eval();
  return s;
}

RatesReport first_order_rates(const PencilFactory& factory, const PotentialField& rho,
                              const SpectralCluster& cluster, const PotentialField& sigma,
                              const std::vector<double>& taus, const SolveOptions& opts) {
  if (taus.size() < 2) throw InvalidArgumentError("need at least two tau values");
  for (size_t m = 0; m < taus.size(); ++m) {
    if (!(taus[m] > 0)) throw InvalidArgumentError("tau values must be positive");
    if (m > 0 && !(taus[m] < taus[m - 1])) {
      throw InvalidArgumentError("tau values must be strictly decreasing");
    }
  }
  if (!(taus.back() >= 1e-6)) {
    throw InvalidArgumentError("smallest tau must be >= 1e-6");
  }
  sigma.validate();

  SolveOptions o = opts;
  o.k = window_k(opts, cluster.last() + 2);
  EigenDecomposition base = factory.solve(rho, o);
  check_cluster(base, cluster);
  const double lambda_ref = base.lambdas.segment(cluster.first, cluster.h).mean();
  const Interval box = isolation_interval(base.lambdas, cluster);

  RatesReport report;
  report.taus = taus;
  Eigen::MatrixXd s = interaction_matrix(base, cluster, factory.reduced_potential(sigma));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  report.predicted = es.eigenvalues();
  report.slopes_at_tau.resize(static_cast<int>(taus.size()), cluster.h);

  for (size_t m = 0; m < taus.size(); ++m) {
    const double tau = taus[m];
    EigenDecomposition pert = factory.solve(add_scaled(rho, tau, sigma), o);
    std::vector<int> picked = track_cluster(base, cluster, factory.system().mass, pert);
    double max_err = 0.0;
    for (int a = 0; a < cluster.h; ++a) {
      double lambda_tau = pert.lambdas(picked[a]);
      if (!box.contains(lambda_tau)) {
        std::ostringstream msg;
        msg << "cluster member at tau=" << tau << " left the isolation interval";
        throw ClusterTrackingError(msg.str());
      }
      double slope = (lambda_tau - lambda_ref) / tau;
      report.slopes_at_tau(static_cast<int>(m), a) = slope;
      max_err = std::max(max_err, std::abs(slope - report.predicted(a)));
    }
    report.errors.push_back(max_err);
  }

  const double floor = 1e-11 * std::max(1.0, std::abs(lambda_ref));
  double worst = *std::max_element(report.errors.begin(), report.errors.end());
  if (worst <= floor) {
    report.exact = true;
    report.order_estimate = 0.0;
    return report;
  }
  double acc = 0.0;
  int used = 0;
  for (size_t m = 0; m + 1 < taus.size(); ++m) {
    if (report.errors[m] <= 0 || report.errors[m + 1] <= 0) continue;
    acc += std::log(report.errors[m] / report.errors[m + 1]) /
           std::log(taus[m] / taus[m + 1]);
    ++used;
  }
  report.order_estimate = used > 0 ? acc / used : 0.0;
  return report;
}

SplittingReport split_cluster(const PencilFactory& factory, const PotentialField& rho,
                              const SpectralCluster& cluster, double eps,
                              double cluster_rel_tol, const SolveOptions& opts) {
  if (cluster.h < 2) {
    throw InvalidArgumentError("splitting needs a cluster of multiplicity >= 2");
  }
  if (!(eps > 0)) throw InvalidArgumentError("perturbation budget must be positive");

  SolveOptions o = opts;
  o.k = window_k(opts, cluster.last() + 2);
  EigenDecomposition base = factory.solve(rho, o);
  check_cluster(base, cluster);
  const double lambda_ref = base.lambdas.segment(cluster.first, cluster.h).mean();
  const double thresh = cluster_threshold(cluster_rel_tol, lambda_ref);
  const Interval box = isolation_interval(base.lambdas, cluster);

  SplittingReport report;
  report.cluster = cluster;
  report.cluster.lambda_ref = lambda_ref;
  report.eps_budget = eps;
  report.lambdas_before = base.lambdas.segment(cluster.first, cluster.h);
  report.sigma = factory.vertex_product(base, cluster.first, cluster.first + 1);
  const double sup = report.sigma.sup_norm();
  if (!(sup > 0)) throw SplittingError("excitation potential vanishes identically");

  SparseSymMatrix m_sigma = factory.reduced_potential(report.sigma);
  report.s_matrix = interaction_matrix(base, cluster, m_sigma);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(report.s_matrix);
  report.predicted_slopes = es.eigenvalues();

  double tau = 0.5 * eps / sup;
  for (int halvings = 0; halvings <= kMaxHalvings; ++halvings, tau *= 0.5) {
    EigenDecomposition pert = factory.solve(add_scaled(rho, tau, report.sigma), o);
    int inside = 0;
    for (int j = 0; j < pert.k(); ++j) {
      if (box.contains(pert.lambdas(j))) ++inside;
    }
    if (inside != cluster.h) continue;

    std::vector<int> picked = track_cluster(base, cluster, factory.system().mass, pert);
    bool tracked = true;
    Eigen::VectorXd after(cluster.h);
    for (int a = 0; a < cluster.h; ++a) {
      after(a) = pert.lambdas(picked[a]);
      if (!box.contains(after(a))) tracked = false;
    }
    if (!tracked) continue;

    double min_gap = std::numeric_limits<double>::infinity();
    double max_gap = 0.0;
    for (int a = 0; a + 1 < cluster.h; ++a) {
      min_gap = std::min(min_gap, after(a + 1) - after(a));
      max_gap = std::max(max_gap, after(a + 1) - after(a));
    }
    if (max_gap > thresh) {
      report.tau = tau;
      report.halvings = halvings;
      report.lambdas_after = after;
      report.gap_after = min_gap;
      report.rho_after = add_scaled(rho, tau, report.sigma);
      return report;
    }
  }
  std::ostringstream msg;
  msg << "no admissible tau in " << kMaxHalvings + 1 << " attempts from "
      << 0.5 * eps / sup << "; cluster spread stayed within " << thresh;
  throw SplittingError(msg.str());
}

SimplificationTrace simplify_spectrum(const PencilFactory& factory,
                                      const PotentialField& rho, int n, double eps,
                                      double cluster_rel_tol, const SolveOptions& opts) {
  if (n < 1) throw InvalidArgumentError("target count must be >= 1");
  if (!(eps > 0)) throw InvalidArgumentError("total budget must be positive");

  SolveOptions o = opts;
  o.k = window_k(opts, n + 2);

  SimplificationTrace trace;
  trace.n = n;
  trace.rho_final = rho;

  auto lowest_degenerate = [&](const EigenDecomposition& d) -> SpectralCluster {
    std::vector<SpectralCluster> clusters = cluster_eigenvalues(d, cluster_rel_tol);
    for (const SpectralCluster& c : clusters) {
      if (c.h >= 2 && c.first < n) return c;
    }
    return {};  // h = 1 marks "none"
  };

  EigenDecomposition d = factory.solve(rho, o);
  int h_total = 0;
  for (const SpectralCluster& c : cluster_eigenvalues(d, cluster_rel_tol)) {
    if (c.first < n) h_total += c.h - 1;
  }

  if (h_total > 0) {
    const double step_budget = eps / h_total;
    for (int step = 0; step < h_total; ++step) {
      SpectralCluster target = lowest_degenerate(d);
      if (target.h < 2) break;
      SplittingReport rep = split_cluster(factory, trace.rho_final, target, step_budget,
                                          cluster_rel_tol, opts);
      trace.total_perturbation += sup_diff(rep.rho_after, trace.rho_final);
      trace.rho_final = rep.rho_after;
      trace.steps.push_back(std::move(rep));
      d = factory.solve(trace.rho_final, o);
    }
    if (lowest_degenerate(d).h >= 2) {
      throw SimplificationError("degenerate cluster persists after the step cap");
    }
  }

  trace.min_gap_final = std::numeric_limits<double>::infinity();
  for (int j = 0; j + 1 <= n && j + 1 < d.k(); ++j) {
    trace.min_gap_final = std::min(trace.min_gap_final, d.lambdas(j + 1) - d.lambdas(j));
  }
  return trace;
}

double openness_radius(const EigenDecomposition& decomp, int n, double cluster_rel_tol) {
  if (n < 1) throw InvalidArgumentError("eigenvalue count must be >= 1");
  if (decomp.k() < n + 1) {
    throw InvalidArgumentError("openness radius needs k >= n + 1 eigenvalues");
  }
  double delta = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    double gap = decomp.lambdas(j + 1) - decomp.lambdas(j);
    if (gap <= cluster_threshold(cluster_rel_tol, decomp.lambdas(j))) {
      throw PreconditionError("first n eigenvalues are not simple");
    }
    delta = std::min(delta, gap);
  }
  return 0.5 * delta;
}

}  // namespace degeneig
