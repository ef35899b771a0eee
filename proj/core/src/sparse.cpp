#include "degeneig/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "degeneig/errors.hpp"
#include "degeneig/io.hpp"

namespace degeneig {

SparseSymMatrix SparseSymMatrix::from_triplets(int n, std::vector<Triplet> entries) {
  if (n < 0) throw InvalidArgumentError("matrix dimension must be >= 0");
  for (Triplet& t : entries) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
      throw InvalidArgumentError("triplet index out of range");
    }
    if (!std::isfinite(t.value)) {
      throw InvalidArgumentError("non-finite matrix entry");
    }
    if (t.col > t.row) std::swap(t.row, t.col);
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseSymMatrix m;
  m.n_ = n;
  m.row_ptr_.assign(n + 1, 0);
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < entries.size() && entries[j].row == entries[i].row &&
           entries[j].col == entries[i].col) {
      sum += entries[j].value;
      ++j;
    }
    m.col_idx_.push_back(entries[i].col);
    m.values_.push_back(sum);
    ++m.row_ptr_[entries[i].row + 1];
    i = j;
  }
  for (int r = 0; r < n; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

Eigen::VectorXd SparseSymMatrix::apply(const Eigen::VectorXd& x) const {
  if (x.size() != n_) throw InvalidArgumentError("vector dimension mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
  for (int r = 0; r < n_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int c = col_idx_[k];
      const double v = values_[k];
      y[r] += v * x[c];
      if (c != r) y[c] += v * x[r];
    }
  }
  return y;
}

double SparseSymMatrix::quadratic_form(const Eigen::VectorXd& x) const {
  return bilinear_form(x, x);
}

double SparseSymMatrix::bilinear_form(const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& y) const {
  if (x.size() != n_ || y.size() != n_) {
    throw InvalidArgumentError("vector dimension mismatch");
  }
  double acc = 0.0;
  for (int r = 0; r < n_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int c = col_idx_[k];
      const double v = values_[k];
      acc += v * x[r] * y[c];
      if (c != r) acc += v * x[c] * y[r];
    }
  }
  return acc;
}

Eigen::SparseMatrix<double> SparseSymMatrix::to_eigen_lower() const {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(values_.size());
  for (int r = 0; r < n_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      trips.emplace_back(r, col_idx_[k], values_[k]);
    }
  }
  Eigen::SparseMatrix<double> out(n_, n_);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

void SparseSymMatrix::dump(std::ostream& os) const {
  os << "sym " << n_ << ' ' << values_.size() << '\n';
  for (int r = 0; r < n_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      os << r << ' ' << col_idx_[k] << ' ' << fmt17(values_[k]) << '\n';
    }
  }
}

SparseSymMatrix add_matrices(const SparseSymMatrix& a, double sa,
                             const SparseSymMatrix& b, double sb) {
  if (a.dim() != b.dim()) throw InvalidArgumentError("matrix dimension mismatch");
  std::vector<Triplet> entries;
  entries.reserve(a.nnz_lower() + b.nnz_lower());
  for (int r = 0; r < a.dim(); ++r) {
    for (int k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k) {
      entries.push_back({r, a.col_idx()[k], sa * a.values()[k]});
    }
    for (int k = b.row_ptr()[r]; k < b.row_ptr()[r + 1]; ++k) {
      entries.push_back({r, b.col_idx()[k], sb * b.values()[k]});
    }
  }
  return SparseSymMatrix::from_triplets(a.dim(), std::move(entries));
}

}  // namespace degeneig
