#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <vector>

namespace degeneig {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Symmetric sparse matrix storing the lower triangle in CSR. Symmetry is
// structural: only (row >= col) entries exist, and every product routine
// mirrors them. Stiffness and mass instances share the mesh connectivity
// pattern because element loops insert explicit zeros.
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;

  // Accumulates duplicate entries. Entries given in the upper triangle are
  // mirrored into the lower one. Throws InvalidArgumentError on bad indices
  // or non-finite values.
  static SparseSymMatrix from_triplets(int n, std::vector<Triplet> entries);

  int dim() const { return n_; }
  std::size_t nnz_lower() const { return values_.size(); }

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  double quadratic_form(const Eigen::VectorXd& x) const;
  double bilinear_form(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  // Lower-triangular Eigen copy; pair with Eigen::Lower solvers.
  Eigen::SparseMatrix<double> to_eigen_lower() const;

  // Coordinate text dump: header "sym <dim> <nnz>", then one
  // "<row> <col> <value>" line per stored lower-triangle entry.
  void dump(std::ostream& os) const;

 private:
  int n_ = 0;
  std::vector<int> row_ptr_;
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

// sa*A + sb*B for matrices of equal dimension.
SparseSymMatrix add_matrices(const SparseSymMatrix& a, double sa,
                             const SparseSymMatrix& b, double sb);

}  // namespace degeneig
