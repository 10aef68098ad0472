#pragma once

#include "biot/common.hpp"

#include <Eigen/SparseCore>

#include <iosfwd>
#include <vector>

namespace biot {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed sparse row matrix.
///
/// Built from triplets in a deterministic way: duplicates are summed in
/// insertion order, so a fixed triplet sequence gives bit-identical values.
/// All assembled entries are kept, including exact zeros.
class SparseMatrix {
public:
  SparseMatrix() = default;
  SparseMatrix(Index rows, Index cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  static SparseMatrix from_triplets(Index rows, Index cols, std::vector<Triplet> triplets);
  static SparseMatrix identity(Index n);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index nonzeros() const { return static_cast<Index>(values_.size()); }

  const std::vector<Index>& row_ptr() const { return row_ptr_; }
  const std::vector<Index>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  /// Entry lookup by binary search; zero when not stored.
  double coeff(Index i, Index j) const;

  /// y = A x. The parallel path splits rows across threads; each row is
  /// summed in the same order, so both paths agree bitwise.
  void multiply(const Vector& x, Vector& y, Exec exec = Exec::parallel) const;
  Vector operator*(const Vector& x) const;

  SparseMatrix transpose() const;
  /// this + s * other (patterns may differ).
  SparseMatrix add(const SparseMatrix& other, double s = 1.0) const;
  SparseMatrix scaled(double s) const;
  /// Principal submatrix on the index range [begin, begin + size).
  SparseMatrix block(Index row0, Index col0, Index nrows, Index ncols) const;
  /// Square matrix with row and column k deleted.
  SparseMatrix remove_index(Index k) const;

  /// max |A_ij - A_ji| over the stored pattern union.
  double asymmetry() const;
  double max_abs() const;
  bool symmetric() const { return rows_ == cols_ && asymmetry() == 0.0; }

  double quadratic_form(const Vector& x) const { return x.dot(*this * x); }

  Eigen::SparseMatrix<double> to_eigen() const;
  Eigen::MatrixXd to_dense() const;

  /// Coordinate dump "row col value" with one entry per line.
  void write_coordinate(std::ostream& os) const;

private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

/// Assembles [[a, b],[c, d]] from four blocks with matching dimensions.
SparseMatrix block_matrix(const SparseMatrix& a, const SparseMatrix& b, const SparseMatrix& c,
                          const SparseMatrix& d);

}  // namespace biot
