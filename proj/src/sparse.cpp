#include "biot/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace biot {

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols, std::vector<Triplet> triplets) {
  SparseMatrix m(rows, cols);
  std::vector<Index> order(triplets.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const Triplet& ta = triplets[a];
    const Triplet& tb = triplets[b];
    return ta.row != tb.row ? ta.row < tb.row : ta.col < tb.col;
  });
  m.col_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  Index last_row = -1, last_col = -1;
  for (Index k : order) {
    const Triplet& t = triplets[k];
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw InternalError("triplet index out of range");
    }
    if (t.row == last_row && t.col == last_col) {
      m.values_.back() += t.value;
    } else {
      m.col_idx_.push_back(t.col);
      m.values_.push_back(t.value);
      ++m.row_ptr_[t.row + 1];
      last_row = t.row;
      last_col = t.col;
    }
  }
  std::partial_sum(m.row_ptr_.begin(), m.row_ptr_.end(), m.row_ptr_.begin());
  return m;
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (Index i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(t));
}

double SparseMatrix::coeff(Index i, Index j) const {
  const auto first = col_idx_.begin() + row_ptr_[i];
  const auto last = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? values_[it - col_idx_.begin()] : 0.0;
}

void SparseMatrix::multiply(const Vector& x, Vector& y, Exec exec) const {
  if (x.size() != cols_) throw InternalError("matrix-vector dimension mismatch");
  y.resize(rows_);
  const Index* rp = row_ptr_.data();
  const Index* ci = col_idx_.data();
  const double* v = values_.data();
  const double* xp = x.data();
  double* yp = y.data();
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (Index i = 0; i < rows_; ++i) {
    double sum = 0.0;
    for (Index k = rp[i]; k < rp[i + 1]; ++k) sum += v[k] * xp[ci[k]];
    yp[i] = sum;
  }
}

Vector SparseMatrix::operator*(const Vector& x) const {
  Vector y;
  multiply(x, y);
  return y;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) t.push_back({col_idx_[k], i, values_[k]});
  }
  return from_triplets(cols_, rows_, std::move(t));
}

SparseMatrix SparseMatrix::add(const SparseMatrix& other, double s) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw InternalError("sparse add dimension mismatch");
  }
  std::vector<Triplet> t;
  t.reserve(values_.size() + other.values_.size());
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) t.push_back({i, col_idx_[k], values_[k]});
    for (Index k = other.row_ptr_[i]; k < other.row_ptr_[i + 1]; ++k) {
      t.push_back({i, other.col_idx_[k], s * other.values_[k]});
    }
  }
  return from_triplets(rows_, cols_, std::move(t));
}

SparseMatrix SparseMatrix::scaled(double s) const {
  SparseMatrix m = *this;
  for (double& v : m.values_) v *= s;
  return m;
}

SparseMatrix SparseMatrix::block(Index row0, Index col0, Index nrows, Index ncols) const {
  std::vector<Triplet> t;
  for (Index i = row0; i < row0 + nrows; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const Index j = col_idx_[k];
      if (j >= col0 && j < col0 + ncols) t.push_back({i - row0, j - col0, values_[k]});
    }
  }
  return from_triplets(nrows, ncols, std::move(t));
}

SparseMatrix SparseMatrix::remove_index(Index k) const {
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (Index i = 0; i < rows_; ++i) {
    if (i == k) continue;
    for (Index m = row_ptr_[i]; m < row_ptr_[i + 1]; ++m) {
      const Index j = col_idx_[m];
      if (j == k) continue;
      t.push_back({i < k ? i : i - 1, j < k ? j : j - 1, values_[m]});
    }
  }
  return from_triplets(rows_ - 1, cols_ - 1, std::move(t));
}

double SparseMatrix::asymmetry() const {
  if (rows_ != cols_) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      worst = std::max(worst, std::abs(values_[k] - coeff(col_idx_[k], i)));
    }
  }
  return worst;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Eigen::SparseMatrix<double> SparseMatrix::to_eigen() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(values_.size());
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) t.emplace_back(i, col_idx_[k], values_[k]);
  }
  Eigen::SparseMatrix<double> m(rows_, cols_);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) += values_[k];
  }
  return d;
}

void SparseMatrix::write_coordinate(std::ostream& os) const {
  os.precision(17);
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      os << i << ' ' << col_idx_[k] << ' ' << values_[k] << '\n';
    }
  }
}

SparseMatrix block_matrix(const SparseMatrix& a, const SparseMatrix& b, const SparseMatrix& c,
                          const SparseMatrix& d) {
  if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() ||
      b.cols() != d.cols()) {
    throw InternalError("block matrix dimension mismatch");
  }
  const Index n0 = a.rows();
  const Index m0 = a.cols();
  std::vector<Triplet> t;
  t.reserve(a.nonzeros() + b.nonzeros() + c.nonzeros() + d.nonzeros());
  const auto append = [&](const SparseMatrix& m, Index r0, Index c0) {
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) {
        t.push_back({r0 + i, c0 + m.col_idx()[k], m.values()[k]});
      }
    }
  };
  append(a, 0, 0);
  append(b, 0, m0);
  append(c, n0, 0);
  append(d, n0, m0);
  return SparseMatrix::from_triplets(n0 + c.rows(), m0 + b.cols(), std::move(t));
}

}  // namespace biot
