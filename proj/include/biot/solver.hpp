#pragma once

#include "biot/common.hpp"
#include "biot/sparse.hpp"

#include <Eigen/SparseCholesky>

#include <functional>
#include <memory>
#include <string>

namespace biot {

/// Raised when an SPD factorization meets a non-positive pivot.
class NotPositiveDefinite : public std::runtime_error {
public:
  NotPositiveDefinite(Index pivot, double value, const std::string& what)
      : std::runtime_error(what), pivot_(pivot), value_(value) {}
  /// Pivot position in the original (unpermuted) numbering.
  Index pivot() const { return pivot_; }
  double value() const { return value_; }

private:
  Index pivot_;
  double value_;
};

/// Sparse LDL^T factorization of an SPD matrix with a fill-reducing (AMD)
/// ordering. Immutable after construction; `solve` may be called
/// concurrently.
class SpdFactorization {
public:
  /// `label` names the matrix in error messages.
  explicit SpdFactorization(const SparseMatrix& a, std::string label = "matrix");

  Index size() const { return n_; }
  Vector solve(const Vector& b) const;
  void solve(const Vector& b, Vector& x) const;

private:
  using Solver = Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower,
                                       Eigen::AMDOrdering<int>>;
  Index n_ = 0;
  std::shared_ptr<Solver> solver_;
};

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;           // final relative preconditioned residual
  double initial_residual = 0.0;   // ||b||_{P^{-1}}
  bool converged = false;
  double seconds = 0.0;
  std::vector<double> history;     // relative residual after each iteration
};

class NotConverged : public std::runtime_error {
public:
  NotConverged(Vector x, SolveReport report)
      : std::runtime_error("MinRes did not converge in " + std::to_string(report.iterations) +
                           " iterations (relative residual " + std::to_string(report.residual) +
                           ")"),
        x_(std::move(x)),
        report_(std::move(report)) {}
  const Vector& best_iterate() const { return x_; }
  const SolveReport& report() const { return report_; }

private:
  Vector x_;
  SolveReport report_;
};

class Breakdown : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using LinearOperator = std::function<void(const Vector&, Vector&)>;

struct MinresOptions {
  double rtol = 1e-8;
  int maxit = 1000;
};

/// Preconditioned MINRES for symmetric (possibly indefinite) A with an SPD
/// preconditioner applied through its inverse. Stops when
/// ||b - A x||_{P^{-1}} <= rtol ||b||_{P^{-1}}, starting from x = 0.
/// Throws NotConverged (carrying the last iterate) when maxit is exhausted,
/// Breakdown when the preconditioner is found indefinite.
Vector minres(const LinearOperator& apply_a, const LinearOperator& apply_pinv, const Vector& b,
              const MinresOptions& options, SolveReport* report = nullptr);

/// Inverse of the block-diagonal preconditioner diag(P_V, P_Qc, P_Q0),
/// applied blockwise to a vector ordered (u, p^c, p^0).
class BlockPreconditioner {
public:
  BlockPreconditioner(std::shared_ptr<const SpdFactorization> pv,
                      std::shared_ptr<const SpdFactorization> pqc,
                      std::shared_ptr<const SpdFactorization> pq0);

  Index size() const { return nu_ + nc_ + n0_; }
  void apply(const Vector& r, Vector& z) const;
  Vector apply(const Vector& r) const;
  LinearOperator as_operator() const;

private:
  std::shared_ptr<const SpdFactorization> pv_, pqc_, pq0_;
  Index nu_, nc_, n0_;
};

}  // namespace biot
