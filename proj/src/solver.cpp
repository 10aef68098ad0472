#include "biot/solver.hpp"

#include <chrono>
#include <limits>
#include <cmath>

namespace biot {

SpdFactorization::SpdFactorization(const SparseMatrix& a, std::string label)
    : n_(a.rows()), solver_(std::make_shared<Solver>()) {
  if (a.rows() != a.cols()) throw InternalError(label + ": factorization of a non-square matrix");
  solver_->compute(a.to_eigen());
  const bool failed = solver_->info() != Eigen::Success;
  const Vector d = failed ? Vector() : Vector(solver_->vectorD());
  Index bad = -1;
  double bad_value = 0.0;
  if (failed) {
    bad = 0;
  } else {
    for (Index k = 0; k < d.size(); ++k) {
      if (!(d[k] > 0.0)) {
        bad = k;
        bad_value = d[k];
        break;
      }
    }
  }
  if (bad >= 0) {
    // Report the pivot in the caller's numbering.
    Index original = bad;
    if (!failed && solver_->permutationPinv().size() == n_) {
      original = solver_->permutationPinv().indices()[bad];
    }
    throw NotPositiveDefinite(original, bad_value,
                              label + ": non-positive pivot " + std::to_string(bad_value) +
                                  " at index " + std::to_string(original));
  }
}

void SpdFactorization::solve(const Vector& b, Vector& x) const {
  if (b.size() != n_) throw InternalError("factor solve dimension mismatch");
  x = solver_->solve(b);
}

Vector SpdFactorization::solve(const Vector& b) const {
  Vector x;
  solve(b, x);
  return x;
}

Vector minres(const LinearOperator& apply_a, const LinearOperator& apply_pinv, const Vector& b,
              const MinresOptions& options, SolveReport* report) {
  const auto start = std::chrono::steady_clock::now();
  const Index n = b.size();
  SolveReport rep;
  Vector x = Vector::Zero(n);

  // Lanczos vectors in the P-inner product: v holds unpreconditioned
  // residual directions, z = P^{-1} v.
  Vector r1 = b;
  Vector y(n);
  apply_pinv(r1, y);
  double beta1 = r1.dot(y);
  if (beta1 < 0.0) throw Breakdown("preconditioner is not positive definite");
  beta1 = std::sqrt(beta1);
  rep.initial_residual = beta1;

  const auto finish = [&](bool converged) {
    rep.converged = converged;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (report) *report = rep;
  };
  if (beta1 == 0.0) {
    finish(true);
    return x;
  }

  Vector r2 = r1;
  Vector v(n), w = Vector::Zero(n), w1 = Vector::Zero(n), w2 = Vector::Zero(n), av(n);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;

  for (int it = 1; it <= options.maxit; ++it) {
    v = y / beta;
    apply_a(v, av);
    if (it >= 2) av -= (beta / oldb) * r1;
    const double alfa = v.dot(av);
    av -= (alfa / beta) * r2;
    r1 = r2;
    r2 = av;
    apply_pinv(r2, y);
    oldb = beta;
    double b2 = r2.dot(y);
    if (b2 < 0.0) throw Breakdown("preconditioner is not positive definite");
    beta = std::sqrt(b2);

    // Apply the previous rotation, then compute the next one.
    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), std::numeric_limits<double>::min());
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;

    rep.iterations = it;
    rep.residual = std::abs(phibar) / beta1;
    rep.history.push_back(rep.residual);
    if (rep.residual <= options.rtol) {
      finish(true);
      return x;
    }
    if (beta == 0.0) {
      // Invariant Krylov subspace without convergence.
      finish(false);
      throw Breakdown("Lanczos breakdown (beta = 0) at iteration " + std::to_string(it));
    }
  }
  finish(false);
  throw NotConverged(std::move(x), rep);
}

BlockPreconditioner::BlockPreconditioner(std::shared_ptr<const SpdFactorization> pv,
                                         std::shared_ptr<const SpdFactorization> pqc,
                                         std::shared_ptr<const SpdFactorization> pq0)
    : pv_(std::move(pv)),
      pqc_(std::move(pqc)),
      pq0_(std::move(pq0)),
      nu_(pv_->size()),
      nc_(pqc_->size()),
      n0_(pq0_->size()) {}

void BlockPreconditioner::apply(const Vector& r, Vector& z) const {
  if (r.size() != size()) throw InternalError("block preconditioner dimension mismatch");
  z.resize(size());
  z.segment(0, nu_) = pv_->solve(r.segment(0, nu_));
  z.segment(nu_, nc_) = pqc_->solve(r.segment(nu_, nc_));
  z.segment(nu_ + nc_, n0_) = pq0_->solve(r.segment(nu_ + nc_, n0_));
}

Vector BlockPreconditioner::apply(const Vector& r) const {
  Vector z;
  apply(r, z);
  return z;
}

LinearOperator BlockPreconditioner::as_operator() const {
  return [this](const Vector& r, Vector& z) { apply(r, z); };
}

}  // namespace biot
