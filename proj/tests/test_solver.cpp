#include "biot/solver.hpp"

#include <doctest.h>

#include <random>

using namespace biot;

namespace {

// Gaussian elimination with partial pivoting, independent of Eigen's solvers.
Vector dense_solve(Eigen::MatrixXd a, Vector b) {
  const Index n = a.rows();
  for (Index k = 0; k < n; ++k) {
    Index piv = k;
    for (Index i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    }
    a.row(k).swap(a.row(piv));
    std::swap(b[k], b[piv]);
    for (Index i = k + 1; i < n; ++i) {
      const double m = a(i, k) / a(k, k);
      a.row(i) -= m * a.row(k);
      b[i] -= m * b[k];
    }
  }
  Vector x(n);
  for (Index i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (Index j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

SparseMatrix from_dense(const Eigen::MatrixXd& m) {
  std::vector<Triplet> t;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) t.push_back({i, j, m(i, j)});
    }
  }
  return SparseMatrix::from_triplets(m.rows(), m.cols(), std::move(t));
}

SparseMatrix diagonal(const std::vector<double>& d) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < d.size(); ++i) t.push_back({Index(i), Index(i), d[i]});
  return SparseMatrix::from_triplets(Index(d.size()), Index(d.size()), std::move(t));
}

Eigen::MatrixXd random_spd(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = g(rng);
  }
  return a.transpose() * a + Eigen::MatrixXd::Identity(n, n);
}

Vector random_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

LinearOperator op(const SparseMatrix& m) {
  return [&m](const Vector& x, Vector& y) { m.multiply(x, y, Exec::serial); };
}

LinearOperator op(const SpdFactorization& f) {
  return [&f](const Vector& x, Vector& y) { f.solve(x, y); };
}

}  // namespace

TEST_SUITE("sparse") {
  TEST_CASE("triplet assembly sums duplicates in order") {
    const SparseMatrix m = SparseMatrix::from_triplets(
        2, 3, {{0, 1, 1.0}, {1, 0, 2.0}, {0, 1, 0.5}, {1, 2, 0.0}, {0, 0, -1.0}});
    CHECK(m.nonzeros() == 4);
    CHECK(m.coeff(0, 1) == 1.5);
    CHECK(m.coeff(0, 0) == -1.0);
    CHECK(m.coeff(1, 2) == 0.0);
    CHECK(m.coeff(1, 1) == 0.0);
    const SparseMatrix t = m.transpose();
    CHECK(t.rows() == 3);
    CHECK(t.coeff(1, 0) == 1.5);
    CHECK((m.to_dense().transpose() - t.to_dense()).norm() == 0.0);
  }

  TEST_CASE("matvec paths agree bitwise") {
    std::mt19937_64 rng(3);
    const SparseMatrix a = from_dense(random_spd(60, rng));
    const Vector x = random_vector(60, rng);
    Vector ys, yp;
    a.multiply(x, ys, Exec::serial);
    a.multiply(x, yp, Exec::parallel);
    CHECK((ys - yp).norm() == 0.0);
    CHECK((ys - a.to_dense() * x).norm() <= 1e-12 * ys.norm());
  }

  TEST_CASE("algebra helpers") {
    const SparseMatrix a = diagonal({1, 2, 3});
    const SparseMatrix b = SparseMatrix::from_triplets(3, 3, {{0, 2, 4.0}});
    const SparseMatrix c = a.add(b, -2.0);
    CHECK(c.coeff(0, 2) == -8.0);
    CHECK(c.coeff(2, 2) == 3.0);
    CHECK(c.asymmetry() == 8.0);
    CHECK_FALSE(c.symmetric());
    CHECK(a.symmetric());
    CHECK(a.scaled(2.0).coeff(1, 1) == 4.0);
    CHECK(c.max_abs() == 8.0);
    const SparseMatrix blk = c.block(0, 1, 2, 2);
    CHECK(blk.coeff(0, 1) == -8.0);
    CHECK(blk.coeff(1, 0) == 2.0);
    const SparseMatrix r = c.remove_index(1);
    CHECK(r.rows() == 2);
    CHECK(r.coeff(0, 1) == -8.0);
    CHECK(r.coeff(1, 1) == 3.0);
    const SparseMatrix m = block_matrix(a, b, b.transpose(), a);
    CHECK(m.rows() == 6);
    CHECK(m.coeff(0, 5) == 4.0);
    CHECK(m.coeff(5, 0) == 4.0);
    CHECK(m.coeff(4, 4) == 2.0);
    CHECK(SparseMatrix::identity(4).quadratic_form(Vector::Ones(4)) == 4.0);
    CHECK_THROWS_AS(block_matrix(a, diagonal({1, 1}), a, a), InternalError);
  }
}

TEST_SUITE("solver") {
  TEST_CASE("SPD factorization examples") {
    const SpdFactorization id(SparseMatrix::identity(5));
    const Vector b = Vector::LinSpaced(5, 1.0, 5.0);
    CHECK((id.solve(b) - b).norm() == 0.0);
    const SpdFactorization d(diagonal({2, 4}));
    const Vector x = d.solve(Vector::Constant(2, 0.0) + (Vector(2) << 2, 4).finished());
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(1.0));
    CHECK(d.size() == 2);
  }

  TEST_CASE("random SPD against dense elimination") {
    std::mt19937_64 rng(5);
    const Eigen::MatrixXd a = random_spd(20, rng);
    const SpdFactorization f(from_dense(a), "random");
    for (int k = 0; k < 3; ++k) {
      const Vector b = random_vector(20, rng);
      const Vector ref = dense_solve(a, b);
      CHECK((f.solve(b) - ref).norm() <= 1e-10 * ref.norm());
    }
    const Vector x = random_vector(20, rng);
    CHECK((f.solve(a * x) - x).norm() <= 1e-10 * x.norm());
  }

  TEST_CASE("non-positive pivot is reported") {
    const SparseMatrix m = diagonal({1.0, -2.0, 3.0});
    try {
      SpdFactorization f(m, "test block");
      FAIL("expected NotPositiveDefinite");
    } catch (const NotPositiveDefinite& e) {
      CHECK(e.pivot() == 1);
      CHECK(e.value() < 0.0);
      CHECK(std::string(e.what()).find("test block") != std::string::npos);
    }
    CHECK_THROWS_AS(SpdFactorization(diagonal({1.0, 0.0})), NotPositiveDefinite);
  }

  TEST_CASE("MinRes with identity operators") {
    const SparseMatrix i = SparseMatrix::identity(6);
    const Vector b = Vector::LinSpaced(6, -1.0, 2.0);
    SolveReport rep;
    const Vector x = minres(op(i), op(i), b, {1e-10, 100}, &rep);
    CHECK(rep.iterations == 1);
    CHECK(rep.converged);
    CHECK((x - b).norm() <= 1e-14);
  }

  TEST_CASE("MinRes with the exact preconditioner") {
    std::mt19937_64 rng(9);
    const SparseMatrix a = from_dense(random_spd(30, rng));
    const SpdFactorization f(a);
    const Vector b = random_vector(30, rng);
    SolveReport rep;
    const Vector x = minres(op(a), op(f), b, {1e-10, 100}, &rep);
    CHECK(rep.iterations <= 2);
    CHECK((a * x - b).norm() <= 1e-9 * b.norm());
  }

  TEST_CASE("MinRes on an indefinite diagonal") {
    const SparseMatrix a = diagonal({1, -1, 2, -2});
    const SparseMatrix p = SparseMatrix::identity(4);
    std::mt19937_64 rng(13);
    const Vector b = random_vector(4, rng);
    const double rtol = 1e-10;
    SolveReport rep;
    const Vector x = minres(op(a), op(p), b, {rtol, 100}, &rep);
    const Vector ref = dense_solve(a.to_dense(), b);
    CHECK((x - ref).norm() <= 10 * rtol * ref.norm());
    CHECK(rep.residual <= rtol);
  }

  TEST_CASE("MinRes residual history is non-increasing") {
    std::mt19937_64 rng(17);
    Eigen::MatrixXd m = random_spd(40, rng);
    m.diagonal().array() -= 8.0;  // indefinite but symmetric
    const SparseMatrix a = from_dense(m);
    const SparseMatrix p = diagonal(std::vector<double>(40, 2.0));
    const Vector b = random_vector(40, rng);
    SolveReport rep;
    minres(op(a), [](const Vector& x, Vector& y) { y = 0.5 * x; }, b, {1e-10, 500}, &rep);
    REQUIRE(rep.history.size() == std::size_t(rep.iterations));
    for (std::size_t k = 1; k < rep.history.size(); ++k) {
      CHECK(rep.history[k] <= rep.history[k - 1] * (1 + 1e-12));
    }
    CHECK(rep.converged);
    CHECK(rep.residual <= 1e-10);
  }

  TEST_CASE("MinRes reports non-convergence with the last iterate") {
    std::mt19937_64 rng(19);
    const SparseMatrix a = from_dense(random_spd(50, rng));
    const SparseMatrix i = SparseMatrix::identity(50);
    const Vector b = random_vector(50, rng);
    try {
      minres(op(a), op(i), b, {1e-14, 3});
      FAIL("expected NotConverged");
    } catch (const NotConverged& e) {
      CHECK(e.report().iterations == 3);
      CHECK_FALSE(e.report().converged);
      CHECK(e.best_iterate().size() == 50);
      CHECK((a * e.best_iterate() - b).norm() < b.norm());
    }
  }

  TEST_CASE("MinRes rejects an indefinite preconditioner") {
    const SparseMatrix i = SparseMatrix::identity(3);
    const SparseMatrix neg = diagonal({1, -1, 1});
    CHECK_THROWS_AS(minres(op(i), op(neg), Vector::Unit(3, 1), {1e-10, 10}), Breakdown);
  }

  TEST_CASE("MinRes with zero right-hand side") {
    const SparseMatrix i = SparseMatrix::identity(3);
    SolveReport rep;
    const Vector x = minres(op(i), op(i), Vector::Zero(3), {1e-10, 10}, &rep);
    CHECK(x.norm() == 0.0);
    CHECK(rep.converged);
    CHECK(rep.iterations == 0);
  }

  TEST_CASE("block preconditioner") {
    auto id = [](Index n) { return std::make_shared<const SpdFactorization>(SparseMatrix::identity(n)); };
    const BlockPreconditioner ip(id(3), id(2), id(4));
    CHECK(ip.size() == 9);
    CHECK(ip.apply(Vector::Zero(9)).norm() == 0.0);
    const Vector r = Vector::LinSpaced(9, 1.0, 9.0);
    CHECK((ip.apply(r) - r).norm() == 0.0);
    CHECK_THROWS_AS(ip.apply(Vector::Zero(8)), InternalError);

    std::mt19937_64 rng(23);
    const Eigen::MatrixXd a = random_spd(3, rng), b = random_spd(2, rng), c = random_spd(4, rng);
    const BlockPreconditioner p(std::make_shared<const SpdFactorization>(from_dense(a)),
                                std::make_shared<const SpdFactorization>(from_dense(b)),
                                std::make_shared<const SpdFactorization>(from_dense(c)));
    const Vector x = random_vector(9, rng);
    Vector px(9);
    px << a * x.head(3), b * x.segment(3, 2), c * x.tail(4);
    CHECK((p.apply(px) - x).norm() <= 1e-10 * x.norm());
    Vector z;
    p.as_operator()(px, z);
    CHECK((z - x).norm() <= 1e-10 * x.norm());
  }
}
