#pragma once

#include "biot/exact.hpp"
#include "biot/forms.hpp"
#include "biot/solver.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace biot {

struct SolverConfig {
  double rtol = 1e-8;
  int maxit = 1000;
  Exec exec = Exec::parallel;
};

/// Discrete state at one time level. Gamma_d displacement DOFs are
/// eliminated, so `u` only holds the free DOFs; `p` is (vertex | cell).
struct StepState {
  double t = 0.0;
  Vector u;
  Vector p;
  SolveReport report;
};

enum class InitialPressure { elliptic_projection, l2_projection };

/// Operators, preconditioner factorizations and the Crank-Nicolson step for
/// one (mesh, parameters) pair. Immutable after construction.
class BiotProblem {
public:
  BiotProblem(std::shared_ptr<const Discretization> disc, ModelParams params,
              SolverConfig solver = {});

  const Discretization& disc() const { return *disc_; }
  const ModelParams& params() const { return params_; }
  const SolverConfig& solver_config() const { return solver_; }
  const AssembledForms& forms() const { return forms_; }
  const SparseMatrix& system() const { return system_; }
  const PreconditionerBlocks& preconditioner_blocks() const { return blocks_; }
  const BlockPreconditioner& preconditioner() const { return *precond_; }
  const SpdFactorization& a_u_factor() const { return *pv_; }
  Index num_u() const { return forms_.a_u.rows(); }
  Index num_p() const { return forms_.a_p.rows(); }
  Index num_dofs() const { return num_u() + num_p(); }

  /// Compatible initial data: p_h(0) from the chosen projection, then u_h(0)
  /// from a_u(u, v) = (f(0), v) + (alpha p_h(0), div v).
  StepState initial_data(const ExactSolution& exact,
                         InitialPressure mode = InitialPressure::elliptic_projection) const;
  /// u solving a_u(u, v) = (alpha p, div v) + load for a given pressure.
  Vector compatible_displacement(const Vector& p, const Vector& load_f) const;

  /// Right-hand side of the step t_n -> t_{n+1}; `f_sum` and `g_sum` are the
  /// load vectors at t_n plus those at t_{n+1}.
  Vector step_rhs(const StepState& state, const Vector& f_sum, const Vector& g_sum) const;
  StepState cn_step(const StepState& state, const Vector& f_sum, const Vector& g_sum) const;
  StepState cn_step(const StepState& state, const ExactSolution& exact) const;
  /// Sums of load vectors at t and t + dt.
  std::pair<Vector, Vector> load_sums(const ExactSolution& exact, double t) const;

  /// Preconditioned MinRes on the system matrix.
  Vector solve(const Vector& rhs, SolveReport* report) const;

  /// a_u(u,u) + (s0 p, p) + S(p, p).
  double energy(const StepState& state) const;

  Vector pack(const StepState& s) const;
  void unpack(const Vector& x, StepState& s) const;

private:
  std::shared_ptr<const Discretization> disc_;
  ModelParams params_;
  SolverConfig solver_;
  AssembledForms forms_;
  SparseMatrix system_;
  PreconditionerBlocks blocks_;
  std::shared_ptr<const SpdFactorization> pv_, pqc_, pq0_;
  std::unique_ptr<BlockPreconditioner> precond_;
};

/// The vertex and cell blocks both contain the constants, so
/// (1, ..., 1 | -1, ..., -1) represents the zero function and spans the
/// kernel of every assembled pressure form.
Vector pressure_null_vector(const DofHandler& dofs);
/// Adds the multiple of the null vector that sets the first cell
/// coefficient to zero; the represented function is unchanged.
Vector normalize_pressure(const DofHandler& dofs, Vector p);
/// Solves m p = b for a pressure matrix whose kernel is the null vector, by
/// fixing the first cell coefficient to zero. Throws ConfigError when the
/// reduced matrix is not positive definite.
Vector solve_pressure_system(const DofHandler& dofs, const SparseMatrix& m, const Vector& b,
                             const char* label);

/// Number of steps for [0, T]; rounds and warns on stderr when T/dt is not
/// an integer.
int step_count(const ModelParams& params);

struct TransientResult {
  StepState final_state;
  std::vector<SolveReport> reports;
};

using StepObserver = std::function<void(const StepState& prev, const StepState& next,
                                        const Vector& f_sum, const Vector& g_sum)>;

TransientResult run_transient(const BiotProblem& problem, const ExactSolution& exact,
                              const StepObserver& observer = {});
/// Same, from a given initial state and for an explicit number of steps.
TransientResult run_transient(const BiotProblem& problem, const ExactSolution& exact,
                              StepState initial, int steps, const StepObserver& observer = {});

/// The five error measures; relative unless `absolute` is set, which
/// happens when an exact-solution norm vanishes.
struct ErrorNorms {
  double u_energy = 0.0;
  double u_h1 = 0.0;
  double u_l2 = 0.0;
  double p_h1 = 0.0;
  double p_l2 = 0.0;
  bool absolute = false;
};

ErrorNorms compute_errors(const Discretization& disc, const ModelParams& params,
                          const StepState& state, const ExactSolution& exact);
/// L2 error of the displacement alone (absolute).
double displacement_l2_error(const Discretization& disc, const Vector& u,
                             const std::function<Point(const Point&)>& exact);
double pressure_l2_error(const Discretization& disc, const Vector& p,
                         const std::function<double(const Point&)>& exact);

/// Per-cell residuals of the pressure rows tested with cell indicators,
/// and the matching local scale sum_j |B_Kj x_j| + |F_K|.
struct CellBalance {
  Vector residual;
  Vector scale;
  double worst_ratio() const;
};
CellBalance cell_balance(const BiotProblem& problem, const StepState& prev, const StepState& next,
                         const Vector& f_sum, const Vector& g_sum);

}  // namespace biot
