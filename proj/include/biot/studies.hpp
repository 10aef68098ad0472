#pragma once

#include "biot/timestep.hpp"

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace biot {

/// Mesh, boundary regions and parameters shared by every run of a study.
struct StudySetup {
  ModelParams params;
  SolverConfig solver;
  BoundaryRegion gamma_d = BoundaryRegion::parse("left");
  BoundaryRegion gamma_p = BoundaryRegion::all();
};

std::shared_ptr<const Discretization> make_discretization(Index n, const StudySetup& setup);

struct ErrorRow {
  double beta = 0.0;
  double nu = 0.0;
  Index n = 0;
  double dt = 0.0;
  ErrorNorms errors;
  /// log2 rates against the previous row of the same (beta, nu) block.
  std::optional<std::array<double, 5>> rates;
  std::array<double, 5> values() const;
};

/// One transient run per (beta, nu, N) with dt = 1/N, errors at t = T.
std::vector<ErrorRow> convergence_study(const StudySetup& setup, const std::vector<Index>& ns,
                                        const std::vector<double>& betas,
                                        const std::vector<double>& nus);

struct IterRow {
  double beta = 0.0;
  double dt = 0.0;
  double nu = 0.0;
  Index n = 0;
  Index dofs = 0;
  int iters_first = 0;
  int iters_max = 0;
  double iters_mean = 0.0;
  bool converged = true;
};

/// Iteration counts of the first step from compatible initial data, and
/// max/mean over `steps` steps. A solve that exhausts maxit is recorded as
/// maxit with converged = false and the run continues from its last iterate.
std::vector<IterRow> preconditioning_study(const StudySetup& setup, const std::vector<Index>& ns,
                                           const std::vector<double>& betas,
                                           const std::vector<double>& nus,
                                           const std::vector<double>& dts, int steps = 10);

void write_error_csv(std::ostream& os, const std::vector<ErrorRow>& rows);
void write_iter_csv(std::ostream& os, const std::vector<IterRow>& rows);

/// Rate bands: energy, broken H1 and pressure H1 in [0.9, 1.1]; the two L2
/// rates in [1.8, 2.1]. Returns one message per violation.
std::vector<std::string> check_rates(const std::vector<ErrorRow>& rows);

/// Iteration-count trends for beta >= 1: counts bounded by 150 and, for
/// beta = 2, spread across N within 25% at fixed (dt, nu).
std::vector<std::string> check_iteration_trends(const std::vector<IterRow>& rows);

}  // namespace biot
