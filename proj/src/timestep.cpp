#include "biot/timestep.hpp"

#include "biot/quadrature.hpp"

#include <fmt/core.h>

#include <cmath>
#include <cstdio>
#include <limits>

namespace biot {

namespace {

std::shared_ptr<const SpdFactorization> factorize(const SparseMatrix& m, const char* label) {
  try {
    return std::make_shared<const SpdFactorization>(m, label);
  } catch (const NotPositiveDefinite& e) {
    throw ConfigError(fmt::format("{} is not positive definite (pivot {}, value {:.3e}); "
                                  "check gamma and that Gamma_p is non-empty",
                                  label, e.pivot(), e.value()));
  }
}

// Flux pairing <kappa grad p . n, q> on the boundary edges without a pressure
// condition, which the elliptic projection load needs when Gamma_f is non-empty.
Vector natural_flux_load(const Discretization& disc, const ModelParams& params,
                         const std::function<Point(const Point&)>& grad_p) {
  const Mesh& mesh = disc.mesh();
  Vector out = Vector::Zero(disc.dofs().num_p());
  const LineRule rule = edge_quadrature(assembly_degree);
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.is_boundary_edge(e) || disc.tags().is_gamma_p(e)) continue;
    const EdgeGeometry g = mesh.edge_geometry(e);
    const Index t = mesh.edge_to_tris[e][0];
    const auto corners = mesh.corners(t);
    const auto& tri = mesh.triangles[t];
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const Point x = g.at(rule.points[k]);
      const double flux = rule.weights[k] * g.length * (params.kappa * grad_p(x)).dot(g.normal);
      const EgValues eg = eg_eval(corners, x);
      for (int i = 0; i < 3; ++i) out[disc.dofs().pc_dof(tri[i])] += flux * eg.hat[i];
      out[disc.dofs().p0_dof(t)] += flux;
    }
  }
  return out;
}

}  // namespace

Vector pressure_null_vector(const DofHandler& dofs) {
  Vector z(dofs.num_p());
  z.head(dofs.num_pc()).setOnes();
  z.tail(dofs.num_p0()).setConstant(-1.0);
  return z;
}

Vector normalize_pressure(const DofHandler& dofs, Vector p) {
  const double c = p[dofs.p0_dof(0)];
  p.head(dofs.num_pc()).array() += c;
  p.tail(dofs.num_p0()).array() -= c;
  return p;
}

Vector solve_pressure_system(const DofHandler& dofs, const SparseMatrix& m, const Vector& b,
                             const char* label) {
  const Index pin = dofs.p0_dof(0);
  const auto f = factorize(m.remove_index(pin), label);
  Vector reduced(b.size() - 1);
  reduced << b.head(pin), b.tail(b.size() - pin - 1);
  const Vector x = f->solve(reduced);
  Vector out(b.size());
  out << x.head(pin), 0.0, x.tail(x.size() - pin);
  return out;
}

BiotProblem::BiotProblem(std::shared_ptr<const Discretization> disc, ModelParams params,
                         SolverConfig solver)
    : disc_(std::move(disc)), params_(std::move(params)), solver_(solver) {
  forms_ = assemble_forms(*disc_, params_, solver_.exec);
  system_ = assemble_system(forms_, params_);
  blocks_ = assemble_preconditioner(forms_, params_);
  pv_ = factorize(blocks_.p_v, "P_V");
  pqc_ = factorize(blocks_.p_qc, "P_Q vertex block");
  pq0_ = factorize(blocks_.p_q0, "P_Q cell block");
  precond_ = std::make_unique<BlockPreconditioner>(pv_, pqc_, pq0_);
}

Vector BiotProblem::pack(const StepState& s) const {
  Vector x(num_dofs());
  x << s.u, s.p;
  return x;
}

void BiotProblem::unpack(const Vector& x, StepState& s) const {
  s.u = x.head(num_u());
  s.p = x.tail(num_p());
}

Vector BiotProblem::compatible_displacement(const Vector& p, const Vector& load_f) const {
  const Vector rhs = load_f - forms_.b_div.transpose() * p;
  return pv_->solve(rhs);
}

StepState BiotProblem::initial_data(const ExactSolution& exact, InitialPressure mode) const {
  StepState s;
  s.t = 0.0;
  if (exact.identically_zero) {
    s.u = Vector::Zero(num_u());
    s.p = Vector::Zero(num_p());
    return s;
  }
  if (mode == InitialPressure::elliptic_projection) {
    Vector load = assemble_load_g(*disc_, [&](const Point& x) {
      return -exact.div_kappa_grad_p(x, 0.0);
    });
    load += natural_flux_load(*disc_, params_, [&](const Point& x) { return exact.grad_p(x, 0.0); });
    s.p = solve_pressure_system(disc_->dofs(), forms_.a_p, load, "a_p");
  } else {
    const Vector load = assemble_load_g(*disc_, [&](const Point& x) { return exact.p(x, 0.0); });
    s.p = solve_pressure_system(disc_->dofs(), forms_.mass, load, "pressure mass");
  }
  s.u = compatible_displacement(s.p, assemble_load_f(*disc_, [&](const Point& x) {
                                   return exact.f(x, 0.0);
                                 }));
  return s;
}

std::pair<Vector, Vector> BiotProblem::load_sums(const ExactSolution& exact, double t) const {
  if (exact.identically_zero) return {Vector::Zero(num_u()), Vector::Zero(num_p())};
  const double t1 = t + params_.dt;
  Vector f = assemble_load_f(*disc_, [&](const Point& x) { return Point(exact.f(x, t) + exact.f(x, t1)); });
  Vector g = assemble_load_g(*disc_, [&](const Point& x) { return exact.g(x, t) + exact.g(x, t1); });
  return {std::move(f), std::move(g)};
}

Vector BiotProblem::step_rhs(const StepState& s, const Vector& f_sum, const Vector& g_sum) const {
  const double half_dt = 0.5 * params_.dt;
  Vector rhs(num_dofs());
  rhs.head(num_u()) = f_sum - forms_.a_u * s.u - forms_.b_div.transpose() * s.p;
  rhs.tail(num_p()) = forms_.b_div * s.u - forms_.mass_s0 * s.p - forms_.stab * s.p +
                      half_dt * (forms_.a_p * s.p) - half_dt * g_sum;
  return rhs;
}

Vector BiotProblem::solve(const Vector& rhs, SolveReport* report) const {
  const LinearOperator apply_a = [this](const Vector& x, Vector& y) {
    system_.multiply(x, y, solver_.exec);
  };
  return minres(apply_a, precond_->as_operator(), rhs, {solver_.rtol, solver_.maxit}, report);
}

StepState BiotProblem::cn_step(const StepState& s, const Vector& f_sum, const Vector& g_sum) const {
  StepState next;
  next.t = s.t + params_.dt;
  const Vector x = solve(step_rhs(s, f_sum, g_sum), &next.report);
  unpack(x, next);
  return next;
}

StepState BiotProblem::cn_step(const StepState& s, const ExactSolution& exact) const {
  const auto [f, g] = load_sums(exact, s.t);
  return cn_step(s, f, g);
}

double BiotProblem::energy(const StepState& s) const {
  return forms_.a_u.quadratic_form(s.u) + forms_.mass_s0.quadratic_form(s.p) +
         forms_.stab.quadratic_form(s.p);
}

int step_count(const ModelParams& params) {
  if (!(params.dt > 0.0) || !(params.T > 0.0)) {
    throw ConfigError("dt and T must be positive");
  }
  const double ratio = params.T / params.dt;
  const int steps = std::max(1, static_cast<int>(std::lround(ratio)));
  if (std::abs(ratio - steps) > 1e-9 * ratio) {
    std::fprintf(stderr, "warning: T/dt = %.6g is not an integer; running %d steps\n", ratio, steps);
  }
  return steps;
}

TransientResult run_transient(const BiotProblem& problem, const ExactSolution& exact,
                              const StepObserver& observer) {
  return run_transient(problem, exact, problem.initial_data(exact), step_count(problem.params()),
                       observer);
}

TransientResult run_transient(const BiotProblem& problem, const ExactSolution& exact,
                              StepState initial, int steps, const StepObserver& observer) {
  TransientResult result;
  result.reports.reserve(steps);
  StepState state = std::move(initial);
  for (int n = 0; n < steps; ++n) {
    const auto [f, g] = problem.load_sums(exact, state.t);
    StepState next = problem.cn_step(state, f, g);
    if (observer) observer(state, next, f, g);
    result.reports.push_back(next.report);
    state = std::move(next);
  }
  result.final_state = std::move(state);
  return result;
}

ErrorNorms compute_errors(const Discretization& disc, const ModelParams& params,
                          const StepState& state, const ExactSolution& exact) {
  const Mesh& mesh = disc.mesh();
  const double two_mu = 2.0 * params.mu();
  const double lambda = params.lambda();
  const double t = state.t;
  // Error and exact contributions, accumulated per measure.
  double e_en = 0, e_grad = 0, e_u = 0, e_pg = 0, e_p = 0;
  double x_en = 0, x_grad = 0, x_u = 0, x_pg = 0, x_p = 0;
  for (Index k = 0; k < mesh.num_triangles(); ++k) {
    const CellQuadrature quad = cell_quadrature(mesh, k);
    const auto dofs = disc.dofs().cell_u_dofs(mesh, k);
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const Point& x = quad.points[q];
      const double w = quad.weights[q];
      const MtwValues v = disc.basis(k).eval(x);
      Point uh = Point::Zero();
      Jacobian gh = Jacobian::Zero();
      for (int i = 0; i < mtw_local_dim; ++i) {
        if (dofs[i] < 0) continue;
        uh += state.u[dofs[i]] * v.value[i];
        gh += state.u[dofs[i]] * v.grad[i];
      }
      const Point u = exact.u(x, t);
      const Jacobian gu = exact.grad_u(x, t);
      const Jacobian ge = gu - gh;
      const Jacobian eps_e = 0.5 * (ge + ge.transpose());
      const Jacobian eps_u = 0.5 * (gu + gu.transpose());
      e_en += w * (two_mu * eps_e.squaredNorm() + lambda * ge.trace() * ge.trace());
      x_en += w * (two_mu * eps_u.squaredNorm() + lambda * gu.trace() * gu.trace());
      e_grad += w * ge.squaredNorm();
      x_grad += w * gu.squaredNorm();
      e_u += w * (u - uh).squaredNorm();
      x_u += w * u.squaredNorm();

      const PressureValue ph = eval_p(disc, state.p, k, x);
      const double p = exact.p(x, t);
      const Point gp = exact.grad_p(x, t);
      e_pg += w * (gp - ph.grad).squaredNorm();
      x_pg += w * gp.squaredNorm();
      e_p += w * (p - ph.value) * (p - ph.value);
      x_p += w * p * p;
    }
  }
  ErrorNorms out;
  auto ratio = [&out](double err, double ref) {
    if (ref > 0.0) return std::sqrt(err / ref);
    out.absolute = true;
    return std::sqrt(err);
  };
  out.u_energy = ratio(e_en, x_en);
  out.u_h1 = ratio(e_grad + e_u, x_grad + x_u);
  out.u_l2 = ratio(e_u, x_u);
  out.p_h1 = ratio(e_pg + e_p, x_pg + x_p);
  out.p_l2 = ratio(e_p, x_p);
  return out;
}

double displacement_l2_error(const Discretization& disc, const Vector& u,
                             const std::function<Point(const Point&)>& exact) {
  double sum = 0.0;
  for (Index k = 0; k < disc.mesh().num_triangles(); ++k) {
    const CellQuadrature quad = cell_quadrature(disc.mesh(), k);
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      sum += quad.weights[q] * (exact(quad.points[q]) - disc.eval_u(u, k, quad.points[q])).squaredNorm();
    }
  }
  return std::sqrt(sum);
}

double pressure_l2_error(const Discretization& disc, const Vector& p,
                         const std::function<double(const Point&)>& exact) {
  double sum = 0.0;
  for (Index k = 0; k < disc.mesh().num_triangles(); ++k) {
    const CellQuadrature quad = cell_quadrature(disc.mesh(), k);
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const double d = exact(quad.points[q]) - eval_p(disc, p, k, quad.points[q]).value;
      sum += quad.weights[q] * d * d;
    }
  }
  return std::sqrt(sum);
}

double CellBalance::worst_ratio() const {
  double worst = 0.0;
  for (Index k = 0; k < residual.size(); ++k) {
    const double r = std::abs(residual[k]);
    if (r == 0.0) continue;
    worst = std::max(worst, scale[k] > 0.0 ? r / scale[k] : std::numeric_limits<double>::infinity());
  }
  return worst;
}

CellBalance cell_balance(const BiotProblem& problem, const StepState& prev, const StepState& next,
                         const Vector& f_sum, const Vector& g_sum) {
  const Vector rhs = problem.step_rhs(prev, f_sum, g_sum);
  const Vector x = problem.pack(next);
  const SparseMatrix& a = problem.system();
  const Index row0 = problem.num_u() + problem.disc().dofs().num_pc();
  const Index ncell = problem.disc().dofs().num_p0();
  CellBalance out{Vector::Zero(ncell), Vector::Zero(ncell)};
  for (Index k = 0; k < ncell; ++k) {
    const Index r = row0 + k;
    double ax = 0.0, scale = 0.0;
    for (Index j = a.row_ptr()[r]; j < a.row_ptr()[r + 1]; ++j) {
      const double term = a.values()[j] * x[a.col_idx()[j]];
      ax += term;
      scale += std::abs(term);
    }
    out.residual[k] = ax - rhs[r];
    out.scale[k] = scale + std::abs(rhs[r]);
  }
  return out;
}

}  // namespace biot
