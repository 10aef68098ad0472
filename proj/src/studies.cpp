#include "biot/studies.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace biot {

namespace {

std::string sci(double v) { return fmt::format("{:.5e}", v); }

ModelParams with(const ModelParams& base, double beta, double nu, double dt) {
  ModelParams p = base;
  p.beta = beta;
  p.nu = nu;
  p.dt = dt;
  return p;
}

}  // namespace

std::shared_ptr<const Discretization> make_discretization(Index n, const StudySetup& setup) {
  Mesh mesh = build_structured_mesh(n);
  BoundaryTags tags = classify_boundary(mesh, setup.gamma_d, setup.gamma_p);
  return std::make_shared<const Discretization>(std::move(mesh), std::move(tags), setup.solver.exec);
}

std::array<double, 5> ErrorRow::values() const {
  return {errors.u_energy, errors.u_h1, errors.u_l2, errors.p_h1, errors.p_l2};
}

std::vector<ErrorRow> convergence_study(const StudySetup& setup, const std::vector<Index>& ns,
                                        const std::vector<double>& betas,
                                        const std::vector<double>& nus) {
  std::vector<ErrorRow> rows;
  std::map<Index, std::shared_ptr<const Discretization>> meshes;
  for (double beta : betas) {
    for (double nu : nus) {
      const ErrorRow* prev = nullptr;
      for (Index n : ns) {
        auto& disc = meshes[n];
        if (!disc) disc = make_discretization(n, setup);
        const ModelParams params = with(setup.params, beta, nu, 1.0 / static_cast<double>(n));
        const BiotProblem problem(disc, params, setup.solver);
        const ExactSolution exact = manufactured_loads(params);
        const TransientResult run = run_transient(problem, exact);

        ErrorRow row;
        row.beta = beta;
        row.nu = nu;
        row.n = n;
        row.dt = params.dt;
        row.errors = compute_errors(*disc, params, run.final_state, exact);
        if (prev) {
          const auto a = prev->values();
          const auto b = row.values();
          const double h_ratio = std::log2(static_cast<double>(n) / static_cast<double>(prev->n));
          std::array<double, 5> r{};
          for (int k = 0; k < 5; ++k) r[k] = std::log2(a[k] / b[k]) / h_ratio;
          row.rates = r;
        }
        rows.push_back(row);
        prev = &rows.back();
      }
    }
  }
  return rows;
}

std::vector<IterRow> preconditioning_study(const StudySetup& setup, const std::vector<Index>& ns,
                                           const std::vector<double>& betas,
                                           const std::vector<double>& nus,
                                           const std::vector<double>& dts, int steps) {
  std::vector<IterRow> rows;
  std::map<Index, std::shared_ptr<const Discretization>> meshes;
  for (double beta : betas) {
    for (double dt : dts) {
      for (double nu : nus) {
        for (Index n : ns) {
          auto& disc = meshes[n];
          if (!disc) disc = make_discretization(n, setup);
          const ModelParams params = with(setup.params, beta, nu, dt);
          const BiotProblem problem(disc, params, setup.solver);
          const ExactSolution exact = manufactured_loads(params);

          IterRow row;
          row.beta = beta;
          row.dt = dt;
          row.nu = nu;
          row.n = n;
          row.dofs = problem.num_dofs();
          StepState state = problem.initial_data(exact);
          long total = 0;
          for (int k = 0; k < steps; ++k) {
            const auto [f, g] = problem.load_sums(exact, state.t);
            StepState next;
            try {
              next = problem.cn_step(state, f, g);
            } catch (const NotConverged& e) {
              next.t = state.t + dt;
              problem.unpack(e.best_iterate(), next);
              next.report = e.report();
              next.report.iterations = setup.solver.maxit;
              row.converged = false;
            }
            const int it = next.report.iterations;
            if (k == 0) row.iters_first = it;
            row.iters_max = std::max(row.iters_max, it);
            total += it;
            state = std::move(next);
          }
          row.iters_mean = steps > 0 ? static_cast<double>(total) / steps : 0.0;
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

void write_error_csv(std::ostream& os, const std::vector<ErrorRow>& rows) {
  os << "beta,nu,N,dt,err_u_energy,rate,err_u_h1,rate,err_u_l2,rate,err_p_h1,rate,err_p_l2,rate\n";
  for (const auto& r : rows) {
    os << sci(r.beta) << ',' << sci(r.nu) << ',' << r.n << ',' << sci(r.dt);
    const auto v = r.values();
    for (int k = 0; k < 5; ++k) {
      os << ',' << sci(v[k]) << ',';
      if (r.rates) os << sci((*r.rates)[k]);
    }
    os << '\n';
  }
}

void write_iter_csv(std::ostream& os, const std::vector<IterRow>& rows) {
  os << "beta,dt,nu,N,dofs,iters_first,iters_max,iters_mean,converged\n";
  for (const auto& r : rows) {
    os << sci(r.beta) << ',' << sci(r.dt) << ',' << sci(r.nu) << ',' << r.n << ',' << r.dofs << ','
       << r.iters_first << ',' << r.iters_max << ',' << sci(r.iters_mean) << ','
       << (r.converged ? "true" : "false") << '\n';
  }
}

std::vector<std::string> check_rates(const std::vector<ErrorRow>& rows) {
  static const char* names[5] = {"u energy", "u H1", "u L2", "p H1", "p L2"};
  static const double lo[5] = {0.9, 0.9, 1.8, 0.9, 1.8};
  static const double hi[5] = {1.1, 1.1, 2.1, 1.1, 2.1};
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (!r.rates) continue;
    for (int k = 0; k < 5; ++k) {
      const double rate = (*r.rates)[k];
      if (!(rate >= lo[k] && rate <= hi[k])) {
        out.push_back(fmt::format("beta={} nu={} N={}: {} rate {:.3f} outside [{}, {}]", r.beta,
                                  r.nu, r.n, names[k], rate, lo[k], hi[k]));
      }
    }
  }
  return out;
}

std::vector<std::string> check_iteration_trends(const std::vector<IterRow>& rows) {
  std::vector<std::string> out;
  std::map<std::tuple<double, double, double>, std::pair<int, int>> spread;
  for (const auto& r : rows) {
    if (r.beta < 1.0) continue;
    if (r.iters_first > 150) {
      out.push_back(fmt::format("beta={} dt={} nu={} N={}: {} iterations exceed 150", r.beta, r.dt,
                                r.nu, r.n, r.iters_first));
    }
    if (r.beta == 2.0) {
      auto [it, fresh] = spread.try_emplace({r.beta, r.dt, r.nu}, r.iters_first, r.iters_first);
      if (!fresh) {
        it->second.first = std::min(it->second.first, r.iters_first);
        it->second.second = std::max(it->second.second, r.iters_first);
      }
    }
  }
  for (const auto& [key, mm] : spread) {
    const auto [beta, dt, nu] = key;
    if (mm.second > 1.25 * mm.first) {
      out.push_back(fmt::format("beta={} dt={} nu={}: counts range {}..{} exceeds 25%", beta, dt, nu,
                                mm.first, mm.second));
    }
  }
  return out;
}

}  // namespace biot
