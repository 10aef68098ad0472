#include "biot/cli.hpp"

#include "biot/diagnostics.hpp"
#include "biot/studies.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>

namespace biot {

namespace {

struct RunConfig {
  std::vector<Index> ns;
  std::vector<double> betas;
  std::vector<double> nus;
  std::vector<double> dts;
  ModelParams params;
  std::vector<double> kappa{1.0};
  SolverConfig solver;
  std::string gamma_d = "left";
  std::string gamma_p = "all";
  std::string out;
  std::string initial = "elliptic";
  std::uint64_t seed = 20240101;
  int steps = 10;
  bool serial = false;
};

// Output goes to --out, else to $BIOT_OUTPUT_DIR/<default_name>, else to `out`.
class Sink {
public:
  Sink(const RunConfig& cfg, const std::string& default_name, std::ostream& fallback) : os_(&fallback) {
    std::string path = cfg.out;
    if (path.empty()) {
      if (const char* dir = std::getenv("BIOT_OUTPUT_DIR"); dir && *dir) {
        std::filesystem::create_directories(dir);
        path = (std::filesystem::path(dir) / default_name).string();
      }
    }
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot open output file " + path);
      os_ = file_.get();
      path_ = path;
    }
  }
  std::ostream& stream() { return *os_; }
  const std::string& path() const { return path_; }

private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
  std::string path_;
};

StudySetup make_setup(RunConfig& cfg) {
  if (cfg.kappa.size() == 1) {
    cfg.params.kappa = cfg.kappa[0] * Eigen::Matrix2d::Identity();
  } else if (cfg.kappa.size() == 3) {
    cfg.params.kappa << cfg.kappa[0], cfg.kappa[1], cfg.kappa[1], cfg.kappa[2];
  } else {
    throw ConfigError("--kappa takes 1 value (isotropic) or 3 values (kxx,kxy,kyy)");
  }
  for (Index n : cfg.ns) {
    if (n < 1) throw ConfigError(fmt::format("mesh size N must be >= 1, got {}", n));
  }
  if (cfg.ns.empty()) throw ConfigError("at least one N is required");
  if (cfg.steps < 1) throw ConfigError("--steps must be >= 1");
  if (cfg.solver.maxit < 1) throw ConfigError("--maxit must be >= 1");
  if (!(cfg.solver.rtol > 0.0 && cfg.solver.rtol < 1.0)) throw ConfigError("--rtol must lie in (0, 1)");
  cfg.solver.exec = cfg.serial ? Exec::serial : Exec::parallel;
  // Every combination is validated before any work starts.
  for (double beta : cfg.betas) {
    for (double nu : cfg.nus) {
      for (double dt : cfg.dts) {
        ModelParams p = cfg.params;
        p.beta = beta;
        p.nu = nu;
        p.dt = dt;
        p.validate();
      }
    }
  }
  StudySetup setup;
  setup.params = cfg.params;
  setup.solver = cfg.solver;
  setup.gamma_d = BoundaryRegion::parse(cfg.gamma_d);
  setup.gamma_p = BoundaryRegion::parse(cfg.gamma_p);
  if (setup.gamma_d.name() == "none" || setup.gamma_p.name() == "none") {
    throw ConfigError("Gamma_d and Gamma_p must be non-empty");
  }
  return setup;
}

int cmd_converge(RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.dts.clear();
  for (Index n : cfg.ns) cfg.dts.push_back(1.0 / static_cast<double>(std::max<Index>(n, 1)));
  const StudySetup setup = make_setup(cfg);
  const auto rows = convergence_study(setup, cfg.ns, cfg.betas, cfg.nus);
  Sink sink(cfg, "converge.csv", out);
  write_error_csv(sink.stream(), rows);
  const auto violations = check_rates(rows);
  for (const auto& v : violations) err << "rate violation: " << v << '\n';
  return violations.empty() ? exit_ok : exit_assertion;
}

int cmd_precond(RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const StudySetup setup = make_setup(cfg);
  const auto rows = preconditioning_study(setup, cfg.ns, cfg.betas, cfg.nus, cfg.dts, cfg.steps);
  Sink sink(cfg, "precond.csv", out);
  write_iter_csv(sink.stream(), rows);
  const auto failed = std::count_if(rows.begin(), rows.end(), [](const IterRow& r) { return !r.converged; });
  if (failed > 0) {
    err << failed << " configuration(s) did not converge within maxit\n";
    return exit_solver;
  }
  const auto violations = check_iteration_trends(rows);
  for (const auto& v : violations) err << "trend violation: " << v << '\n';
  return violations.empty() ? exit_ok : exit_assertion;
}

int cmd_check(RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const StudySetup setup = make_setup(cfg);
  bool ok = true;
  for (Index n : cfg.ns) {
    const auto disc = make_discretization(n, setup);
    ModelParams params = setup.params;
    params.beta = cfg.betas.front();
    params.nu = cfg.nus.front();
    params.dt = cfg.dts.front();
    out << fmt::format("N = {}  (gamma = {}, beta = {}, nu = {}, dt = {})\n", n, params.gamma,
                       params.beta, params.nu, params.dt);
    const DiagnosticReport report = structural_diagnostics(*disc, params, cfg.seed);
    report.print(out);
    if (const CheckResult* c = report.find("coercivity"); c && !c->passed) {
      err << fmt::format("warning: a_p coercivity check failed at gamma = {}; increase --gamma\n",
                         params.gamma);
    }
    ok = ok && report.passed();
    if (n <= 8) {
      const InfSupResult is = infsup_diagnostic(*disc, params);
      const bool pass = is.min_abs > 0.05;
      out << fmt::format("{:<26} {}  min |mu| {:.4e}  max |mu| {:.4e}  dim {}\n", "infsup",
                         pass ? "PASS" : "FAIL", is.min_abs, is.max_abs, is.dimension);
      ok = ok && pass;
    }
  }
  if (!ok) err << "diagnostic failures reported above\n";
  return ok ? exit_ok : exit_assertion;
}

int cmd_solve(RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.ns.size() != 1 || cfg.betas.size() != 1 || cfg.nus.size() != 1 || cfg.dts.size() != 1) {
    throw ConfigError("solve takes a single value for each of --N, --beta, --nu, --dt");
  }
  if (cfg.initial != "elliptic" && cfg.initial != "l2") {
    throw ConfigError("--initial-pressure must be 'elliptic' or 'l2'");
  }
  const StudySetup setup = make_setup(cfg);
  ModelParams params = setup.params;
  params.beta = cfg.betas[0];
  params.nu = cfg.nus[0];
  params.dt = cfg.dts[0];
  const auto disc = make_discretization(cfg.ns[0], setup);
  const BiotProblem problem(disc, params, setup.solver);
  const ExactSolution exact = manufactured_loads(params);
  const auto mode = cfg.initial == "l2" ? InitialPressure::l2_projection : InitialPressure::elliptic_projection;
  const StepState initial = problem.initial_data(exact, mode);
  const TransientResult run = run_transient(problem, exact, initial, step_count(params));

  Sink sink(cfg, "solve.csv", out);
  std::ostream& csv = sink.stream();
  const bool separate = !sink.path().empty();
  csv << "step,t,iterations,residual,converged\n";
  for (std::size_t k = 0; k < run.reports.size(); ++k) {
    const SolveReport& r = run.reports[k];
    csv << k + 1 << ',' << fmt::format("{:.5e}", params.dt * static_cast<double>(k + 1)) << ','
        << r.iterations << ',' << fmt::format("{:.5e}", r.residual) << ','
        << (r.converged ? "true" : "false") << '\n';
  }
  const ErrorNorms e = compute_errors(*disc, params, run.final_state, exact);
  if (separate) out << fmt::format("wrote {} step reports to {}\n", run.reports.size(), sink.path());
  out << fmt::format("N = {}, dofs = {}, steps = {}, t = {:.5e}{}\n", cfg.ns[0], problem.num_dofs(),
                     run.reports.size(), run.final_state.t, e.absolute ? " (absolute errors)" : "");
  out << fmt::format("err_u_energy {:.5e}\nerr_u_h1     {:.5e}\nerr_u_l2     {:.5e}\n"
                     "err_p_h1     {:.5e}\nerr_p_l2     {:.5e}\n",
                     e.u_energy, e.u_h1, e.u_l2, e.p_h1, e.p_l2);
  return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Biot poroelasticity solver: MTW displacement, enriched Galerkin pressure"};
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "TOML file with flat keys named after the flags; flags override it");

  RunConfig cfg;
  // Defaults that differ per subcommand are filled in after parsing.
  std::vector<Index> ns;
  std::vector<double> betas, nus, dts;
  app.add_option("--N", ns, "Mesh sizes (cells per side), comma separated")->delimiter(',');
  app.add_option("--beta", betas, "Interior over-stabilization exponents")->delimiter(',');
  app.add_option("--nu", nus, "Poisson ratios")->delimiter(',');
  app.add_option("--dt", dts, "Time steps (converge uses dt = 1/N)")->delimiter(',');
  app.add_option("--E", cfg.params.E, "Young modulus")->capture_default_str();
  app.add_option("--alpha", cfg.params.alpha, "Biot-Willis coefficient")->capture_default_str();
  app.add_option("--s0", cfg.params.s0, "Constrained specific storage")->capture_default_str();
  app.add_option("--kappa", cfg.kappa, "Conductivity: k or kxx,kxy,kyy")->delimiter(',')->capture_default_str();
  app.add_option("--gamma", cfg.params.gamma, "Penalty parameter of a_p and S")->capture_default_str();
  app.add_option("--C1", cfg.params.C1, "Constant in the stabilization S")->capture_default_str();
  app.add_option("--T", cfg.params.T, "Final time")->capture_default_str();
  app.add_option("--rtol", cfg.solver.rtol, "MinRes relative tolerance")->capture_default_str();
  app.add_option("--maxit", cfg.solver.maxit, "MinRes iteration limit")->capture_default_str();
  app.add_option("--steps", cfg.steps, "Steps per precond run")->capture_default_str();
  app.add_option("--gamma-d", cfg.gamma_d, "Displacement Dirichlet sides (left,right,bottom,top,all)")
      ->capture_default_str();
  app.add_option("--gamma-p", cfg.gamma_p, "Pressure Dirichlet sides (left,right,bottom,top,all)")
      ->capture_default_str();
  app.add_option("--initial-pressure", cfg.initial, "Initial pressure: elliptic or l2")->capture_default_str();
  app.add_option("--out", cfg.out, "Output CSV path (default: $BIOT_OUTPUT_DIR/<command>.csv or stdout)");
  app.add_option("--seed", cfg.seed, "Seed for randomized diagnostics")->capture_default_str();
  app.add_flag("--serial", cfg.serial, "Use the serial reference kernels");

  auto* converge = app.add_subcommand("converge", "Convergence study with dt = 1/N (ErrorTable CSV)");
  auto* precond = app.add_subcommand("precond", "MinRes iteration counts (IterTable CSV)");
  auto* check = app.add_subcommand("check", "Structural, coercivity and inf-sup diagnostics");
  auto* solve = app.add_subcommand("solve", "Single transient run with the manufactured solution");
  for (auto* sub : {converge, precond, check, solve}) sub->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  auto fill = [](auto& target, const auto& given, std::initializer_list<typename std::decay_t<decltype(target)>::value_type> dflt) {
    target = given.empty() ? std::decay_t<decltype(target)>(dflt) : given;
  };
  try {
    if (converge->parsed()) {
      if (!dts.empty()) throw ConfigError("converge sets dt = 1/N; --dt is not accepted");
      fill(cfg.ns, ns, {8, 16, 32, 64});
      fill(cfg.betas, betas, {1.0, 2.0});
      fill(cfg.nus, nus, {0.3, 0.499});
      return cmd_converge(cfg, out, err);
    }
    if (precond->parsed()) {
      fill(cfg.ns, ns, {8, 16, 32, 64});
      fill(cfg.betas, betas, {0.0, 1.0, 2.0});
      fill(cfg.nus, nus, {0.3, 0.499});
      fill(cfg.dts, dts, {1e-1, 1e-2, 1e-3});
      return cmd_precond(cfg, out, err);
    }
    if (check->parsed()) {
      fill(cfg.ns, ns, {4});
      fill(cfg.betas, betas, {1.0});
      fill(cfg.nus, nus, {0.3});
      fill(cfg.dts, dts, {1e-1});
      return cmd_check(cfg, out, err);
    }
    fill(cfg.ns, ns, {16});
    fill(cfg.betas, betas, {1.0});
    fill(cfg.nus, nus, {0.3});
    fill(cfg.dts, dts, {0.0625});
    return cmd_solve(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return exit_usage;
  } catch (const NotConverged& e) {
    err << "solver failure: " << e.what() << '\n';
    return exit_solver;
  } catch (const Breakdown& e) {
    err << "solver failure: " << e.what() << '\n';
    return exit_solver;
  } catch (const ElementError& e) {
    err << "element error: " << e.what() << '\n';
    return exit_solver;
  }
}

}  // namespace biot
