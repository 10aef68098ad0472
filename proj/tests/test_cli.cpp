#include "biot/cli.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace biot;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "biot_cli");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("biot_cli_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& s) {
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit 64") {
    CHECK(run({"converge", "--nu", "0.6"}).code == exit_usage);
    CHECK(run({"check", "--N", "0"}).code == exit_usage);
    CHECK(run({"converge", "--dt", "0.1"}).code == exit_usage);
    CHECK(run({"solve", "--N", "4,8"}).code == exit_usage);
    CHECK(run({"solve", "--initial-pressure", "h1"}).code == exit_usage);
    CHECK(run({"solve", "--kappa", "1,2"}).code == exit_usage);
    CHECK(run({"solve", "--gamma-d", "front"}).code == exit_usage);
    CHECK(run({"solve", "--bogus", "1"}).code == exit_usage);
    CHECK(run({}).code == exit_usage);
  }

  TEST_CASE("help exits 0 and lists the flags") {
    const Run r = run({"--help"});
    CHECK(r.code == exit_ok);
    for (const char* flag : {"--N", "--beta", "--nu", "--dt", "--E", "--alpha", "--s0", "--kappa",
                             "--gamma", "--C1", "--T", "--rtol", "--maxit", "--out", "--seed"}) {
      CHECK(r.out.find(flag) != std::string::npos);
    }
  }

  TEST_CASE("converge with a single N") {
    const Run r = run({"converge", "--N", "8", "--beta", "1", "--nu", "0.3"});
    CHECK(r.code == exit_ok);
    CHECK(count_lines(r.out) == 2);
    CHECK(r.out.find("1.00000e+00,3.00000e-01,8,1.25000e-01,") != std::string::npos);
    // No rates, so each rate column is empty.
    CHECK(r.out.find(",,") != std::string::npos);
  }

  TEST_CASE("precond flags non-convergence with exit 2") {
    const Run r = run({"precond", "--maxit", "5", "--N", "8", "--beta", "0", "--dt", "1e-3", "--nu", "0.3"});
    CHECK(r.code == exit_solver);
    CHECK(r.out.find(",false\n") != std::string::npos);
  }

  TEST_CASE("precond rows for a small grid") {
    const Run r = run({"precond", "--N", "4,8", "--beta", "2", "--dt", "1e-2", "--nu", "0.499", "--steps", "2"});
    CHECK(r.code == exit_ok);
    CHECK(count_lines(r.out) == 3);
  }

  TEST_CASE("check subcommand") {
    const Run r = run({"check", "--N", "2"});
    CHECK(r.code == exit_ok);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("infsup") != std::string::npos);
    const Run bad = run({"check", "--N", "4", "--gamma", "0.01"});
    CHECK(bad.code == exit_assertion);
    CHECK(bad.err.find("coercivity") != std::string::npos);
  }

  TEST_CASE("solve runs one step for T = dt") {
    const Run r = run({"solve", "--N", "4", "--T", "0.125", "--dt", "0.125"});
    CHECK(r.code == exit_ok);
    CHECK(r.out.rfind("step,t,iterations,residual,converged\n1,1.25000e-01,", 0) == 0);
    CHECK(r.out.find("steps = 1,") != std::string::npos);
    CHECK(r.out.find("err_p_l2") != std::string::npos);
  }

  TEST_CASE("solve writes the CSV to --out") {
    const auto dir = scratch_dir("out");
    const auto path = dir / "results.csv";
    const Run r = run({"solve", "--N", "4", "--T", "0.25", "--dt", "0.125", "--out", path.string()});
    CHECK(r.code == exit_ok);
    REQUIRE(std::filesystem::exists(path));
    const std::string csv = slurp(path);
    CHECK(csv.rfind("step,t,iterations,residual,converged\n", 0) == 0);
    CHECK(count_lines(csv) == 3);
    CHECK(r.out.find("err_u_energy") != std::string::npos);
  }

  TEST_CASE("output directory from the environment") {
    const auto dir = scratch_dir("env");
    ::setenv("BIOT_OUTPUT_DIR", dir.string().c_str(), 1);
    const Run r = run({"converge", "--N", "4", "--beta", "1", "--nu", "0.3"});
    ::unsetenv("BIOT_OUTPUT_DIR");
    CHECK(r.code == exit_ok);
    CHECK(std::filesystem::exists(dir / "converge.csv"));
    CHECK(r.out.empty());
  }

  TEST_CASE("identical configuration gives byte-identical output") {
    const std::vector<std::string> args{"precond", "--N", "4", "--beta", "1", "--dt", "0.1", "--nu", "0.3",
                                        "--steps", "2"};
    const Run a = run(args), b = run(args);
    CHECK(a.code == exit_ok);
    CHECK(a.out == b.out);
    const Run c = run({"check", "--N", "2", "--seed", "7"}), d = run({"check", "--N", "2", "--seed", "7"});
    CHECK(c.out == d.out);
    const Run s = run({"converge", "--N", "4", "--beta", "1", "--nu", "0.3", "--serial"});
    const Run p = run({"converge", "--N", "4", "--beta", "1", "--nu", "0.3"});
    CHECK(s.out == p.out);
  }

  TEST_CASE("TOML configuration") {
    const auto dir = scratch_dir("toml");
    {
      std::ofstream f(dir / "run.toml");
      f << "N = [4]\nbeta = [2.0]\nT = 0.125\ndt = [0.125]\ngamma = 12.0\n";
    }
    const Run r = run({"solve", "--config", (dir / "run.toml").string()});
    CHECK(r.code == exit_ok);
    CHECK(r.out.find("steps = 1,") != std::string::npos);
    {
      std::ofstream f(dir / "bad.toml");
      f << "N = [4]\nunknown_key = 3\n";
    }
    CHECK(run({"solve", "--config", (dir / "bad.toml").string()}).code == exit_usage);
    // Flags override the file.
    const Run o = run({"solve", "--config", (dir / "run.toml").string(), "--T", "0.25"});
    CHECK(o.out.find("steps = 2,") != std::string::npos);
  }
}
