// Command-line front end: run, sweep, refine, regularize and validate a scenario config.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ns1d/errors.hpp"
#include "ns1d/studies.hpp"

namespace fs = std::filesystem;
using namespace ns1d;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kIoError = 2;

fs::path output_dir(const std::string& flag, const Scenario& s) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("NS1D_OUTPUT_DIR"); env && *env) return fs::path(env) / s.name;
  return fs::path("out") / s.name;
}

Scenario load(const std::string& path) {
  Scenario s = load_config(path);
  for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
  return s;
}

void print_validation(const Scenario& s) {
  std::printf("scenario %s: init=%s form=%s L=%g N=%zu T=%g output_dt=%g safety=%g\n", s.name.c_str(),
              to_string(s.init), to_string(s.form), s.L, s.N, s.T, s.output_dt, s.safety);
  std::printf("params: alpha=%g gamma=%g a=%g mu=%g eps=%g beta=%g\n", s.params.alpha, s.params.gamma, s.params.a,
              s.params.mu0, s.params.eps, s.params.beta());
  for (const auto& c : s.validation.conditions) {
    std::printf("  [%s] %s: %s\n", c.pass ? "ok" : "violated", c.name.c_str(), c.statement.c_str());
  }
  std::printf("inside_theorem=%s\n", s.validation.inside_theorem ? "yes" : "no");
}

void report_runs(const ScenarioResult& r, const fs::path& dir) {
  for (const Trajectory& tr : r.runs) {
    std::printf("%s-form: %s after %zu steps, min rho %.6g, gronwall %s", to_string(tr.form), to_string(tr.status),
                tr.steps, tr.min_rho, to_string(tr.gronwall));
    if (tr.breach) std::printf(", vacuum at t=%.6g x=%.6g", tr.breach->t, tr.breach->x);
    if (!tr.failure.empty()) std::printf(" (%s)", tr.failure.c_str());
    std::printf("\n");
  }
  std::printf("output: %s\n", dir.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D compressible Navier-Stokes with density-dependent viscosity"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  unsigned threads = 0;
  std::vector<double> alphas, gammas;
  std::vector<std::size_t> Ns;
  std::vector<int> ns;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write time series, snapshots and summary");
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an (alpha, gamma) grid and write sweep.csv");
  auto* refine_cmd = app.add_subcommand("refine", "Grid refinement study, writes orders.csv");
  auto* reg_cmd = app.add_subcommand("regularize", "Viscosity-floor / mollifier study, writes regularize.csv");
  auto* validate_cmd = app.add_subcommand("validate", "Load a config and report the parameter checks");

  for (auto* sub : {run_cmd, sweep_cmd, refine_cmd, reg_cmd, validate_cmd}) {
    sub->add_option("config", config, "Scenario config file")->required();
  }
  for (auto* sub : {run_cmd, sweep_cmd, refine_cmd, reg_cmd}) {
    sub->add_option("-o,--out", out, "Output directory (default: $NS1D_OUTPUT_DIR/<name> or out/<name>)");
  }
  for (auto* sub : {sweep_cmd, refine_cmd, reg_cmd}) {
    sub->add_option("-j,--threads", threads, "Worker threads (0: all cores)");
  }
  sweep_cmd->add_option("--alpha", alphas, "Alpha grid")->required()->expected(1, -1);
  sweep_cmd->add_option("--gamma", gammas, "Gamma grid")->required()->expected(1, -1);
  refine_cmd->add_option("--N", Ns, "Resolutions, strictly increasing, at least three")->required()->expected(3, -1);
  reg_cmd->add_option("--n", ns, "Regularization indices, strictly increasing")->required()->expected(1, -1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const Scenario s = load(config);
    if (validate_cmd->parsed()) {
      print_validation(s);
      return kOk;
    }
    const fs::path dir = output_dir(out, s);
    if (run_cmd->parsed()) {
      const ScenarioResult r = run_scenario(s, dir);
      report_runs(r, dir);
    } else if (sweep_cmd->parsed()) {
      ensure_directory(dir);
      const auto rows = sweep(s, alphas, gammas, threads);
      sweep_table(rows).write(dir / "sweep.csv");
      std::size_t vac = 0;
      for (const auto& r : rows) vac += r.status == "vacuum";
      std::printf("%zu runs, %zu vacuum breaches\noutput: %s\n", rows.size(), vac, (dir / "sweep.csv").string().c_str());
    } else if (refine_cmd->parsed()) {
      ensure_directory(dir);
      const RefinementResult r = refinement_study(s, Ns, threads);
      const CsvTable t = orders_table(r);
      t.write(dir / "orders.csv");
      std::cout << t.str();
    } else if (reg_cmd->parsed()) {
      ensure_directory(dir);
      const RegularizationResult r = regularization_study(s, ns, threads);
      const CsvTable t = regularization_table(r);
      t.write(dir / "regularize.csv");
      std::cout << t.str();
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIoError;
  }
  return kOk;
}
