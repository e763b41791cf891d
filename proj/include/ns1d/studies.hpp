/**
 * @file studies.hpp
 * @brief Scenario runs and the studies built on them: (alpha, gamma) sweeps, grid refinement
 *        and regularization convergence. Each study returns its table in memory; the write_*
 *        functions put it on disk.
 */
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ns1d/csv.hpp"
#include "ns1d/run.hpp"
#include "ns1d/scenario.hpp"

namespace ns1d {

struct FormDiffRow {
  double t;
  double rho_diff_inf;  ///< ||rho_U - rho_V||_inf
  double u_diff_inf;    ///< ||u_U - u_V||_inf
};

struct ScenarioResult {
  Scenario scenario;
  InitialData init;
  std::vector<Trajectory> runs;  ///< one per form, in Scenario::forms() order
  std::vector<FormDiffRow> formdiff;
};

/// Runs every requested form without touching the disk.
ScenarioResult simulate(const Scenario& s, bool keep_fields = true);

CsvTable timeseries_table(const Trajectory& tr);
CsvTable fields_table(const Frame& frame, const Mesh& mesh, const Params& p);
CsvTable summary_table(const ScenarioResult& r);
CsvTable formdiff_table(const std::vector<FormDiffRow>& rows);

/// Writes timeseries.csv, fields_<t>.csv and summary.csv (and formdiff.csv plus U/ and V/
/// subdirectories when both forms ran). Throws IoError.
void write_scenario(const ScenarioResult& r, const std::filesystem::path& out_dir);

/// simulate + write_scenario.
ScenarioResult run_scenario(const Scenario& s, const std::filesystem::path& out_dir);

// ---------------------------------------------------------------------------------------------

struct SweepRow {
  double alpha = 0.0;
  double gamma = 0.0;
  bool inside_theorem = false;
  std::string status;  ///< completed | vacuum | failed | invalid
  double min_rho = 0.0;
  std::optional<double> breach_time;
  std::optional<double> breach_x;
  double sup_v_inf = 0.0;
  std::string gronwall;  ///< pass | fail | unavailable | undefined
  std::string note;
};

/// One run per (alpha, gamma), alpha-major order, rows computed independently on up to
/// `threads` workers (0: hardware concurrency). With form = both only the U-form runs.
std::vector<SweepRow> sweep(const Scenario& base, const std::vector<double>& alpha_grid,
                            const std::vector<double>& gamma_grid, unsigned threads = 0);
CsvTable sweep_table(const std::vector<SweepRow>& rows);

// ---------------------------------------------------------------------------------------------

struct OrderRow {
  std::string quantity;
  std::vector<std::size_t> resolutions;
  double value_coarse = 0.0;
  double value_fine = 0.0;
  std::optional<double> order;
  std::string flag;  ///< ok | round-off | non-monotone | non-finite | failed-run
};

struct RefinementResult {
  std::vector<std::size_t> N;
  std::vector<ScenarioResult> runs;  ///< final frames keep their fields
  std::vector<OrderRow> rows;

  /// First row for `quantity` whose resolutions start at `n_coarse`; nullptr when absent.
  const OrderRow* find(const std::string& quantity, std::size_t n_coarse) const;
};

/// Observed order from two errors at resolutions n_coarse < n_fine. Undefined (with the
/// reason in `flag`) for non-finite values, errors at round-off level or errors that do
/// not decrease.
OrderRow observed_order(std::string quantity, std::vector<std::size_t> resolutions, double e_coarse,
                        double e_fine, double roundoff_scale);

/// Linear interpolation of a cell-centred field onto the centres of another mesh.
Field transfer(const Field& f, const Mesh& from, const Mesh& to);

/// Runs the scenario at every N and reports self-convergence orders at T for rho and the
/// velocity (from consecutive triples), and for the residual diagnostics and the U/V
/// density difference (from consecutive pairs). N_list must be strictly increasing with at
/// least three entries (ConfigError otherwise).
RefinementResult refinement_study(const Scenario& s, const std::vector<std::size_t>& N_list, unsigned threads = 0);
CsvTable orders_table(const RefinementResult& r);

// ---------------------------------------------------------------------------------------------

struct RegularizationRow {
  int n = 0;
  std::string status;
  bool floor_active = false;  ///< min mu(rho) over the run fell below 1/n
  double min_mu = 0.0;
  double floor = 0.0;         ///< 1/n
  bool kernel_identity = false;  ///< 1/n < dx: mollification is the identity
  double kernel_halfwidth = 0.0;
  double diff_to_nmax = 0.0;     ///< ||rho_n - rho_{n_max}||_inf at the final frame
  double diff_to_baseline = 0.0; ///< ||rho_n - rho||_inf against the unregularized run
};

struct RegularizationResult {
  std::vector<RegularizationRow> rows;
  Trajectory baseline;
};

/// For each n: viscosity floor 1/n and K_n-mollified data. n_list must be strictly
/// increasing and positive (ConfigError otherwise). Uses the first form of the scenario.
RegularizationResult regularization_study(const Scenario& s, const std::vector<int>& n_list, unsigned threads = 0);
CsvTable regularization_table(const RegularizationResult& r);

/// Calls f(i) for i in [0, count) on up to `threads` workers; results land in index order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, unsigned threads, F&& f);

}  // namespace ns1d

#include "ns1d/detail/parallel.hpp"
