/**
 * @file run.hpp
 * @brief Time integration from t = 0 to T with adaptive steps and diagnostics at a fixed cadence.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ns1d/constitutive.hpp"
#include "ns1d/diagnostics.hpp"
#include "ns1d/mesh.hpp"
#include "ns1d/solver.hpp"

namespace ns1d {

struct RunOptions {
  double T = 1.0;
  double output_dt = 0.1;
  double safety = 0.4;
  std::vector<int> moment_orders{0, 2, 8, 30};
  double gronwall_slack = 0.10;
  /// Keep the full fields at every output time (otherwise only the last frame keeps them).
  bool keep_fields = true;
};

struct Frame {
  FlowState state;
  DiagnosticsRecord diag;
};

enum class RunStatus { Completed, VacuumBreach, Failed };
enum class Verdict { Pass, Fail, Unavailable };

const char* to_string(RunStatus s);
const char* to_string(Verdict v);

struct BreachInfo {
  double t;
  double x;
  std::size_t cell;
  double rho;
};

struct Trajectory {
  Form form = Form::U;
  RunStatus status = RunStatus::Completed;
  std::optional<BreachInfo> breach;
  std::string failure;
  std::vector<Frame> frames;
  std::vector<GronwallSample> history;
  std::size_t steps = 0;
  double min_rho = 0.0;  ///< over every step, not just output frames
  double max_rho = 0.0;
  double min_mu = 0.0;   ///< min over the run of mu0 rho^alpha (without floor)
  Verdict gronwall = Verdict::Unavailable;

  const Frame& last() const { return frames.back(); }
};

/// Integrates `initial` (U-form; converted when form == V) and records diagnostics at
/// t = 0, output_dt, 2 output_dt, ..., T. A vacuum breach or non-finite state ends the run
/// and is recorded in the trajectory; configuration errors propagate.
Trajectory run(const FlowState& initial, Form form, const Mesh& mesh, const Params& p, const BackgroundProfile& profile,
               const RunOptions& options);

/// All diagnostics of one state. `probe` is the state one step later, used for the
/// reciprocal-equation residual (NaN when absent).
DiagnosticsRecord measure(const FlowState& state, const std::optional<FlowState>& probe, const Mesh& mesh,
                          const Params& p, const BackgroundProfile& profile);

}  // namespace ns1d
