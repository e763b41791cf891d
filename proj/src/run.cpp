#include "ns1d/run.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ns1d/errors.hpp"

namespace ns1d {

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed:
      return "completed";
    case RunStatus::VacuumBreach:
      return "vacuum";
    case RunStatus::Failed:
      return "failed";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Unavailable:
      return "unavailable";
  }
  return "?";
}

namespace {

struct Rates {
  double diss_u;
  BdDissipation diss_bd;
  GronwallSample sample;
};

Rates rates_of(const FlowState& s, const Mesh& mesh, const Params& p) {
  const FlowState u_state = to_form(s, Form::U, mesh, p);
  const double rho_max = *std::max_element(s.rho.begin(), s.rho.end());
  return {dissipation_u_rate(u_state, mesh, p), dissipation_bd_rate(s, mesh, p),
          GronwallSample{s.t, weighted_sup(u_state, mesh, p), kinetic_l2(u_state, mesh, p), rho_max}};
}

std::optional<FlowState> probe_step(const FlowState& s, const Mesh& mesh, const Params& p, double safety) {
  try {
    const double dt = cfl_dt(s, mesh, p, safety);
    if (!(dt > 0.0) || !std::isfinite(dt)) return std::nullopt;
    return step(s, mesh, p, dt).first;
  } catch (const VacuumBreach&) {
    return std::nullopt;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace

DiagnosticsRecord measure(const FlowState& state, const std::optional<FlowState>& probe, const Mesh& mesh,
                          const Params& p, const BackgroundProfile& profile) {
  const FlowState v_state = to_form(state, Form::V, mesh, p);
  DiagnosticsRecord d;
  d.t = state.t;
  d.mass = integrate(state.rho, mesh);
  d.energy = energy_functional(state, mesh, p, profile);
  d.bd_entropy = bd_functional(state, mesh, p, profile);
  const DensityReport dr = density_report(state, mesh, profile, p);
  d.min_rho = dr.min_rho;
  d.max_rho = dr.max_rho;
  d.inv_rho_max = dr.inv_rho_max;
  d.rho_h1 = dr.rho_h1;
  d.v_inf = norm(v_state.vel, mesh, NormSpec::linf());
  d.wvel_inf = weighted_sup(state, mesh, p);
  d.resid_pident = pressure_identity_residual(state, mesh, p);
  d.resid_recip = probe ? reciprocal_residual(state, *probe, mesh, p) : std::numeric_limits<double>::quiet_NaN();
  return d;
}

Trajectory run(const FlowState& initial, Form form, const Mesh& mesh, const Params& p, const BackgroundProfile& profile,
               const RunOptions& options) {
  if (!(options.T >= 0.0) || !std::isfinite(options.T)) {
    throw ConfigError("end time T must be finite and non-negative");
  }
  if (!(options.output_dt > 0.0)) {
    throw ConfigError("output_dt must be positive");
  }
  if (!(options.safety > 0.0 && options.safety <= 1.0)) {
    throw ConfigError("CFL safety factor must lie in (0, 1]");
  }
  if (initial.form != Form::U) {
    throw ConfigError("run expects U-form initial data");
  }

  Trajectory tr;
  tr.form = form;

  const std::size_t N = initial.rho.size();
  const FarField far{initial.rho[0], initial.rho[N - 1], initial.vel[0], initial.vel[N - 1]};
  FlowState state = to_form(initial, form, mesh, p);
  state.t = 0.0;
  apply_far_field(state, far);

  std::vector<double> initial_moment;
  for (int order : options.moment_orders) initial_moment.push_back(v_moment(state, mesh, p, order));

  double diss_u = 0.0;
  double diss_bd = 0.0;
  double diss_bd_raw = 0.0;
  double wvel2 = 0.0;
  Rates prev = rates_of(state, mesh, p);
  tr.history.push_back(prev.sample);
  tr.min_rho = *std::min_element(state.rho.begin(), state.rho.end());
  tr.max_rho = prev.sample.rho_max;

  bool bound_available = true;
  bool bound_ok = true;

  auto record = [&]() {
    std::optional<FlowState> probe = probe_step(state, mesh, p, options.safety);
    DiagnosticsRecord d = measure(state, probe, mesh, p, profile);
    d.diss_u = diss_u;
    d.diss_bd = diss_bd;
    d.diss_bd_raw = diss_bd_raw;
    d.wvel_l2t = std::sqrt(wvel2);
    for (std::size_t k = 0; k < options.moment_orders.size(); ++k) {
      const int order = options.moment_orders[k];
      MomentRecord m{order, v_moment(state, mesh, p, order), gronwall_bound_v(tr.history, p, order, initial_moment[k])};
      if (!m.bound) {
        bound_available = false;
      } else if (m.value > *m.bound * (1.0 + options.gronwall_slack)) {
        bound_ok = false;
      }
      d.moments.push_back(m);
    }
    if (!options.keep_fields && !tr.frames.empty()) {
      tr.frames.back().state.rho.clear();
      tr.frames.back().state.vel.clear();
    }
    tr.frames.push_back({state, std::move(d)});
  };

  record();

  std::size_t next_index = 1;
  auto output_time = [&](std::size_t k) { return std::min(static_cast<double>(k) * options.output_dt, options.T); };

  try {
    while (state.t < options.T) {
      const double target = output_time(next_index);
      double dt = cfl_dt(state, mesh, p, options.safety);
      bool lands = false;
      if (state.t + dt >= target) {
        dt = target - state.t;
        lands = true;
      }
      auto [next, report] = step(state, mesh, p, dt);
      if (lands) next.t = target;
      state = std::move(next);
      ++tr.steps;

      const Rates now = rates_of(state, mesh, p);
      const double h = state.t - prev.sample.t;
      diss_u += 0.5 * h * (prev.diss_u + now.diss_u);
      diss_bd += 0.5 * h * (prev.diss_bd.value + now.diss_bd.value);
      diss_bd_raw += 0.5 * h * (prev.diss_bd.raw + now.diss_bd.raw);
      wvel2 += 0.5 * h * (prev.sample.weighted_sup * prev.sample.weighted_sup +
                          now.sample.weighted_sup * now.sample.weighted_sup);
      tr.history.push_back(now.sample);
      prev = now;
      tr.min_rho = std::min(tr.min_rho, report.min_rho);
      tr.max_rho = std::max(tr.max_rho, report.max_rho);

      if (lands) {
        record();
        ++next_index;
      }
    }
  } catch (const VacuumBreach& e) {
    tr.status = RunStatus::VacuumBreach;
    tr.breach = BreachInfo{e.time(), e.x(), e.cell(), e.rho()};
    tr.min_rho = std::min(tr.min_rho, e.rho());
  } catch (const DomainError& e) {
    tr.status = RunStatus::Failed;
    tr.failure = e.what();
  }

  tr.min_mu = p.mu0 * std::pow(std::max(tr.min_rho, 0.0), p.alpha);
  if (!bound_available) {
    tr.gronwall = Verdict::Unavailable;
  } else {
    tr.gronwall = bound_ok ? Verdict::Pass : Verdict::Fail;
  }
  return tr;
}

}  // namespace ns1d
