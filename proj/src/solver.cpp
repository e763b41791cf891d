#include "ns1d/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ns1d/errors.hpp"

namespace ns1d {

const char* to_string(Form f) { return f == Form::U ? "U" : "V"; }

namespace {

void require_form(const FlowState& s, Form f, const char* what) {
  if (s.form != f) {
    throw DomainError(std::string(what) + ": expected a " + to_string(f) + "-form state");
  }
}

void require_positive_density(const FlowState& s, const Mesh& mesh, const char* what) {
  if (s.rho.size() != mesh.size() || s.vel.size() != mesh.size()) {
    throw ConfigError(std::string(what) + ": state size does not match mesh");
  }
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    if (!(s.rho[i] > 0.0)) {
      throw DomainError(std::string(what) + ": vacuum or invalid density at cell " + std::to_string(i));
    }
  }
}

Field phi_field(const Field& rho, const Params& p) {
  Field out(rho.size());
  std::transform(rho.begin(), rho.end(), out.begin(), [&](double r) { return phi(r, p); });
  return out;
}

Field pressure_field(const Field& rho, const Params& p) {
  Field out(rho.size());
  std::transform(rho.begin(), rho.end(), out.begin(), [&](double r) { return pressure(r, p); });
  return out;
}

// The states handed between stages; rho plus the evolved second variable (m = rho u or v).
struct Pair {
  Field rho;
  Field q;
};

void check_stage(const Field& rho, const Field& q, const Mesh& mesh, double t) {
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!std::isfinite(rho[i]) || !std::isfinite(q[i])) {
      throw DomainError("non-finite field at cell " + std::to_string(i) + ", t=" + std::to_string(t));
    }
  }
  const auto it = std::min_element(rho.begin(), rho.end());
  if (*it <= 0.0) {
    const auto cell = static_cast<std::size_t>(it - rho.begin());
    throw VacuumBreach(cell, mesh.x(cell), t, *it);
  }
}

// d/dt (rho, rho u) on interior cells.
/// Fromm reconstruction at face k from the upwind side: f_up +- (f_{up+1} - f_{up-1}) / 4.
/// First order where the stencil would leave the grid.
double upwind_face(const Field& f, std::size_t k, bool from_left) {
  const std::size_t N = f.size();
  if (from_left) {
    if (k < 2) return f[k - 1];
    return f[k - 1] + 0.25 * (f[k] - f[k - 2]);
  }
  if (k + 1 >= N) return f[k];
  return f[k] - 0.25 * (f[k + 1] - f[k - 1]);
}

Pair rhs_u(const Field& rho, const Field& m, const Mesh& mesh, const Params& p) {
  const std::size_t N = rho.size();
  Field u(N);
  for (std::size_t i = 0; i < N; ++i) u[i] = m[i] / rho[i];

  // Convective fluxes at face k (between cells k-1 and k), upwind-biased reconstruction.
  Field mass_face(N + 1, 0.0);
  Field mom_face(N + 1, 0.0);
  for (std::size_t k = 1; k < N; ++k) {
    const double uf = 0.5 * (u[k - 1] + u[k]);
    const bool right = uf >= 0.0;
    double rho_f = upwind_face(rho, k, right);
    if (!(rho_f > 0.0)) rho_f = right ? rho[k - 1] : rho[k];
    mass_face[k] = uf * rho_f;
    mom_face[k] = uf * upwind_face(m, k, right);
  }

  Field mu(N);
  for (std::size_t i = 0; i < N; ++i) mu[i] = viscosity(rho[i], p);
  const Field dP = grad_c(pressure_field(rho, p), mesh);
  const Field visc = diffuse(mu, u, mesh);

  const double inv_h = 1.0 / mesh.dx();
  Pair d{Field(N, 0.0), Field(N, 0.0)};
  for (std::size_t i = 1; i + 1 < N; ++i) {
    d.rho[i] = -(mass_face[i + 1] - mass_face[i]) * inv_h;
    d.q[i] = -(mom_face[i + 1] - mom_face[i]) * inv_h - dP[i] + visc[i];
  }
  return d;
}

// d/dt (rho, v) on interior cells.
/// Second-order one-sided difference (times dx) taken from the upwind side; first order
/// next to the end cells.
double upwind_derivative(const Field& f, std::size_t i, bool from_left) {
  const std::size_t N = f.size();
  if (from_left) {
    if (i < 2) return f[i] - f[i - 1];
    return 0.5 * (3.0 * f[i] - 4.0 * f[i - 1] + f[i - 2]);
  }
  if (i + 2 >= N) return f[i + 1] - f[i];
  return -0.5 * (3.0 * f[i] - 4.0 * f[i + 1] + f[i + 2]);
}

Pair rhs_v(const Field& rho, const Field& v, const Mesh& mesh, const Params& p) {
  const std::size_t N = rho.size();
  const Field dphi_x = grad_c(phi_field(rho, p), mesh);

  Field nu(N);
  Field flux(N);
  for (std::size_t i = 0; i < N; ++i) {
    nu[i] = viscosity(rho[i], p) / rho[i];
    flux[i] = rho[i] * v[i];
  }
  const Field diff = diffuse(nu, rho, mesh);
  const Field conv = div_flux(flux, mesh);
  const Field dP = grad_c(pressure_field(rho, p), mesh);

  const double inv_h = 1.0 / mesh.dx();
  Pair d{Field(N, 0.0), Field(N, 0.0)};
  for (std::size_t i = 1; i + 1 < N; ++i) {
    const double u = v[i] - dphi_x[i];
    const double dv = upwind_derivative(v, i, u >= 0.0) * inv_h;
    d.rho[i] = diff[i] - conv[i];
    d.q[i] = -u * dv - dP[i] / rho[i];
  }
  return d;
}

template <class Rhs>
Pair heun(const Pair& y, double dt, double t, const Mesh& mesh, Rhs&& rhs) {
  const std::size_t N = y.rho.size();
  const Pair k1 = rhs(y);
  Pair s{y.rho, y.q};
  for (std::size_t i = 0; i < N; ++i) {
    s.rho[i] += dt * k1.rho[i];
    s.q[i] += dt * k1.q[i];
  }
  check_stage(s.rho, s.q, mesh, t + dt);
  const Pair k2 = rhs(s);
  Pair out{Field(N), Field(N)};
  for (std::size_t i = 0; i < N; ++i) {
    out.rho[i] = 0.5 * (y.rho[i] + s.rho[i] + dt * k2.rho[i]);
    out.q[i] = 0.5 * (y.q[i] + s.q[i] + dt * k2.q[i]);
  }
  check_stage(out.rho, out.q, mesh, t + dt);
  return out;
}

void check_dt(const FlowState& s, const Mesh& mesh, const Params& p, double dt, double& ratio) {
  const double limit = cfl_dt(s, mesh, p, 1.0);
  if (!(dt >= 0.0)) {
    throw DomainError("time step must be non-negative, got " + std::to_string(dt));
  }
  ratio = dt / limit;
  if (ratio > 1.0 + 1e-12) {
    throw DomainError("time step " + std::to_string(dt) + " exceeds the stability limit " + std::to_string(limit));
  }
}

StepReport make_report(const Field& rho, double dt, double ratio) {
  const auto [lo, hi] = std::minmax_element(rho.begin(), rho.end());
  return {dt, *lo, *hi, ratio};
}

}  // namespace

FlowState effective_velocity(const FlowState& state, const Mesh& mesh, const Params& p) {
  require_form(state, Form::U, "effective_velocity");
  require_positive_density(state, mesh, "effective_velocity");
  const Field g = grad_c(phi_field(state.rho, p), mesh);
  FlowState out{state.rho, state.vel, Form::V, state.t};
  for (std::size_t i = 0; i < g.size(); ++i) out.vel[i] += g[i];
  return out;
}

FlowState recover_u(const FlowState& state, const Mesh& mesh, const Params& p) {
  require_form(state, Form::V, "recover_u");
  require_positive_density(state, mesh, "recover_u");
  const Field g = grad_c(phi_field(state.rho, p), mesh);
  FlowState out{state.rho, state.vel, Form::U, state.t};
  for (std::size_t i = 0; i < g.size(); ++i) out.vel[i] -= g[i];
  return out;
}

FlowState to_form(const FlowState& state, Form form, const Mesh& mesh, const Params& p) {
  if (state.form == form) return state;
  return form == Form::V ? effective_velocity(state, mesh, p) : recover_u(state, mesh, p);
}

void apply_far_field(FlowState& state, const FarField& far) {
  const std::size_t N = state.rho.size();
  state.rho[0] = far.rho_minus;
  state.rho[N - 1] = far.rho_plus;
  // phi(rho) is flat where rho_bar is, so v and u coincide in the far field.
  state.vel[0] = far.u_minus;
  state.vel[N - 1] = far.u_plus;
}

double cfl_dt(const FlowState& state, const Mesh& mesh, const Params& p, double safety) {
  if (!(safety > 0.0 && safety <= 1.0)) {
    throw ConfigError("CFL safety factor must lie in (0, 1], got " + std::to_string(safety));
  }
  for (std::size_t i = 0; i < state.rho.size(); ++i) {
    if (!std::isfinite(state.rho[i]) || !std::isfinite(state.vel[i])) {
      throw DomainError("cfl_dt: non-finite field at cell " + std::to_string(i));
    }
  }
  require_positive_density(state, mesh, "cfl_dt");

  Field speed(state.vel.size());
  std::transform(state.vel.begin(), state.vel.end(), speed.begin(), [](double w) { return std::abs(w); });
  if (state.form == Form::V) {
    const Field u = recover_u(state, mesh, p).vel;
    for (std::size_t i = 0; i < u.size(); ++i) speed[i] = std::max(speed[i], std::abs(u[i]));
  }

  double max_wave = 0.0;
  double max_nu = 0.0;
  for (std::size_t i = 0; i < state.rho.size(); ++i) {
    const double r = state.rho[i];
    const double c = std::sqrt(p.a * p.gamma * std::pow(r, p.gamma - 1.0));
    max_wave = std::max(max_wave, speed[i] + c);
    max_nu = std::max(max_nu, viscosity(r, p) / r);
  }
  const double dx = mesh.dx();
  double dt = std::numeric_limits<double>::infinity();
  if (max_wave > 0.0) dt = std::min(dt, dx / max_wave);
  if (max_nu > 0.0) dt = std::min(dt, dx * dx / (2.0 * max_nu));
  return safety * dt;
}

std::pair<FlowState, StepReport> step_u(const FlowState& state, const Mesh& mesh, const Params& p, double dt) {
  require_form(state, Form::U, "step_u");
  double ratio = 0.0;
  check_dt(state, mesh, p, dt, ratio);

  Pair y{state.rho, Field(state.rho.size())};
  for (std::size_t i = 0; i < y.q.size(); ++i) y.q[i] = state.rho[i] * state.vel[i];
  const Pair next =
      heun(y, dt, state.t, mesh, [&](const Pair& s) { return rhs_u(s.rho, s.q, mesh, p); });

  FlowState out{next.rho, Field(next.rho.size()), Form::U, state.t + dt};
  for (std::size_t i = 0; i < out.vel.size(); ++i) out.vel[i] = next.q[i] / next.rho[i];
  // End cells are not evolved; keep their velocity bit-exact instead of m/rho.
  out.vel.front() = state.vel.front();
  out.vel.back() = state.vel.back();
  return {std::move(out), make_report(next.rho, dt, ratio)};
}

std::pair<FlowState, StepReport> step_v(const FlowState& state, const Mesh& mesh, const Params& p, double dt) {
  require_form(state, Form::V, "step_v");
  double ratio = 0.0;
  check_dt(state, mesh, p, dt, ratio);

  const Pair y{state.rho, state.vel};
  Pair next = heun(y, dt, state.t, mesh, [&](const Pair& s) { return rhs_v(s.rho, s.q, mesh, p); });
  FlowState out{std::move(next.rho), std::move(next.q), Form::V, state.t + dt};
  StepReport report = make_report(out.rho, dt, ratio);
  return {std::move(out), report};
}

std::pair<FlowState, StepReport> step(const FlowState& state, const Mesh& mesh, const Params& p, double dt) {
  return state.form == Form::U ? step_u(state, mesh, p, dt) : step_v(state, mesh, p, dt);
}

}  // namespace ns1d
