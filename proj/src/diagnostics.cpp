#include "ns1d/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "ns1d/errors.hpp"

namespace ns1d {

namespace {

template <class F>
Field map(const Field& rho, F&& f) {
  Field out(rho.size());
  std::transform(rho.begin(), rho.end(), out.begin(), f);
  return out;
}

double l2_interior(const Field& r, const Mesh& mesh) {
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) s += r[i] * r[i];
  return std::sqrt(s * mesh.dx());
}

double kinetic_like(const Field& rho, const Field& w, const Field& rho_bar, const Mesh& mesh, const Params& p) {
  Field density(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    density[i] = 0.5 * rho[i] * w[i] * w[i] + relative_pressure(rho[i], rho_bar[i], p);
  }
  return integrate(density, mesh);
}

}  // namespace

double energy_functional(const FlowState& state, const Mesh& mesh, const Params& p, const BackgroundProfile& profile) {
  const FlowState s = to_form(state, Form::U, mesh, p);
  return kinetic_like(s.rho, s.vel, profile.values, mesh, p);
}

double bd_functional(const FlowState& state, const Mesh& mesh, const Params& p, const BackgroundProfile& profile) {
  const FlowState s = to_form(state, Form::V, mesh, p);
  return kinetic_like(s.rho, s.vel, profile.values, mesh, p);
}

double dissipation_u_rate(const FlowState& state, const Mesh& mesh, const Params& p) {
  const FlowState s = to_form(state, Form::U, mesh, p);
  const Field du = grad_c(s.vel, mesh);
  Field integrand(du.size());
  for (std::size_t i = 0; i < du.size(); ++i) integrand[i] = viscosity(s.rho[i], p) * du[i] * du[i];
  return integrate(integrand, mesh);
}

Field bd_dissipation_integrand(const FlowState& state, const Mesh& mesh, const Params& p) {
  const Field dphi_x = grad_c(map(state.rho, [&](double r) { return phi(r, p); }), mesh);
  const Field dP = grad_c(map(state.rho, [&](double r) { return pressure(r, p); }), mesh);
  Field out(dphi_x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = dphi_x[i] * dP[i];
  return out;
}

BdDissipation dissipation_bd_rate(const FlowState& state, const Mesh& mesh, const Params& p) {
  const double raw = integrate(bd_dissipation_integrand(state, mesh, p), mesh);
  return {std::max(raw, 0.0), raw};
}

double weighted_sup(const FlowState& state, const Mesh& mesh, const Params& p) {
  const FlowState s = to_form(state, Form::U, mesh, p);
  const double beta = p.beta();
  double m = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) m = std::max(m, std::abs(std::pow(s.rho[i], beta) * s.vel[i]));
  return m;
}

double kinetic_l2(const FlowState& state, const Mesh& mesh, const Params& p) {
  const FlowState s = to_form(state, Form::U, mesh, p);
  Field e(s.rho.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = s.rho[i] * s.vel[i] * s.vel[i];
  return std::sqrt(integrate(e, mesh));
}

double v_moment(const FlowState& state, const Mesh& mesh, const Params& p, int order) {
  if (order < 0) {
    throw ConfigError("moment order must be non-negative, got " + std::to_string(order));
  }
  const FlowState s = to_form(state, Form::V, mesh, p);
  const double q = order + 2.0;
  // Scale by the sup to keep |v|^q representable for large q.
  double vmax = 0.0;
  for (double v : s.vel) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) return 0.0;
  Field e(s.rho.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = s.rho[i] * std::pow(std::abs(s.vel[i]) / vmax, q);
  return vmax * std::pow(integrate(e, mesh), 1.0 / q);
}

double gronwall_forcing(const GronwallSample& s, const Params& p, int order) {
  const double q = order + 2.0;
  const double rho_exp = p.gamma - p.alpha - order * p.beta() / q;
  return std::pow(s.weighted_sup, order / q) * std::pow(s.kinetic_l2, 2.0 / q) * std::pow(s.rho_max, rho_exp);
}

std::optional<double> gronwall_bound_v(std::span<const GronwallSample> history, const Params& p, int order,
                                       double initial_moment) {
  if (p.gamma - p.alpha - p.beta() < 0.0) {
    return std::nullopt;
  }
  const double q = order + 2.0;
  double integral = 0.0;
  for (std::size_t k = 1; k < history.size(); ++k) {
    const double dt = history[k].t - history[k - 1].t;
    integral += 0.5 * dt * (gronwall_forcing(history[k - 1], p, order) + gronwall_forcing(history[k], p, order));
  }
  const double k = p.gamma * p.a / p.mu0;
  return std::pow(std::pow(initial_moment, q) + k * q * integral, 1.0 / q) * std::exp(k * integral);
}

double reciprocal_residual(const FlowState& before, const FlowState& after, const Mesh& mesh, const Params& p) {
  const double dt = after.t - before.t;
  if (!(dt > 0.0)) {
    throw DomainError("reciprocal_residual: states must be ordered in time");
  }
  const FlowState s0 = to_form(before, Form::V, mesh, p);
  const FlowState s1 = to_form(after, Form::V, mesh, p);
  const std::size_t N = s0.rho.size();

  const Field w = map(s0.rho, [](double r) { return 1.0 / r; });
  const Field nu = map(s0.rho, [&](double r) { return viscosity(r, p) / r; });
  const Field diff = diffuse(nu, w, mesh);
  const Field dw = grad_c(w, mesh);
  Field v_over_rho(N);
  for (std::size_t i = 0; i < N; ++i) v_over_rho[i] = s0.vel[i] * w[i];
  const Field dvw = grad_c(v_over_rho, mesh);

  Field r(N, 0.0);
  for (std::size_t i = 1; i + 1 < N; ++i) {
    const double dwdt = (1.0 / s1.rho[i] - w[i]) / dt;
    r[i] = dwdt - diff[i] + 2.0 * viscosity(s0.rho[i], p) * dw[i] * dw[i] + 2.0 * s0.vel[i] * dw[i] - dvw[i];
  }
  return l2_interior(r, mesh);
}

double pressure_identity_residual(const FlowState& state, const Mesh& mesh, const Params& p) {
  const Field dP = grad_c(map(state.rho, [&](double r) { return pressure(r, p); }), mesh);
  const Field dphi_x = grad_c(map(state.rho, [&](double r) { return phi(r, p); }), mesh);
  Field r(dP.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double rho = state.rho[i];
    r[i] = dP[i] - p.gamma * p.a * std::pow(rho, p.gamma + 1.0) / viscosity(rho, p) * dphi_x[i];
  }
  return norm(r, mesh, NormSpec::lp(2.0));
}

Field momentum_identity_residual(const FlowState& state, const Mesh& mesh, const Params& p) {
  const FlowState s = to_form(state, Form::U, mesh, p);
  const std::size_t N = s.rho.size();
  const Field& rho = s.rho;
  const Field& u = s.vel;

  Field mom(N);
  for (std::size_t i = 0; i < N; ++i) mom[i] = rho[i] * u[i];
  const Field dmom = grad_c(mom, mesh);
  Field inner(N);
  for (std::size_t i = 0; i < N; ++i) inner[i] = viscosity(rho[i], p) / (rho[i] * rho[i]) * dmom[i];
  const Field lhs_grad = grad_c(inner, mesh);

  const Field du = grad_c(u, mesh);
  Field stress(N);
  for (std::size_t i = 0; i < N; ++i) stress[i] = viscosity(rho[i], p) * du[i];
  const Field dstress = grad_c(stress, mesh);
  const Field phi_xx = grad_c(grad_c(map(rho, [&](double r) { return phi(r, p); }), mesh), mesh);

  Field r(N, 0.0);
  for (std::size_t i = 2; i + 2 < N; ++i) {
    r[i] = rho[i] * lhs_grad[i] - (dstress[i] + rho[i] * u[i] * phi_xx[i]);
  }
  return r;
}

DensityReport density_report(const FlowState& state, const Mesh& mesh, const BackgroundProfile& profile,
                             const Params&) {
  const auto [lo, hi] = std::minmax_element(state.rho.begin(), state.rho.end());
  Field diff(state.rho.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = state.rho[i] - profile.values[i];
  return {*lo, *hi, 1.0 / *lo, norm(diff, mesh, NormSpec::h1())};
}

}  // namespace ns1d
