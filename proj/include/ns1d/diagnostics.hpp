/**
 * @file diagnostics.hpp
 * @brief Entropy, moment and bound functionals of a flow state, and the residuals of the
 *        identities that tie the two formulations together.
 *
 * Functions taking a FlowState accept either form; they convert internally where they
 * need u or v.
 */
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ns1d/constitutive.hpp"
#include "ns1d/mesh.hpp"
#include "ns1d/solver.hpp"

namespace ns1d {

/// int [rho u^2 / 2 + p(rho / rho_bar)] dx
double energy_functional(const FlowState& state, const Mesh& mesh, const Params& p, const BackgroundProfile& profile);

/// int [rho v^2 / 2 + p(rho / rho_bar)] dx with v = u + d/dx phi(rho)
double bd_functional(const FlowState& state, const Mesh& mesh, const Params& p, const BackgroundProfile& profile);

/// int mu(rho) (d/dx u)^2 dx
double dissipation_u_rate(const FlowState& state, const Mesh& mesh, const Params& p);

/// Pointwise d/dx phi(rho) * d/dx P(rho). Analytically gamma a mu rho^(gamma-3) (d/dx rho)^2 >= 0.
Field bd_dissipation_integrand(const FlowState& state, const Mesh& mesh, const Params& p);

struct BdDissipation {
  double value;  ///< max(raw, 0)
  double raw;
};

BdDissipation dissipation_bd_rate(const FlowState& state, const Mesh& mesh, const Params& p);

/// max_i |rho_i^beta u_i| with beta from Params::beta().
double weighted_sup(const FlowState& state, const Mesh& mesh, const Params& p);

/// (int rho |u|^2)^{1/2}
double kinetic_l2(const FlowState& state, const Mesh& mesh, const Params& p);

/// (int rho |v|^(p+2))^{1/(p+2)}
double v_moment(const FlowState& state, const Mesh& mesh, const Params& p, int order);

/// One sample of the quantities feeding the moment bound.
struct GronwallSample {
  double t;
  double weighted_sup;  ///< ||rho^beta u||_inf
  double kinetic_l2;    ///< ||sqrt(rho) u||_2
  double rho_max;       ///< ||rho||_inf
};

/// Integrand A(s) of the moment bound for order p.
double gronwall_forcing(const GronwallSample& s, const Params& p, int order);

/// Upper bound for v_moment(order) at the last sample time:
///   (M0^(p+2) + k (p+2) I)^(1/(p+2)) * exp(k I),  I = int_0^t A(s) ds (trapezoid),
/// with k = gamma a / mu0 and M0 the initial moment. Empty when gamma - alpha - beta < 0,
/// where the bound would need the lower density bound it is meant to deliver.
std::optional<double> gronwall_bound_v(std::span<const GronwallSample> history, const Params& p, int order,
                                       double initial_moment);

/// L2 norm over the interior cells of the discrete residual of the reciprocal-density equation
///   d/dt(1/rho) - d/dx(mu/rho d/dx(1/rho)) + 2 mu (d/dx(1/rho))^2 + 2 v d/dx(1/rho) - d/dx(v/rho)
/// with a forward difference in time and spatial terms at the earlier state.
double reciprocal_residual(const FlowState& before, const FlowState& after, const Mesh& mesh, const Params& p);

/// || grad_c P(rho) - gamma a rho^(gamma+1)/mu(rho) (v - u) ||_2 with v - u = grad_c phi(rho).
double pressure_identity_residual(const FlowState& state, const Mesh& mesh, const Params& p);

/// Pointwise rho d/dx((mu/rho^2) d/dx(rho u)) - [d/dx(mu d/dx u) + rho u d^2/dx^2 phi(rho)] on
/// cells 2..N-3 (zero elsewhere); vanishes analytically.
Field momentum_identity_residual(const FlowState& state, const Mesh& mesh, const Params& p);

struct DensityReport {
  double min_rho;
  double max_rho;
  double inv_rho_max;
  double rho_h1;  ///< ||rho - rho_bar||_{H1}
};

DensityReport density_report(const FlowState& state, const Mesh& mesh, const BackgroundProfile& profile,
                             const Params& p);

struct MomentRecord {
  int order;
  double value;
  std::optional<double> bound;
};

/// Every monitored quantity at one output time. diss_* are cumulative time integrals.
struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double bd_entropy = 0.0;
  double diss_u = 0.0;
  double diss_bd = 0.0;
  double diss_bd_raw = 0.0;
  double min_rho = 0.0;
  double max_rho = 0.0;
  double inv_rho_max = 0.0;
  double v_inf = 0.0;
  double wvel_inf = 0.0;
  double wvel_l2t = 0.0;  ///< (int_0^t ||rho^beta u||_inf^2 dt)^{1/2}
  double rho_h1 = 0.0;
  double resid_recip = 0.0;
  double resid_pident = 0.0;
  std::vector<MomentRecord> moments;
};

}  // namespace ns1d
