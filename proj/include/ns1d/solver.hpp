/**
 * @file solver.hpp
 * @brief Explicit integrators for the primitive (rho, u) system and the
 *        effective-velocity (rho, v) system, plus the maps between them.
 *
 * Both steppers use Heun's two-stage scheme on a collocated grid. The two
 * outermost cells hold the far-field state and are never updated.
 */
#pragma once

#include <utility>

#include "ns1d/constitutive.hpp"
#include "ns1d/mesh.hpp"

namespace ns1d {

/// Which velocity a FlowState carries: u (primitive) or v = u + d/dx phi(rho).
enum class Form { U, V };

const char* to_string(Form f);

struct FlowState {
  Field rho;
  Field vel;
  Form form = Form::U;
  double t = 0.0;
};

/// Dirichlet values held in the end cells.
struct FarField {
  double rho_minus = 1.0;
  double rho_plus = 1.0;
  double u_minus = 0.0;
  double u_plus = 0.0;
};

struct StepReport {
  double dt_used = 0.0;
  double min_rho = 0.0;
  double max_rho = 0.0;
  double cfl_ratio = 0.0;
};

/// v = u + grad_c(phi(rho)). Throws DomainError on a non-positive density.
FlowState effective_velocity(const FlowState& state, const Mesh& mesh, const Params& p);

/// u = v - grad_c(phi(rho)), the exact discrete inverse of effective_velocity.
FlowState recover_u(const FlowState& state, const Mesh& mesh, const Params& p);

/// Converts to the requested form (identity when already there).
FlowState to_form(const FlowState& state, Form form, const Mesh& mesh, const Params& p);

/// Overwrites the end cells with the far-field state.
void apply_far_field(FlowState& state, const FarField& far);

/// safety * min(dx / max(|w| + c), dx^2 / (2 max nu)) with c = sqrt(a gamma rho^(gamma-1)),
/// nu = mu(rho)/rho and w = u (U-form) or the larger of |u|, |v| (V-form).
double cfl_dt(const FlowState& state, const Mesh& mesh, const Params& p, double safety);

/// One step of the conservative (rho, rho u) discretisation. Throws VacuumBreach when the
/// density leaves (0, inf), DomainError for non-finite fields or dt above the stability limit.
std::pair<FlowState, StepReport> step_u(const FlowState& state, const Mesh& mesh, const Params& p, double dt);

/// One step of the (rho, v) discretisation: parabolic density equation, upwinded transport of v.
std::pair<FlowState, StepReport> step_v(const FlowState& state, const Mesh& mesh, const Params& p, double dt);

/// Dispatches on state.form.
std::pair<FlowState, StepReport> step(const FlowState& state, const Mesh& mesh, const Params& p, double dt);

}  // namespace ns1d
