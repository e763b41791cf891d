/**
 * @file constitutive.hpp
 * @brief Power-law viscosity, gamma-law pressure, the effective-velocity potential and
 *        the admissibility check for the global-existence parameter region.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ns1d {

/// Model parameters. mu(rho) = mu0 * rho^alpha, P(rho) = a * rho^gamma.
struct Params {
  double alpha = 1.0;
  double gamma = 2.0;
  double a = 1.0;
  double mu0 = 1.0;
  double eps = 0.125;
  /// Viscosity floor index n: mu_n = max(1/n, mu). Unset means no floor.
  std::optional<int> reg_n;
  /// Weight exponent for the rho^beta u monitor. false: beta = 1/2 + eps, true: beta = alpha/2 + eps.
  bool beta_alpha_half = false;

  double beta() const { return beta_alpha_half ? 0.5 * alpha + eps : 0.5 + eps; }
};

double viscosity(double rho, const Params& p);
double pressure(double rho, const Params& p);

/// Potential with phi'(rho) = mu(rho)/rho^2, zero integration constant (phi(1) = 0 when alpha = 1).
/// Follows the floored viscosity when reg_n is set.
double phi(double rho, const Params& p);
double dphi(double rho, const Params& p);

/// Relative entropy of a*rho^gamma/(gamma-1) about rho_bar. Non-negative, zero only at rho == rho_bar.
double relative_pressure(double rho, double rho_bar, const Params& p);

struct ConditionCheck {
  std::string name;
  std::string statement;
  bool pass;
};

struct ValidationReport {
  std::vector<ConditionCheck> conditions;
  bool inside_theorem = false;

  /// Names of the failing conditions, comma separated; empty when inside.
  std::string failures() const;
};

/// Checks 1/2 < alpha <= 1, 0 < eps < 1/4, gamma >= alpha + 1/2 + eps, gamma > 1.
/// Out-of-region parameters are reported, not rejected. Throws ConfigError for
/// non-finite or non-positive alpha, gamma, a, mu0 and for a non-positive reg_n.
ValidationReport validate_params(const Params& p);

}  // namespace ns1d
