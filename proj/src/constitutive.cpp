#include "ns1d/constitutive.hpp"

#include <algorithm>
#include <cmath>

#include "ns1d/errors.hpp"

namespace ns1d {

namespace {

void require_nonnegative(double rho, const char* what) {
  if (!(rho >= 0.0)) {
    throw DomainError(std::string(what) + ": density must be non-negative, got " + std::to_string(rho));
  }
}

void require_positive(double rho, const char* what) {
  if (!(rho > 0.0)) {
    throw DomainError(std::string(what) + ": density must be positive, got " + std::to_string(rho));
  }
}

double raw_viscosity(double rho, const Params& p) { return p.mu0 * std::pow(rho, p.alpha); }

double raw_phi(double rho, const Params& p) {
  if (p.alpha == 1.0) {
    return p.mu0 * std::log(rho);
  }
  return p.mu0 * std::pow(rho, p.alpha - 1.0) / (p.alpha - 1.0);
}

// Density below which the floor 1/n dominates mu0 * rho^alpha.
double floor_threshold(int n, const Params& p) { return std::pow(1.0 / (n * p.mu0), 1.0 / p.alpha); }

}  // namespace

double viscosity(double rho, const Params& p) {
  require_nonnegative(rho, "viscosity");
  const double mu = raw_viscosity(rho, p);
  if (p.reg_n) {
    return std::max(1.0 / *p.reg_n, mu);
  }
  return mu;
}

double pressure(double rho, const Params& p) {
  require_nonnegative(rho, "pressure");
  return p.a * std::pow(rho, p.gamma);
}

double phi(double rho, const Params& p) {
  require_positive(rho, "phi");
  if (p.reg_n) {
    const double rho_star = floor_threshold(*p.reg_n, p);
    if (rho < rho_star) {
      // (1/n)/rho^2 integrates to -1/(n rho); matched continuously at rho_star.
      return raw_phi(rho_star, p) + (1.0 / *p.reg_n) * (1.0 / rho_star - 1.0 / rho);
    }
  }
  return raw_phi(rho, p);
}

double dphi(double rho, const Params& p) {
  require_positive(rho, "dphi");
  return viscosity(rho, p) / (rho * rho);
}

double relative_pressure(double rho, double rho_bar, const Params& p) {
  require_nonnegative(rho, "relative_pressure");
  require_positive(rho_bar, "relative_pressure");
  const double g = p.gamma;
  const double value = std::pow(rho, g) / (g - 1.0) - std::pow(rho_bar, g) / (g - 1.0) -
                       g / (g - 1.0) * std::pow(rho_bar, g - 1.0) * (rho - rho_bar);
  // Convexity makes this non-negative; cancellation can leave a few ulps below zero.
  return p.a * std::max(value, 0.0);
}

std::string ValidationReport::failures() const {
  std::string out;
  for (const auto& c : conditions) {
    if (!c.pass) {
      if (!out.empty()) out += ", ";
      out += c.name + " (" + c.statement + ")";
    }
  }
  return out;
}

ValidationReport validate_params(const Params& p) {
  auto hard = [](double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw ConfigError(std::string("parameter '") + name + "' must be finite and positive, got " + std::to_string(v));
    }
  };
  hard(p.alpha, "alpha");
  hard(p.gamma, "gamma");
  hard(p.a, "a");
  hard(p.mu0, "mu");
  if (!std::isfinite(p.eps)) {
    throw ConfigError("parameter 'eps' must be finite");
  }
  if (p.reg_n && *p.reg_n < 1) {
    throw ConfigError("parameter 'reg_n' must be a positive integer, got " + std::to_string(*p.reg_n));
  }

  constexpr double tol = 1e-12;
  ValidationReport r;
  r.conditions.push_back({"alpha_range", "1/2 < alpha <= 1", p.alpha > 0.5 && p.alpha <= 1.0});
  r.conditions.push_back({"eps_range", "0 < eps < 1/4", p.eps > 0.0 && p.eps < 0.25});
  r.conditions.push_back(
      {"gamma_threshold", "gamma >= alpha + 1/2 + eps", p.gamma >= p.alpha + 0.5 + p.eps - tol * p.gamma});
  r.conditions.push_back({"gamma_gt_one", "gamma > 1", p.gamma > 1.0});
  r.inside_theorem = true;
  for (const auto& c : r.conditions) r.inside_theorem = r.inside_theorem && c.pass;
  return r;
}

}  // namespace ns1d
