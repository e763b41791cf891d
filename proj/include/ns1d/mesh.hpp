/**
 * @file mesh.hpp
 * @brief Uniform cell-centred grid on [-L, L], the far-field background profile,
 *        mollification and the discrete operators every other module is built on.
 */
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ns1d {

using Field = std::vector<double>;

class Mesh {
 public:
  static constexpr std::size_t min_cells = 8;

  /// Throws ConfigError for N < min_cells or a non-finite / non-positive half-width.
  Mesh(double half_width, std::size_t cells);

  double half_width() const noexcept { return L_; }
  std::size_t size() const noexcept { return x_.size(); }
  double dx() const noexcept { return dx_; }
  double x(std::size_t i) const { return x_[i]; }
  const Field& centers() const noexcept { return x_; }

  /// Samples f at every cell centre.
  template <class F>
  Field sample(F&& f) const {
    Field out(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) out[i] = f(x_[i]);
    return out;
  }

 private:
  double L_;
  double dx_;
  Field x_;
};

Mesh build_mesh(double half_width, std::size_t cells);

/// rho_bar(x) equals rho_minus for x <= -1 and rho_plus for x >= 1, with a C^2 quintic
/// smoothstep in between.
struct BackgroundProfile {
  double rho_minus;
  double rho_plus;
  Field values;

  bool is_constant() const noexcept { return rho_minus == rho_plus; }
};

/// Requires positive end states and half-width >= 2.
BackgroundProfile background_profile(const Mesh& mesh, double rho_minus, double rho_plus);
double background_value(double x, double rho_minus, double rho_plus);

/// Normalised bump exp(-1/(1-x^2)) on (-1, 1), unit integral.
double mollifier_kernel(double x);

/// Convolution with K_n(x) = n K(n x). Values beyond the domain are the edge values, so
/// constants are preserved exactly. Throws ConfigError when the kernel half-width 1/n
/// exceeds the domain half-width.
Field mollify(std::span<const double> f, const Mesh& mesh, int n);

/// True when 1/n < dx, so the discrete kernel has a single non-zero weight.
bool mollifier_is_identity(const Mesh& mesh, int n);

/// Centred second-order difference; second-order one-sided stencils in the end cells.
Field grad_c(std::span<const double> f, const Mesh& mesh);

/// Conservative difference (F_{i+1/2} - F_{i-1/2}) / dx of face fluxes F_{i+1/2} = (f_i + f_{i+1})/2.
/// The outer faces carry the end-cell values, so sum(div) * dx = f_{N-1} - f_0.
Field div_flux(std::span<const double> flux, const Mesh& mesh);

/// Three-point flux form of d/dx(coef d/dx f) with arithmetic-mean face coefficients.
/// End cells see no flux through the outer face. Throws DomainError for a negative coefficient.
Field diffuse(std::span<const double> coef, std::span<const double> f, const Mesh& mesh);

/// Midpoint rule.
double integrate(std::span<const double> f, const Mesh& mesh);

enum class NormKind { Lp, Linf, H1, OrliczGamma2 };

struct NormSpec {
  NormKind kind = NormKind::Lp;
  /// Exponent p for Lp, gamma for the Orlicz proxy.
  double exponent = 2.0;

  static NormSpec lp(double p) { return {NormKind::Lp, p}; }
  static NormSpec linf() { return {NormKind::Linf, 0.0}; }
  static NormSpec h1() { return {NormKind::H1, 2.0}; }
  static NormSpec orlicz(double gamma) { return {NormKind::OrliczGamma2, gamma}; }
};

/// Orlicz proxy: (int_{|f|<=1} f^2 + int_{|f|>1} |f|^gamma)^{1/2}.
double norm(std::span<const double> f, const Mesh& mesh, NormSpec kind);

}  // namespace ns1d
