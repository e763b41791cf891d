#include "ns1d/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ns1d/errors.hpp"

namespace ns1d {

namespace {

void require_size(std::span<const double> f, const Mesh& mesh, const char* what) {
  if (f.size() != mesh.size()) {
    throw ConfigError(std::string(what) + ": field length " + std::to_string(f.size()) + " does not match mesh size " +
                      std::to_string(mesh.size()));
  }
}

// int_{-1}^{1} exp(-1/(1-x^2)) dx
constexpr double kBumpMass = 0.44399381616807943;

}  // namespace

Mesh::Mesh(double half_width, std::size_t cells) : L_(half_width) {
  if (!std::isfinite(half_width) || half_width <= 0.0) {
    throw ConfigError("mesh half-width L must be finite and positive, got " + std::to_string(half_width));
  }
  if (cells < min_cells) {
    throw ConfigError("mesh needs at least " + std::to_string(min_cells) + " cells, got " + std::to_string(cells));
  }
  dx_ = 2.0 * L_ / static_cast<double>(cells);
  x_.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    x_[i] = -L_ + (static_cast<double>(i) + 0.5) * dx_;
  }
}

Mesh build_mesh(double half_width, std::size_t cells) { return Mesh(half_width, cells); }

double background_value(double x, double rho_minus, double rho_plus) {
  if (x <= -1.0) return rho_minus;
  if (x >= 1.0) return rho_plus;
  const double s = 0.5 * (x + 1.0);
  const double step = std::clamp(s * s * s * (s * (6.0 * s - 15.0) + 10.0), 0.0, 1.0);
  return rho_minus + (rho_plus - rho_minus) * step;
}

BackgroundProfile background_profile(const Mesh& mesh, double rho_minus, double rho_plus) {
  if (!(rho_minus > 0.0) || !(rho_plus > 0.0) || !std::isfinite(rho_minus) || !std::isfinite(rho_plus)) {
    throw ConfigError("far-field densities must be finite and positive");
  }
  if (mesh.half_width() < 2.0) {
    throw ConfigError("background profile needs L >= 2 so that |x| >= 1 is resolved, got L = " +
                      std::to_string(mesh.half_width()));
  }
  return {rho_minus, rho_plus, mesh.sample([&](double x) { return background_value(x, rho_minus, rho_plus); })};
}

double mollifier_kernel(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x)) / kBumpMass;
}

bool mollifier_is_identity(const Mesh& mesh, int n) { return 1.0 / n < mesh.dx(); }

Field mollify(std::span<const double> f, const Mesh& mesh, int n) {
  require_size(f, mesh, "mollify");
  if (n < 1) {
    throw ConfigError("mollifier index n must be >= 1, got " + std::to_string(n));
  }
  const double half = 1.0 / n;
  if (half > mesh.half_width()) {
    throw ConfigError("mollifier support 1/n = " + std::to_string(half) + " exceeds the domain half-width");
  }
  if (mollifier_is_identity(mesh, n)) {
    return Field(f.begin(), f.end());
  }

  const auto reach = static_cast<long>(std::floor(half / mesh.dx()));
  std::vector<double> w(2 * reach + 1);
  double total = 0.0;
  for (long k = -reach; k <= reach; ++k) {
    w[k + reach] = n * mollifier_kernel(n * k * mesh.dx());
    total += w[k + reach];
  }
  for (double& wk : w) wk /= total;

  const auto N = static_cast<long>(f.size());
  Field out(f.size(), 0.0);
  for (long i = 0; i < N; ++i) {
    double acc = 0.0;
    for (long k = -reach; k <= reach; ++k) {
      const long j = std::clamp(i - k, 0L, N - 1);
      acc += w[k + reach] * f[j];
    }
    out[i] = acc;
  }
  return out;
}

Field grad_c(std::span<const double> f, const Mesh& mesh) {
  require_size(f, mesh, "grad_c");
  const std::size_t N = f.size();
  const double inv2h = 0.5 / mesh.dx();
  Field g(N);
  // One-sided stencils written in differences so constants give exactly zero.
  g[0] = (4.0 * (f[1] - f[0]) - (f[2] - f[0])) * inv2h;
  for (std::size_t i = 1; i + 1 < N; ++i) {
    g[i] = (f[i + 1] - f[i - 1]) * inv2h;
  }
  g[N - 1] = (4.0 * (f[N - 1] - f[N - 2]) - (f[N - 1] - f[N - 3])) * inv2h;
  return g;
}

Field div_flux(std::span<const double> flux, const Mesh& mesh) {
  require_size(flux, mesh, "div_flux");
  const std::size_t N = flux.size();
  const double inv_h = 1.0 / mesh.dx();
  // face[k] is F_{k-1/2}, k = 0..N
  Field face(N + 1);
  face[0] = flux[0];
  for (std::size_t k = 1; k < N; ++k) face[k] = 0.5 * (flux[k - 1] + flux[k]);
  face[N] = flux[N - 1];
  Field d(N);
  for (std::size_t i = 0; i < N; ++i) d[i] = (face[i + 1] - face[i]) * inv_h;
  return d;
}

Field diffuse(std::span<const double> coef, std::span<const double> f, const Mesh& mesh) {
  require_size(coef, mesh, "diffuse");
  require_size(f, mesh, "diffuse");
  for (std::size_t i = 0; i < coef.size(); ++i) {
    if (!(coef[i] >= 0.0)) {
      throw DomainError("diffuse: coefficient must be non-negative, got " + std::to_string(coef[i]) + " at cell " +
                        std::to_string(i));
    }
  }
  const std::size_t N = f.size();
  const double inv_h2 = 1.0 / (mesh.dx() * mesh.dx());
  // face flux between cells k-1 and k, k = 1..N-1
  Field face(N + 1, 0.0);
  for (std::size_t k = 1; k < N; ++k) {
    face[k] = 0.5 * (coef[k - 1] + coef[k]) * (f[k] - f[k - 1]);
  }
  Field out(N);
  for (std::size_t i = 0; i < N; ++i) out[i] = (face[i + 1] - face[i]) * inv_h2;
  return out;
}

double integrate(std::span<const double> f, const Mesh& mesh) {
  double s = 0.0;
  for (double v : f) s += v;
  return s * mesh.dx();
}

double norm(std::span<const double> f, const Mesh& mesh, NormSpec spec) {
  switch (spec.kind) {
    case NormKind::Lp: {
      const double p = spec.exponent;
      if (!(p >= 1.0)) {
        throw ConfigError("Lp norm needs p >= 1, got " + std::to_string(p));
      }
      double s = 0.0;
      for (double v : f) s += std::pow(std::abs(v), p);
      return std::pow(s * mesh.dx(), 1.0 / p);
    }
    case NormKind::Linf: {
      double m = 0.0;
      for (double v : f) m = std::max(m, std::abs(v));
      return m;
    }
    case NormKind::H1: {
      const Field g = grad_c(f, mesh);
      double s = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * f[i] + g[i] * g[i];
      return std::sqrt(s * mesh.dx());
    }
    case NormKind::OrliczGamma2: {
      double s = 0.0;
      for (double v : f) {
        const double a = std::abs(v);
        s += a <= 1.0 ? a * a : std::pow(a, spec.exponent);
      }
      return std::sqrt(s * mesh.dx());
    }
  }
  return 0.0;
}

}  // namespace ns1d
