#include <doctest.h>

#include <cmath>
#include <random>

#include "ns1d/diagnostics.hpp"
#include "ns1d/run.hpp"

using namespace ns1d;

namespace {

Params shallow_water() {
  Params p;
  p.alpha = 1.0;
  p.gamma = 2.0;
  p.eps = 0.125;
  return p;
}

template <class F>
double simpson(F&& f, double a, double b, int m) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

FlowState sine_density(const Mesh& m) {
  return {m.sample([](double x) { return 1.0 + 0.1 * std::sin(x); }), Field(m.size(), 0.0), Form::U, 0.0};
}

// Manufactured solution of rho_t - (rho_x)_x + (rho v)_x = 0 (alpha = 1, mu0 = 1).
double mms_rho(double t, double x) { return 1.0 + 0.1 * std::cos(t) * std::sin(x); }
double mms_v(double t, double x) { return 0.1 * (std::cos(t) - std::sin(t)) * std::cos(x) / mms_rho(t, x); }

FlowState mms_state(const Mesh& m, double t) {
  return {m.sample([&](double x) { return mms_rho(t, x); }), m.sample([&](double x) { return mms_v(t, x); }), Form::V, t};
}

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("energy functional examples") {
    const Params p = shallow_water();
    const Mesh m = build_mesh(2.0, 64);
    const BackgroundProfile one = background_profile(m, 1.0, 1.0);
    CHECK(energy_functional({Field(64, 1.0), Field(64, 0.0), Form::U, 0.0}, m, p, one) == 0.0);
    CHECK(energy_functional({Field(64, 1.0), Field(64, 1.0), Form::U, 0.0}, m, p, one) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK(energy_functional({Field(64, 2.0), Field(64, 0.0), Form::U, 0.0}, m, p, one) ==
          doctest::Approx(4.0).epsilon(1e-14));
  }

  TEST_CASE("BD functional examples") {
    const Params p = shallow_water();
    const Mesh m = build_mesh(2.0, 64);
    const BackgroundProfile one = background_profile(m, 1.0, 1.0);
    CHECK(bd_functional({Field(64, 1.0), Field(64, 0.0), Form::U, 0.0}, m, p, one) == 0.0);
    std::mt19937 gen(1);
    std::normal_distribution<double> d;
    FlowState s{Field(64, 1.7), Field(64), Form::U, 0.0};
    for (double& v : s.vel) v = d(gen);
    CHECK(bd_functional(s, m, p, one) == doctest::Approx(energy_functional(s, m, p, one)).epsilon(1e-14));
  }

  TEST_CASE("BD functional on 1 + 0.1 sin x against quadrature") {
    const Params p = shallow_water();
    // 1/2 rho (d/dx ln rho)^2 + rho^2 - 1 - 2 (rho - 1)
    auto density = [](double x) {
      const double r = 1.0 + 0.1 * std::sin(x);
      const double rx = 0.1 * std::cos(x);
      return 0.5 * rx * rx / r + (r - 1.0) * (r - 1.0);
    };
    const double oracle = simpson(density, -10.0, 10.0, 20000);
    double prev = 0.0;
    for (std::size_t N : {200u, 400u, 800u}) {
      const Mesh m = build_mesh(10.0, N);
      const double err = std::abs(bd_functional(sine_density(m), m, p, background_profile(m, 1.0, 1.0)) - oracle);
      CHECK(err < 1e-3);
      if (prev > 0.0) CHECK(prev / err > 3.0);
      prev = err;
    }
    CHECK(oracle > 0.0);
  }

  TEST_CASE("velocity dissipation") {
    const Params p = shallow_water();
    const Mesh m = build_mesh(2.0, 64);
    CHECK(dissipation_u_rate({Field(64, 1.3), Field(64, 0.7), Form::U, 0.0}, m, p) == 0.0);
    CHECK(dissipation_u_rate({Field(64, 1.0), m.centers(), Form::U, 0.0}, m, p) == doctest::Approx(4.0).epsilon(1e-12));
    std::mt19937 gen(4);
    std::uniform_real_distribution<double> r(0.1, 3.0), u(-5.0, 5.0);
    for (int k = 0; k < 50; ++k) {
      FlowState s{Field(64), Field(64), Form::U, 0.0};
      for (double& v : s.rho) v = r(gen);
      for (double& v : s.vel) v = u(gen);
      CHECK(dissipation_u_rate(s, m, p) >= 0.0);
    }
  }

  TEST_CASE("BD dissipation: sign, constants and quadrature") {
    const Params p = shallow_water();
    const Mesh c = build_mesh(2.0, 64);
    CHECK(dissipation_bd_rate({Field(64, 1.4), Field(64, 0.0), Form::U, 0.0}, c, p).value == 0.0);

    // gamma mu(rho) rho^(gamma - 3) rho_x^2 with mu(rho) = rho
    auto integrand = [](double x) {
      const double r = 1.0 + 0.1 * std::sin(x);
      const double rx = 0.1 * std::cos(x);
      return 2.0 * r * std::pow(r, -1.0) * rx * rx;
    };
    const double oracle = simpson(integrand, -10.0, 10.0, 20000);
    double prev = 0.0;
    for (std::size_t N : {200u, 400u, 800u}) {
      const Mesh m = build_mesh(10.0, N);
      const FlowState s = sine_density(m);
      for (double v : bd_dissipation_integrand(s, m, p)) CHECK(v >= -1e-10);
      const BdDissipation d = dissipation_bd_rate(s, m, p);
      CHECK(d.value == d.raw);
      const double err = std::abs(d.value - oracle);
      if (prev > 0.0) CHECK(prev / err > 3.0);
      prev = err;
    }
  }

  TEST_CASE("weighted sup") {
    const Params p = shallow_water();
    const Mesh m = build_mesh(2.0, 16);
    CHECK(weighted_sup({Field(16, 3.0), Field(16, 0.0), Form::U, 0.0}, m, p) == 0.0);
    FlowState s{Field(16, 1.0), Field(16, 0.0), Form::U, 0.0};
    s.vel[3] = -2.5;
    s.vel[9] = 1.5;
    CHECK(weighted_sup(s, m, p) == 2.5);
    FlowState t{Field(16, 1.0), Field(16, 0.1), Form::U, 0.0};
    t.rho[7] = 4.0;
    t.vel[7] = 3.0;
    CHECK(weighted_sup(t, m, p) == doctest::Approx(std::pow(4.0, 0.625) * 3.0).epsilon(1e-14));
    CHECK(weighted_sup(t, m, p) == doctest::Approx(7.135).epsilon(1e-3));
  }

  TEST_CASE("v moments") {
    const Params p = shallow_water();
    const Mesh m = build_mesh(2.0, 64);
    CHECK(v_moment({Field(64, 1.0), Field(64, 0.0), Form::V, 0.0}, m, p, 4) == 0.0);
    const FlowState c{Field(64, 1.0), Field(64, -1.5), Form::V, 0.0};
    CHECK(v_moment(c, m, p, 0) == doctest::Approx(1.5 * 2.0).epsilon(1e-14));
    for (int order : {8, 30, 100, 400}) {
      CHECK(v_moment(c, m, p, order) == doctest::Approx(1.5 * std::pow(4.0, 1.0 / (order + 2))).epsilon(1e-13));
    }
    CHECK(std::abs(v_moment(c, m, p, 2000) - 1.5) < 1.5 * 1e-3);
  }

  TEST_CASE("v moment of plateau fields approaches the sup norm") {
    const Params p = shallow_water();
    const Mesh m = build_mesh(2.0, 400);
    FlowState s{Field(400, 1.0), Field(400, 0.0), Form::V, 0.0};
    for (std::size_t i = 100; i < 150; ++i) s.vel[i] = 2.0;  // plateau of measure 0.5
    CHECK(v_moment(s, m, p, 30) == doctest::Approx(2.0 * std::pow(0.5, 1.0 / 32.0)).epsilon(1e-13));
  }

  TEST_CASE("Gronwall bound oracles") {
    const Params p = shallow_water();
    // Constant A = 1 on [0, 1], p = 0, gamma = 2, initial moment 1: (1 + 4)^(1/2) e^2.
    const std::vector<GronwallSample> h{{0.0, 1.0, 1.0, 1.0}, {0.5, 1.0, 1.0, 1.0}, {1.0, 1.0, 1.0, 1.0}};
    const auto b = gronwall_bound_v(h, p, 0, 1.0);
    REQUIRE(b);
    CHECK(*b == doctest::Approx(std::sqrt(5.0) * std::exp(2.0)).epsilon(1e-14));
    CHECK(*b == doctest::Approx(16.52).epsilon(1e-3));

    // No velocity: the bound is the initial moment.
    const std::vector<GronwallSample> still{{0.0, 0.0, 0.0, 1.3}, {0.7, 0.0, 0.0, 1.2}};
    for (int order : {0, 2, 8, 30}) CHECK(*gronwall_bound_v(still, p, order, 0.42) == doctest::Approx(0.42));
    // A single sample (T = 0) also returns it.
    CHECK(*gronwall_bound_v(std::span(h).first(1), p, 8, 0.3) == doctest::Approx(0.3));

    // Forcing with explicit exponents.
    const GronwallSample g{0.0, 2.0, 3.0, 1.5};
    const double q = 4.0;
    CHECK(gronwall_forcing(g, p, 2) ==
          doctest::Approx(std::pow(2.0, 2.0 / q) * std::pow(3.0, 2.0 / q) * std::pow(1.5, 2.0 - 1.0 - 2.0 * 0.625 / q)));

    // gamma - alpha - beta < 0: unavailable.
    Params low = p;
    low.gamma = 1.5;
    low.alpha = 1.0;
    CHECK_FALSE(gronwall_bound_v(h, low, 0, 1.0));
  }

  TEST_CASE("reciprocal residual: constant state and manufactured solution") {
    const Params p = shallow_water();
    const Mesh m = build_mesh(10.0, 128);
    const FlowState a{Field(128, 1.0), Field(128, 0.0), Form::V, 0.0};
    FlowState b = a;
    b.t = 1e-3;
    CHECK(reciprocal_residual(a, b, m, p) == 0.0);

    std::vector<double> r;
    for (std::size_t N : {100u, 200u, 400u}) {
      const Mesh mesh = build_mesh(3.0, N);
      const double dt = mesh.dx() * mesh.dx();
      r.push_back(reciprocal_residual(mms_state(mesh, 0.3), mms_state(mesh, 0.3 + dt), mesh, p));
    }
    CHECK(r[0] < 1e-3);
    CHECK(r[0] / r[1] > 3.5);
    CHECK(r[1] / r[2] > 3.5);
  }

  TEST_CASE("pressure identity residual") {
    const Params p = shallow_water();
    const Mesh c = build_mesh(2.0, 64);
    CHECK(pressure_identity_residual({Field(64, 2.0), Field(64, 1.0), Form::U, 0.0}, c, p) == 0.0);
    std::vector<double> r;
    for (std::size_t N : {200u, 400u, 800u}) {
      const Mesh m = build_mesh(10.0, N);
      r.push_back(pressure_identity_residual(sine_density(m), m, p));
      CHECK(r.back() <= 0.2 * m.dx() * m.dx());
    }
    CHECK(r[0] / r[1] > 3.5);
    CHECK(r[1] / r[2] > 3.5);
  }

  TEST_CASE("density report") {
    const Params p = shallow_water();
    const Mesh m = build_mesh(2.0, 64);
    const BackgroundProfile bp = background_profile(m, 1.0, 2.0);
    const DensityReport same = density_report({bp.values, Field(64, 0.0), Form::U, 0.0}, m, bp, p);
    CHECK(same.rho_h1 == 0.0);
    CHECK(same.min_rho == 1.0);
    CHECK(same.max_rho == 2.0);

    const BackgroundProfile one = background_profile(m, 1.0, 1.0);
    const DensityReport up = density_report({Field(64, 1.5), Field(64, 0.0), Form::U, 0.0}, m, one, p);
    CHECK(up.rho_h1 == doctest::Approx(1.0).epsilon(1e-14));
    std::mt19937 gen(8);
    std::uniform_real_distribution<double> d(0.05, 4.0);
    Field rho(64);
    for (double& v : rho) v = d(gen);
    const DensityReport r = density_report({rho, Field(64, 0.0), Form::U, 0.0}, m, one, p);
    CHECK(r.inv_rho_max * r.min_rho == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.min_rho <= r.max_rho);
  }

  TEST_CASE("on a smooth run the sup of v is bounded by the 30th moment") {
    const Params p = shallow_water();
    const Mesh m = build_mesh(10.0, 256);
    const BackgroundProfile bp = background_profile(m, 1.0, 1.0);
    FlowState s{m.sample([](double x) { return 1.0 + 0.5 * std::exp(-x * x); }), Field(256, 0.0), Form::U, 0.0};
    RunOptions o;
    o.T = 0.5;
    const Trajectory tr = run(s, Form::U, m, p, bp, o);
    REQUIRE(tr.status == RunStatus::Completed);
    for (const Frame& f : tr.frames) {
      const double m30 = v_moment(f.state, m, p, 30);
      CHECK(f.diag.v_inf <= 1.25 * m30 / std::pow(f.diag.min_rho, 1.0 / 32.0));
      CHECK(f.diag.mass >= 0.0);
      CHECK(f.diag.energy >= 0.0);
      CHECK(f.diag.bd_entropy >= 0.0);
      CHECK(f.diag.diss_u >= 0.0);
      CHECK(f.diag.diss_bd >= 0.0);
      CHECK(f.diag.inv_rho_max == doctest::Approx(1.0 / f.diag.min_rho));
    }
  }
}
