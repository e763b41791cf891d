#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ns1d/diagnostics.hpp"
#include "ns1d/errors.hpp"
#include "ns1d/run.hpp"
#include "ns1d/solver.hpp"

using namespace ns1d;

namespace {

Params shallow_water() {
  Params p;
  p.alpha = 1.0;
  p.gamma = 2.0;
  return p;
}

double max_abs(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

FlowState gaussian_bump(const Mesh& m, double amp = 0.5, double u_amp = 0.0) {
  FlowState s{m.sample([&](double x) { return 1.0 + amp * std::exp(-x * x); }),
              m.sample([&](double x) { return u_amp * std::exp(-x * x); }), Form::U, 0.0};
  s.rho.front() = s.rho.back() = 1.0;
  s.vel.front() = s.vel.back() = 0.0;
  return s;
}

Field interpolate_to(const Field& f, const Mesh& from, const Mesh& to) {
  Field out(to.size());
  for (std::size_t i = 0; i < to.size(); ++i) {
    const double s = std::clamp((to.x(i) - from.x(0)) / from.dx(), 0.0, static_cast<double>(from.size() - 1));
    const auto j = std::min(static_cast<std::size_t>(s), from.size() - 2);
    const double w = s - static_cast<double>(j);
    out[i] = (1 - w) * f[j] + w * f[j + 1];
  }
  return out;
}

FlowState advance(FlowState s, const Mesh& m, const Params& p, double T, double safety = 0.4) {
  while (s.t < T) {
    double dt = cfl_dt(s, m, p, safety);
    const bool last = s.t + dt >= T;
    if (last) dt = T - s.t;
    s = step(s, m, p, dt).first;
    if (last) s.t = T;
  }
  return s;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("effective velocity of constant density is u") {
    const Mesh m = build_mesh(3.0, 60);
    FlowState s{Field(60, 2.0), m.sample([](double x) { return std::sin(x); }), Form::U, 0.0};
    const FlowState v = effective_velocity(s, m, shallow_water());
    CHECK(v.form == Form::V);
    CHECK(v.rho == s.rho);
    CHECK(max_abs(v.vel, s.vel) == 0.0);
    CHECK(recover_u(v, m, shallow_water()).vel == s.vel);
  }

  TEST_CASE("effective velocity of rho = e^x is 1") {
    // phi = ln rho is affine in x here, where every stencil of grad_c is exact.
    const Mesh m = build_mesh(2.0, 100);
    FlowState s{m.sample([](double x) { return std::exp(x); }), Field(100, 0.0), Form::U, 0.0};
    CHECK(max_abs(effective_velocity(s, m, shallow_water()).vel, Field(100, 1.0)) < 1e-12);
  }

  TEST_CASE("effective velocity chain rule on 1 + 0.1 sin x") {
    auto err = [](std::size_t N) {
      const Mesh m = build_mesh(4.0, N);
      FlowState s{m.sample([](double x) { return 1.0 + 0.1 * std::sin(x); }), Field(N, 0.0), Form::U, 0.0};
      const Field want = m.sample([](double x) { return 0.1 * std::cos(x) / (1.0 + 0.1 * std::sin(x)); });
      return max_abs(effective_velocity(s, m, shallow_water()).vel, want);
    };
    const double e1 = err(200), e2 = err(400);
    CHECK(e2 < 1e-4);
    CHECK(e1 / e2 > 3.5);
  }

  TEST_CASE("U -> V -> U and V -> U -> V round trips") {
    std::mt19937 gen(21);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    const Mesh m = build_mesh(3.0, 120);
    for (double alpha : {0.6, 0.8, 1.0}) {
      Params p = shallow_water();
      p.alpha = alpha;
      FlowState s{m.sample([](double x) { return 1.0 + 0.4 * std::exp(-x * x); }), Field(120), Form::U, 0.0};
      for (double& v : s.vel) v = d(gen);
      const FlowState back = recover_u(effective_velocity(s, m, p), m, p);
      CHECK(max_abs(back.vel, s.vel) <= 1e-13);
      FlowState sv = s;
      sv.form = Form::V;
      const FlowState again = effective_velocity(recover_u(sv, m, p), m, p);
      CHECK(max_abs(again.vel, sv.vel) <= 1e-13);
    }
  }

  TEST_CASE("conversions reject vacuum and wrong forms") {
    const Mesh m = build_mesh(3.0, 16);
    FlowState s{Field(16, 1.0), Field(16, 0.0), Form::U, 0.0};
    s.rho[5] = 0.0;
    CHECK_THROWS_AS(effective_velocity(s, m, shallow_water()), DomainError);
    s.form = Form::V;
    CHECK_THROWS_AS(recover_u(s, m, shallow_water()), DomainError);
  }

  TEST_CASE("cfl_dt examples") {
    const Params p = shallow_water();
    const Mesh m = build_mesh(10.0, 1000);
    const FlowState s{Field(1000, 1.0), Field(1000, 0.0), Form::U, 0.0};
    CHECK(cfl_dt(s, m, p, 0.4) == doctest::Approx(8e-5).epsilon(1e-14));

    const Mesh coarse = build_mesh(10.0, 500);
    const FlowState sc{Field(500, 1.0), Field(500, 0.0), Form::U, 0.0};
    CHECK(cfl_dt(sc, coarse, p, 0.4) == doctest::Approx(4.0 * 8e-5).epsilon(1e-14));

    const FlowState moving{Field(1000, 1.0), Field(1000, 3.0), Form::U, 0.0};
    CHECK(cfl_dt(moving, m, p, 0.5) == doctest::Approx(0.5 * cfl_dt(moving, m, p, 1.0)).epsilon(1e-15));

    FlowState bad = s;
    bad.vel[3] = std::nan("");
    CHECK_THROWS_AS(cfl_dt(bad, m, p, 0.4), DomainError);
  }

  TEST_CASE("steps reject dt above the stability limit") {
    const Params p = shallow_water();
    const Mesh m = build_mesh(10.0, 100);
    const FlowState s{Field(100, 1.0), Field(100, 0.0), Form::U, 0.0};
    const double lim = cfl_dt(s, m, p, 1.0);
    CHECK_NOTHROW(step_u(s, m, p, lim));
    CHECK_THROWS_AS(step_u(s, m, p, 1.01 * lim), DomainError);
    CHECK_THROWS_AS(step_u(s, m, p, -1e-9), DomainError);
    const auto [next, report] = step_u(s, m, p, 0.5 * lim);
    CHECK(report.cfl_ratio == doctest::Approx(0.5));
    CHECK(report.cfl_ratio <= 1.0);
  }

  TEST_CASE("constant state is a fixed point of both steppers") {
    const Params p = shallow_water();
    const Mesh m = build_mesh(10.0, 256);
    FlowState u{Field(256, 1.0), Field(256, 0.0), Form::U, 0.0};
    FlowState v{Field(256, 1.0), Field(256, 0.0), Form::V, 0.0};
    for (int k = 0; k < 200; ++k) {
      u = step(u, m, p, cfl_dt(u, m, p, 0.4)).first;
      v = step(v, m, p, cfl_dt(v, m, p, 0.4)).first;
    }
    CHECK(max_abs(u.rho, Field(256, 1.0)) <= 1e-14);
    CHECK(max_abs(u.vel, Field(256, 0.0)) <= 1e-14);
    CHECK(max_abs(v.rho, Field(256, 1.0)) <= 1e-14);
    CHECK(max_abs(v.vel, Field(256, 0.0)) <= 1e-14);
  }

  TEST_CASE("U-form mass is conserved") {
    const Params p = shallow_water();
    // Fields constant up to the boundary: only round-off, 1e-12 per unit time.
    const Mesh wide = build_mesh(20.0, 1024);
    const FlowState s0 = gaussian_bump(wide, 0.5, 0.0);
    const double m0 = integrate(s0.rho, wide);
    CHECK(std::abs(integrate(advance(s0, wide, p, 1.0).rho, wide) - m0) <= 1e-12);
    // On L = 10 the viscous tails reach the end cells and carry a tiny boundary flux.
    const Mesh m = build_mesh(10.0, 512);
    const FlowState s1 = gaussian_bump(m, 0.5, 0.3);
    const double m1 = integrate(s1.rho, m);
    CHECK(std::abs(integrate(advance(s1, m, p, 1.0).rho, m) - m1) <= 1e-10);
  }

  TEST_CASE("U-form density self-converges at an order between 1 and 2 in L1") {
    const Params p = shallow_water();
    std::vector<Mesh> meshes;
    std::vector<FlowState> out;
    for (std::size_t N : {256u, 512u, 1024u}) {
      meshes.push_back(build_mesh(10.0, N));
      out.push_back(advance(gaussian_bump(meshes.back()), meshes.back(), p, 0.1));
    }
    auto l1 = [&](std::size_t k) {
      const Field fine = interpolate_to(out[k + 1].rho, meshes[k + 1], meshes[k]);
      Field d(fine.size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = out[k].rho[i] - fine[i];
      return norm(d, meshes[k], NormSpec::lp(1));
    };
    const double order = std::log2(l1(0) / l1(1));
    MESSAGE("L1 self-convergence order of rho: " << order);
    CHECK(order >= 1.0);
    CHECK(order <= 2.0 + 0.1);
  }

  TEST_CASE("U and V runs from the same data converge to each other") {
    const Params p = shallow_water();
    std::vector<double> d;
    for (std::size_t N : {256u, 512u, 1024u}) {
      const Mesh m = build_mesh(10.0, N);
      const FlowState s0 = gaussian_bump(m);
      const FlowState u = advance(s0, m, p, 0.1);
      const FlowState v = recover_u(advance(effective_velocity(s0, m, p), m, p, 0.1), m, p);
      d.push_back(max_abs(u.rho, v.rho));
    }
    CHECK(std::log2(d[0] / d[1]) >= 1.0);
    CHECK(std::log2(d[1] / d[2]) >= 1.0);
  }

  TEST_CASE("momentum identity residual is O(dx^2) on a smooth state") {
    auto res = [](std::size_t N) {
      const Mesh m = build_mesh(4.0, N);
      const FlowState s{m.sample([](double x) { return 1.0 + 0.3 * std::exp(-x * x); }),
                        m.sample([](double x) { return 0.5 * std::sin(x) * std::exp(-x * x / 4.0); }), Form::U, 0.0};
      Params p = shallow_water();
      p.alpha = 0.75;
      const Field r = momentum_identity_residual(s, m, p);
      return *std::max_element(r.begin(), r.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    };
    const double e1 = std::abs(res(200)), e2 = std::abs(res(400)), e3 = std::abs(res(800));
    CHECK(e1 / e2 > 3.5);
    CHECK(e2 / e3 > 3.5);
  }

  TEST_CASE("Galilean shift: constant velocity advects the density on short horizons") {
    const Params p = shallow_water();
    const double c = 0.5, T = 0.2;
    std::vector<double> errs;
    for (std::size_t N : {256u, 512u, 1024u}) {
      const Mesh m = build_mesh(10.0, N);
      const FlowState rest = gaussian_bump(m, 0.3);
      FlowState moving = rest;
      for (double& u : moving.vel) u += c;
      const FlowState a = advance(rest, m, p, T);
      const FlowState b = advance(moving, m, p, T);
      // Shift the moving run back by c T and compare away from the boundary.
      double e = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double x = m.x(i);
        if (std::abs(x) > 5.0) continue;
        const double s = (x + c * T - m.x(0)) / m.dx();
        const auto j = static_cast<std::size_t>(s);
        const double w = s - static_cast<double>(j);
        const double shifted = (1 - w) * b.rho[j] + w * b.rho[j + 1];
        e = std::max(e, std::abs(shifted - a.rho[i]));
        const double shifted_u = (1 - w) * b.vel[j] + w * b.vel[j + 1] - c;
        e = std::max(e, std::abs(shifted_u - a.vel[i]));
      }
      errs.push_back(e);
    }
    CHECK(errs[2] < 1e-3);
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);
  }

  TEST_CASE("vacuum breach carries cell, position and time") {
    const Params p = shallow_water();
    const Mesh m = build_mesh(10.0, 200);
    FlowState s{Field(200, 1.0), Field(200, 0.0), Form::V, 0.25};
    s.rho[100] = 1e-3;
    const double big = 10.0 / m.dx();
    s.vel[99] = -big;
    s.vel[101] = big;
    try {
      step(s, m, p, cfl_dt(s, m, p, 0.4));
      FAIL("expected a vacuum breach");
    } catch (const VacuumBreach& e) {
      CHECK(e.cell() == 100);
      CHECK(e.x() == doctest::Approx(m.x(100)));
      CHECK(e.time() > 0.25);
      CHECK(e.rho() <= 0.0);
    }
  }

  TEST_CASE("run: T = 0 gives one record equal to the initial diagnostics") {
    const Params p = shallow_water();
    const Mesh m = build_mesh(10.0, 128);
    const BackgroundProfile bp = background_profile(m, 1.0, 1.0);
    const FlowState s0 = gaussian_bump(m);
    RunOptions o;
    o.T = 0.0;
    const Trajectory tr = run(s0, Form::U, m, p, bp, o);
    REQUIRE(tr.frames.size() == 1);
    CHECK(tr.steps == 0);
    const DiagnosticsRecord& d = tr.frames[0].diag;
    CHECK(d.t == 0.0);
    CHECK(d.mass == integrate(s0.rho, m));
    CHECK(d.energy == energy_functional(s0, m, p, bp));
    CHECK(d.diss_u == 0.0);
    CHECK(tr.frames[0].state.rho == s0.rho);
    for (const auto& mr : d.moments) {
      REQUIRE(mr.bound);
      CHECK(*mr.bound == doctest::Approx(mr.value).epsilon(1e-14));
    }
  }

  TEST_CASE("run lands on every output time and records a stationary state unchanged") {
    const Params p = shallow_water();
    const Mesh m = build_mesh(10.0, 128);
    const BackgroundProfile bp = background_profile(m, 1.0, 1.0);
    const FlowState s0{Field(128, 1.0), Field(128, 0.0), Form::U, 0.0};
    RunOptions o;
    o.T = 0.35;
    o.output_dt = 0.1;
    for (Form f : {Form::U, Form::V}) {
      const Trajectory tr = run(s0, f, m, p, bp, o);
      REQUIRE(tr.frames.size() == 5);
      const double want[] = {0.0, 0.1, 0.2, 0.30000000000000004, 0.35};
      for (std::size_t k = 0; k < 5; ++k) CHECK(tr.frames[k].diag.t == doctest::Approx(want[k]).epsilon(1e-15));
      CHECK(tr.frames.back().diag.t == 0.35);
      for (const auto& fr : tr.frames) {
        CHECK(std::abs(fr.diag.mass - tr.frames[0].diag.mass) <= 1e-13);
        CHECK(std::abs(fr.diag.energy) <= 1e-13);
        CHECK(max_abs(fr.state.rho, s0.rho) <= 1e-13);
      }
    }
  }

  TEST_CASE("run records a vacuum breach instead of throwing") {
    const Params p = shallow_water();
    const Mesh m = build_mesh(10.0, 200);
    const BackgroundProfile bp = background_profile(m, 1.0, 1.0);
    FlowState s{Field(200, 1.0), Field(200, 0.0), Form::U, 0.0};
    s.rho[100] = 1e-3;
    // Strongly diverging V-form velocity around the dip after conversion.
    FlowState sv = effective_velocity(s, m, p);
    sv.vel[99] = -10.0 / m.dx();
    sv.vel[101] = 10.0 / m.dx();
    const FlowState su = recover_u(sv, m, p);
    RunOptions o;
    o.T = 0.1;
    const Trajectory tr = run(su, Form::V, m, p, bp, o);
    CHECK(tr.status == RunStatus::VacuumBreach);
    REQUIRE(tr.breach);
    CHECK(tr.breach->cell == 100);
    CHECK(tr.min_rho <= 0.0);
  }
}
