#include <cmath>
#include <random>

#include <doctest.h>

#include "../oracles.hpp"
#include "optomw/errors.hpp"
#include "optomw/steadystate.hpp"

using namespace optomw;

namespace {

struct Fixture {
  DeviceParams p = DeviceParams::fig2_caption();
  DerivedQuantities dq = derive_quantities(p);
};

}  // namespace

TEST_CASE("undriven system has the trivial fixed point") {
  Fixture f;
  f.p.power_c = 0.0;
  f.p.power_w = 0.0;
  f.dq = derive_quantities(f.p);
  for (auto mode : {DetuningMode::effective, DetuningMode::bare}) {
    const auto ss = solve_fixed_point(f.p, f.dq, mode);
    CHECK(ss.alpha_s == 0.0);
    CHECK(ss.beta_s == 0.0);
    CHECK(ss.q_s == 0.0);
    CHECK(ss.g_c == 0.0);
    CHECK(ss.g_w == 0.0);
    CHECK(ss.stable);
  }
}

TEST_CASE("effective-mode closed form") {
  Fixture f;
  const auto ss = solve_fixed_point(f.p, f.dq);
  const long double wm = f.p.omega_m, kc = f.p.kappa_c, kw = f.p.kappa_w;
  const long double a = f.dq.drive_c / std::sqrt(kc * kc + wm * wm);
  const long double b = f.dq.drive_w / std::sqrt(kw * kw + wm * wm);
  CHECK(std::fabs(ss.alpha_s - a) / a < 1e-14);
  CHECK(std::fabs(ss.beta_s - b) / b < 1e-14);
  CHECK(ss.alpha_s > 0.0);
  CHECK(ss.beta_s > 0.0);
  const long double q = (f.dq.g0c * a * a + f.dq.g0w * b * b) / wm;
  CHECK(std::fabs(ss.q_s - q) / q < 1e-13);
  CHECK(ss.g_c == doctest::Approx(std::sqrt(2.0) * f.dq.g0c * ss.alpha_s).epsilon(1e-15));
  CHECK(ss.g_c / f.p.omega_m == doctest::Approx(0.0900).epsilon(2e-3));
  CHECK(ss.g_w / f.p.omega_m == doctest::Approx(0.1069).epsilon(2e-3));
  CHECK(ss.delta_c_bare == doctest::Approx(ss.delta_c_eff + f.dq.g0c * ss.q_s).epsilon(1e-15));
  CHECK(ss.delta_w_bare == doctest::Approx(ss.delta_w_eff + f.dq.g0w * ss.q_s).epsilon(1e-15));
  CHECK(ss.iterations == 0);
  CHECK(ss.stable);
}

TEST_CASE("bare and effective detunings round-trip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    Fixture f;
    f.p.power_c *= u(rng);
    f.p.power_w *= u(rng);
    f.p.delta_c *= u(rng);
    f.p.delta_w *= u(rng);
    f.dq = derive_quantities(f.p);
    const auto eff = solve_fixed_point(f.p, f.dq, DetuningMode::effective);
    auto bare_p = f.p;
    bare_p.delta_c = eff.delta_c_bare;
    bare_p.delta_w = eff.delta_w_bare;
    const auto bare = solve_fixed_point(bare_p, f.dq, DetuningMode::bare);
    CHECK(bare.iterations > 0);
    CHECK(std::abs(bare.delta_c_eff - eff.delta_c_eff) / std::abs(eff.delta_c_eff) < 1e-9);
    CHECK(std::abs(bare.delta_w_eff - eff.delta_w_eff) / std::abs(eff.delta_w_eff) < 1e-9);
    CHECK(std::abs(bare.alpha_s - eff.alpha_s) / eff.alpha_s < 1e-9);
    CHECK(std::abs(bare.beta_s - eff.beta_s) / eff.beta_s < 1e-9);
    CHECK(std::abs(bare.q_s - eff.q_s) / eff.q_s < 1e-9);
    // q_s satisfies its defining relation
    const double q = (f.dq.g0c * bare.alpha_s * bare.alpha_s + f.dq.g0w * bare.beta_s * bare.beta_s) /
                     f.p.omega_m;
    CHECK(std::abs(bare.q_s - q) / q < 1e-10);
  }
}

TEST_CASE("iteration cap raises ConvergenceError with a trace") {
  Fixture f;
  FixedPointOptions opt;
  opt.max_iterations = 3;
  try {
    solve_fixed_point(f.p, f.dq, DetuningMode::bare, opt);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.trace().size() == 3);
    CHECK(std::string(e.what()).find("did not converge") != std::string::npos);
  }
}

TEST_CASE("drift and diffusion entries") {
  Fixture f;
  const auto ss = solve_fixed_point(f.p, f.dq);
  const auto m = build_state_space(f.p, f.dq, ss);
  const double wm = f.p.omega_m, gm = f.p.gamma_m(), kw = f.p.kappa_w, kc = f.p.kappa_c;
  const double dw = ss.delta_w_eff, dc = ss.delta_c_eff, gw = ss.g_w, gc = ss.g_c;
  Matrix6d a;
  a << 0, wm, 0, 0, 0, 0,
      -wm, -gm, gw, 0, gc, 0,
      0, 0, -kw, dw, 0, 0,
      gw, 0, -dw, -kw, 0, 0,
      0, 0, 0, 0, -kc, dc,
      gc, 0, 0, 0, -dc, -kc;
  CHECK(m.drift == a);
  Vector6d d;
  d << 0, gm * (2 * f.dq.n_th_mech + 1), kw * (2 * f.dq.n_th_w + 1), kw * (2 * f.dq.n_th_w + 1),
      kc * (2 * f.dq.n_th_c + 1), kc * (2 * f.dq.n_th_c + 1);
  CHECK(m.diffusion == Matrix6d(d.asDiagonal()));
  CHECK((m.diffusion.diagonal().array() >= 0.0).all());
  CHECK(m.kappa_c == kc);
  CHECK(m.omega_m == wm);
  CHECK(ss.g_c >= 0.0);
  CHECK(ss.g_w >= 0.0);
}

TEST_CASE("decoupled limit") {
  Fixture f;
  f.p.power_c = 0.0;
  f.p.power_w = 0.0;
  const auto m = build_model(f.p);
  CHECK(m.drift.block<2, 4>(0, 2).isZero(0.0));
  CHECK(m.drift.block<4, 2>(2, 0).isZero(0.0));
  CHECK(m.drift.block<2, 2>(2, 4).isZero(0.0));
  CHECK(m.drift.block<2, 2>(4, 2).isZero(0.0));
  CHECK(check_stability(m).stable);

  SUBCASE("undamped oscillator") {
    auto u = m;
    u.drift(kP, kP) = 0.0;
    const auto v = check_stability(u);
    CHECK_FALSE(v.stable);
    int hits = 0;
    for (const auto& ev : v.eigenvalues) {
      if (std::abs(ev.real()) < 1e-12 * f.p.omega_m) {
        CHECK(std::abs(std::abs(ev.imag()) - f.p.omega_m) < 1e-12 * f.p.omega_m);
        ++hits;
      }
    }
    CHECK(hits == 2);
  }
  SUBCASE("anti-damped oscillator") {
    auto u = m;
    u.drift(kP, kP) = +f.p.gamma_m();
    const auto v = check_stability(u);
    CHECK_FALSE(v.stable);
    CHECK(v.spectral_abscissa == doctest::Approx(f.p.gamma_m() / 2.0).epsilon(1e-6));
    CHECK(v.margin == -v.spectral_abscissa);
  }
  SUBCASE("stable iff all damping rates positive") {
    for (int mask = 0; mask < 8; ++mask) {
      auto u = m;
      const double sg = (mask & 1) ? -1.0 : 1.0;
      const double sw = (mask & 2) ? -1.0 : 1.0;
      const double sc = (mask & 4) ? -1.0 : 1.0;
      u.drift(kP, kP) *= sg;
      u.drift(kXw, kXw) *= sw;
      u.drift(kYw, kYw) *= sw;
      u.drift(kXc, kXc) *= sc;
      u.drift(kYc, kYc) *= sc;
      CHECK(check_stability(u).stable == (mask == 0));
      CHECK(oracle::routh_hurwitz_stable(u.drift / f.p.omega_m) == (mask == 0));
    }
  }
}

TEST_CASE("default preset is stable; Routh-Hurwitz agrees") {
  Fixture f;
  const auto m = build_model(f.p);
  const auto v = check_stability(m);
  CHECK(v.stable);
  CHECK(v.spectral_abscissa / f.p.omega_m == doctest::Approx(-0.0200017).epsilon(1e-4));
  CHECK(oracle::routh_hurwitz_stable(m.drift / f.p.omega_m));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> s(0.1, 500.0);
  for (int i = 0; i < 200; ++i) {
    auto p = f.p;
    const double k = s(rng);
    p.power_c *= k;
    p.power_w *= k;
    const auto mm = build_model(p);
    const auto vv = check_stability(mm);
    if (std::abs(vv.spectral_abscissa) < 1e-9 * p.omega_m) continue;
    CHECK(vv.stable == oracle::routh_hurwitz_stable(mm.drift / p.omega_m));
  }
}

TEST_CASE("power stability limit agrees with a dense Routh-Hurwitz scan") {
  Fixture f;
  const double flip = find_power_stability_limit(f.p);
  CHECK(flip > 200.0);
  CHECK(flip < 400.0);
  // dense geometric scan, step 0.1 %
  double first_unstable = 0.0;
  for (double s = 1.0; s < 1e4; s *= 1.001) {
    auto p = f.p;
    p.power_c *= s;
    p.power_w *= s;
    if (!oracle::routh_hurwitz_stable(build_model(p).drift / p.omega_m)) {
      first_unstable = s;
      break;
    }
  }
  REQUIRE(first_unstable > 0.0);
  CHECK(std::abs(flip - first_unstable) / first_unstable < 0.01);

  SUBCASE("unstable base point is rejected") {
    auto p = f.p;
    p.power_c *= 2.0 * flip;
    p.power_w *= 2.0 * flip;
    CHECK_THROWS_AS(find_power_stability_limit(p), NumericalError);
  }
}
