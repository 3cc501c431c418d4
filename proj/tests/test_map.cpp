#include "doctest.h"

#include <cmath>
#include <random>

#include "dnls/error.hpp"
#include "dnls/map.hpp"
#include "oracles.hpp"

using namespace dnls;

namespace {

ModelParams mp(double c, double E) { return {c, E, 1, Boundary::Periodic}; }

}  // namespace

TEST_CASE("single steps") {
  const ModelParams p = mp(2.0, -0.5);
  const double fp = std::sqrt(0.5 / 2.0);
  const MapState s = step({0.0, fp}, p);
  CHECK(s.Z == doctest::Approx(0.0).scale(1));
  CHECK(s.psi == doctest::Approx(fp));
  const MapState o = step({0.0, 0.0}, p);
  CHECK(o.Z == 0.0);
  CHECK(o.psi == 0.0);
  for (double c : {-3.0, 0.0, 5.0}) {
    const MapState u = step({1.0, 0.0}, mp(c, 0.7));
    CHECK(u.Z == 1.0);
    CHECK(u.psi == 1.0);
  }
}

TEST_CASE("inverse step undoes a step") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 200; ++k) {
    const ModelParams p = mp(u(rng) * 4, u(rng) * 2);
    const MapState s{u(rng), u(rng)};
    const MapState back = inverse_step(step(s, p), p);
    CHECK(back.Z == doctest::Approx(s.Z).epsilon(1e-12).scale(1));
    CHECK(back.psi == doctest::Approx(s.psi).epsilon(1e-12).scale(1));
  }
}

TEST_CASE("iterate") {
  SUBCASE("fixed point orbit") {
    const ModelParams p = mp(1.0, -1.0);
    const Orbit o = iterate({0.0, 1.0}, p, 100);
    CHECK_FALSE(o.diverged());
    REQUIRE(o.states.size() == 101);
    for (const auto& s : o.states) CHECK(s.psi == doctest::Approx(1.0));
  }
  SUBCASE("runaway orbit") {
    const Orbit o = iterate({0.0, 10.0}, mp(1.0, 1.0), 50, 1e6);
    CHECK(o.diverged());
    CHECK(o.diverged_at < 6);
    CHECK(o.states.size() == o.diverged_at + 1);
    CHECK(std::max(std::abs(o.states.back().Z), std::abs(o.states.back().psi)) > 1e6);
  }
  SUBCASE("orbit obeys the three-term recursion") {
    const ModelParams p = mp(1.3, -0.4);
    const Orbit o = iterate({0.05, 0.2}, p, 200);
    REQUIRE_FALSE(o.diverged());
    for (std::size_t i = 1; i + 1 < o.states.size(); ++i) {
      const double a = o.states[i - 1].psi, b = o.states[i].psi, d = o.states[i + 1].psi;
      CHECK(std::abs(-a + 2 * b - d - p.c * b * b * b - p.E * b) < 1e-13);
    }
  }
  SUBCASE("backwards reproduces the orbit") {
    // A regular orbit near the stable fixed point, so rounding is not
    // amplified on the way back.
    const ModelParams p = mp(1.0, -1.0);
    const Orbit o = iterate({0.0, 1.05}, p, 60);
    MapState s = o.states.back();
    for (std::size_t k = o.states.size() - 1; k-- > 0;) {
      s = inverse_step(s, p);
      CHECK(s.psi == doctest::Approx(o.states[k].psi).epsilon(1e-9).scale(1));
    }
  }
  CHECK_THROWS_AS(iterate({0, 0}, mp(1, 1), 5, 0.0), InvalidArgument);
}

TEST_CASE("jacobians") {
  const Jacobian2 t = jacobian_at(0.0, mp(5.0, 0.0));
  CHECK(t.a == 2);
  CHECK(t.b == -1);
  CHECK(t.c == 1);
  CHECK(t.d == 0);
  CHECK(t.trace() == 2);
  const ModelParams p = mp(2.0, -0.6);
  CHECK(jacobian_at(std::sqrt(0.3), p).trace() == doctest::Approx(2 + 2 * p.E));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 1000; ++k) {
    const ModelParams q = mp(u(rng) * 10, u(rng) * 3);
    CHECK(std::abs(step_jacobian(u(rng), q).det() - 1.0) < 1e-12);
  }
}

TEST_CASE("step jacobian matches finite differences") {
  const ModelParams p = mp(1.7, -0.3);
  const MapState s{0.2, 0.45};
  const double h = 1e-6;
  const Jacobian2 J = step_jacobian(s.psi, p);
  const MapState zp = step({s.Z + h, s.psi}, p), zm = step({s.Z - h, s.psi}, p);
  const MapState pp = step({s.Z, s.psi + h}, p), pm = step({s.Z, s.psi - h}, p);
  CHECK(J.a == doctest::Approx((zp.Z - zm.Z) / (2 * h)).epsilon(1e-7));
  CHECK(J.b == doctest::Approx((pp.Z - pm.Z) / (2 * h)).epsilon(1e-7));
  CHECK(J.c == doctest::Approx((zp.psi - zm.psi) / (2 * h)).epsilon(1e-7));
  CHECK(J.d == doctest::Approx((pp.psi - pm.psi) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("cycle trace") {
  const ModelParams p = mp(1.0, -0.5);
  CHECK(cycle_trace(std::vector<double>{std::sqrt(0.5)}, p).value() == doctest::Approx(2 + 2 * p.E));
  CHECK(cycle_trace(std::vector<double>{0.0, 0.0}, mp(1, 0)).value() ==
        doctest::Approx(oracle::product_trace({0.0, 0.0}, 1, 0)));
  CHECK_THROWS_AS(cycle_trace(std::vector<double>{}, p), InvalidArgument);

  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    const auto cyc = oracle::random_vector(rng, 1 + k % 9, -1, 1);
    const ModelParams q = mp(2.0, -0.8);
    CHECK(cycle_trace(cyc, q).value() == doctest::Approx(oracle::product_trace(cyc, q.c, q.E)).epsilon(1e-11));
  }
}

TEST_CASE("cycle trace equals the trace of the step-jacobian product") {
  const ModelParams p = mp(1.1, -0.9);
  const Orbit o = iterate({0.03, 0.3}, p, 12);
  Jacobian2 prod;
  std::vector<double> psis;
  for (std::size_t i = 0; i + 1 < o.states.size(); ++i) {
    prod = step_jacobian(o.states[i].psi, p) * prod;
    psis.push_back(o.states[i].psi);
  }
  CHECK(cycle_trace(psis, p).value() == doctest::Approx(prod.trace()).epsilon(1e-11));
}

TEST_CASE("long cycles do not overflow") {
  std::vector<double> cyc(5000, 3.0);
  const ScaledTrace t = cycle_trace(cyc, mp(1.0, -1.0));
  CHECK(std::isfinite(t.mantissa));
  CHECK(t.log10_abs() > 300);
  CHECK(stability_of(t) == Stability::Unstable);
  CHECK(std::isinf(t.value()));
}

TEST_CASE("fixed points and their stability") {
  SUBCASE("E = -1, c = 1") {
    const auto f = fixed_points(mp(1, -1));
    REQUIRE(f.size() == 3);
    CHECK(f[0].state.psi == 0.0);
    CHECK(f[0].trace == doctest::Approx(3));
    CHECK(f[0].stability == Stability::Unstable);
    CHECK(f[1].state.psi == doctest::Approx(1));
    CHECK(f[2].state.psi == doctest::Approx(-1));
    CHECK(f[1].stability == Stability::Stable);
    CHECK(f[2].stability == Stability::Stable);
  }
  SUBCASE("E = -3, c = 1") {
    const auto f = fixed_points(mp(1, -3));
    REQUIRE(f.size() == 3);
    CHECK(f[1].state.psi == doctest::Approx(std::sqrt(3.0)));
    CHECK(f[1].stability == Stability::Unstable);
  }
  SUBCASE("negative coupling") {
    const auto f = fixed_points(mp(-1, 1));
    REQUIRE(f.size() == 3);
    CHECK(f[1].state.psi == doctest::Approx(1));
  }
  SUBCASE("no nontrivial pair") {
    CHECK(fixed_points(mp(1, 1)).size() == 1);
  }
  SUBCASE("window edges") {
    CHECK(fixed_points(mp(1, -2))[1].stability == Stability::Marginal);
    CHECK(fixed_points(mp(1, -2 + 1e-3))[1].stability == Stability::Stable);
    CHECK(fixed_points(mp(1, -2 - 1e-3))[1].stability == Stability::Unstable);
    CHECK(fixed_points(mp(1, -1e-3))[1].stability == Stability::Stable);
  }
}

TEST_CASE("state_at and shoot") {
  const LatticeWave w({0.1, 0.5, -0.2}, Boundary::Periodic);
  CHECK(state_at(w, 0).Z == doctest::Approx(0.1 - -0.2));
  CHECK(state_at(w, 1).Z == doctest::Approx(0.4));
  const LatticeWave o({0.1, 0.5, -0.2}, Boundary::Open);
  CHECK(state_at(o, 0).Z == doctest::Approx(0.1));
  CHECK_THROWS_AS(state_at(w, 3), DimensionError);

  // A map orbit read back as a lattice state is reproduced by shooting.
  const ModelParams p{1.2, -0.7, 6, Boundary::Open};
  const Orbit orb = iterate({0.3, 0.3}, p, 5);
  std::vector<double> v;
  for (const auto& s : orb.states) v.push_back(s.psi);
  const Orbit back = shoot(LatticeWave(v, Boundary::Open), p);
  REQUIRE(back.states.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(back.states[i].psi == doctest::Approx(v[i]));
}
