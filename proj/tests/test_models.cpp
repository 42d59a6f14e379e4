#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cat/models.hpp"

using namespace cat;

namespace {

// Central difference of a scalar function.
template <typename F>
double fd(F f, double x, double dx = 1e-6) {
  return (f(x + dx) - f(x - dx)) / (2.0 * dx);
}

}  // namespace

TEST_CASE("smooth transition profile endpoints and plateaus") {
  CHECK(smooth_transition_profile(0.0) == 0.0);
  CHECK(smooth_transition_profile(1.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(smooth_transition_profile(-0.1) == 0.0);
  CHECK(smooth_transition_profile(2.0) == 1.0);
  // flat to fifth order at both ends
  CHECK(std::fabs(fd(smooth_transition_profile, 1.0, 1e-4)) < 1e-8);
  CHECK(std::fabs(fd(smooth_transition_profile, 0.0, 1e-4)) < 1e-8);
  // monotone on a sample sweep
  double prev = 0.0;
  for (int i = 1; i <= 50; ++i) {
    const double v = smooth_transition_profile(i / 50.0);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("linear model exact solution") {
  auto u0 = [](double x) { return smooth_transition_profile(x); };
  CHECK(LinearModel::exact(1.0, 0.0, u0) == doctest::Approx(1.0));
  auto one = [](double) { return 1.0; };
  CHECK(LinearModel::exact(2.0, 1.0, one) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK(LinearModel::exact(0.5, 1.0, u0) == 0.0);
}

TEST_CASE("linear and burgers stationary profiles solve the steady ODE") {
  LinearModel lin;
  auto lp = lin.stationary({2.0}, 0.5).value();
  CHECK(lp(0.5)[0] == doctest::Approx(2.0).epsilon(1e-14));
  // u_x = u Hx
  const double dx = 1e-6;
  auto lval = [&](double x) { return lp(x)[0]; };
  CHECK(fd(lval, 1.2) ==
        doctest::Approx(lp(1.2)[0] * lin.Hx(1.2)).epsilon(1e-8));

  BurgersModel bur;  // H = x + 0.1 sin(10x)
  auto bp = bur.stationary({1.0}, 0.0).value();
  CHECK(bp(0.0)[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bp(1.0)[0] == doctest::Approx(std::exp(bur.H(1.0))).epsilon(1e-13));
  auto bval = [&](double x) { return bp(x)[0]; };
  CHECK(fd(bval, 0.3) ==
        doctest::Approx(bp(0.3)[0] * bur.Hx(0.3)).epsilon(1e-8));

  BurgersModel plain{0.0, 0.0};  // H = x
  auto pp = plain.stationary({1.0}, 0.0).value();
  CHECK(pp(1.0)[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("shallow water basics") {
  ShallowWaterModel sw;
  const ShallowWaterModel::State U{2.0, 2.5};
  CHECK(sw.froude(U) == doctest::Approx(0.2822).epsilon(1e-3));
  CHECK(sw.max_speed(U) ==
        doctest::Approx(std::fabs(2.5 / 2.0) + std::sqrt(9.81 * 2.0))
            .epsilon(1e-15));
  auto F = sw.flux(U);
  CHECK(F[0] == 2.5);
  CHECK(F[1] == doctest::Approx(2.5 * 1.25 + 0.5 * 9.81 * 4.0).epsilon(1e-15));
  CHECK_THROWS_AS(sw.flux({-1.0, 0.0}), PositivityError);
  // dry state is tolerated with zero velocity
  CHECK(sw.flux({0.0, 0.0})[0] == 0.0);
  CHECK(sw.max_speed({0.0, 0.0}) == 0.0);
}

TEST_CASE("shallow water stationary solve reproduces the anchor") {
  ShallowWaterModel sw;
  auto prof = sw.stationary({2.0, 2.5}, -3.0).value();
  auto a = prof(-3.0);
  CHECK(a[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(a[1] == 2.5);
  // same bathymetry value away from the bump: same state
  auto b = prof(1.0);
  CHECK(b[0] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("shallow water stationary profile: Bernoulli invariant over bump") {
  ShallowWaterModel sw;
  auto prof = sw.stationary({2.0, 2.5}, -3.0).value();
  const double g = sw.g;
  const double C =
      0.5 * 2.5 * 2.5 / 4.0 + g * 2.0 - g * sw.H(-3.0);
  for (double x : {-0.2, -0.15, -0.1, 0.0, 0.07, 0.13, 0.2}) {
    auto U = prof(x);
    CHECK(U[1] == 2.5);
    const double Cx =
        0.5 * U[1] * U[1] / (U[0] * U[0]) + g * U[0] - g * sw.H(x);
    CHECK(Cx == doctest::Approx(C).epsilon(1e-12));
    // stays subcritical like the anchor
    CHECK(sw.froude(U) < 1.0);
  }
}

TEST_CASE("shallow water regime selection and failure modes") {
  ShallowWaterModel sw;
  // supercritical anchor: shallow fast flow, Fr > 1
  ShallowWaterModel::State sup{0.2, 2.0};
  REQUIRE(sw.froude(sup) > 1.0);
  auto prof = sw.stationary(sup, -3.0).value();
  for (double x : {-0.1, 0.05}) {
    auto U = prof(x);
    CHECK(sw.froude(U) > 1.0);
  }
  // critical anchor is rejected
  const double hc = std::cbrt(2.5 * 2.5 / sw.g);
  CHECK_THROWS_AS(sw.stationary({hc, 2.5}, -3.0), AmbiguousRegime);
  // lake at rest over the bump
  auto lake = sw.stationary({2.0, 0.0}, -3.0).value();
  auto L = lake(0.0);
  CHECK(L[0] == doctest::Approx(2.0 + sw.H(0.0)).epsilon(1e-14));
  CHECK(L[1] == 0.0);
}

TEST_CASE("euler family fit") {
  EulerModel2D eu;
  eu.pot = EulerModel2D::Potential::well_a;
  auto U0 = eu.from_primitive(0.7, 0.0, 0.0, 0.7);
  auto prof = eu.stationary(U0, 0.2, 0.6).value();
  auto A = prof(0.2, 0.6);
  CHECK(A[0] == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(A[1] == 0.0);
  CHECK(A[2] == 0.0);
  CHECK(A[3] == doctest::Approx(0.7 / (eu.gamma - 1.0)).epsilon(1e-14));
  // E = p/(gamma-1) exactly along the profile
  auto B = prof(0.8, 0.1);
  CHECK(eu.pressure(B) == doctest::Approx(B[3] * (eu.gamma - 1.0)).epsilon(1e-13));
  // hydrostatic balance p_x = -rho Hx by finite differences
  const double dx = 1e-5;
  auto p_at = [&](double x) { return eu.pressure(prof(x, 0.4)); };
  const double px = (p_at(0.5 + dx) - p_at(0.5 - dx)) / (2 * dx);
  CHECK(px == doctest::Approx(-prof(0.5, 0.4)[0] * eu.Hx(0.5, 0.4))
                  .epsilon(1e-7));
}

TEST_CASE("euler potential derivatives match finite differences of H") {
  for (auto pot : {EulerModel2D::Potential::linear,
                   EulerModel2D::Potential::well_a,
                   EulerModel2D::Potential::well_b}) {
    EulerModel2D eu;
    eu.pot = pot;
    for (double x : {0.1, 0.5, 0.9})
      for (double y : {0.2, 0.7}) {
        auto hx = [&](double s) { return eu.H(s, y); };
        auto hy = [&](double s) { return eu.H(x, s); };
        CHECK(eu.Hx(x, y) == doctest::Approx(fd(hx, x)).epsilon(1e-7));
        CHECK(eu.Hy(x, y) == doctest::Approx(fd(hy, y)).epsilon(1e-7));
      }
  }
}

TEST_CASE("euler flux and positivity") {
  EulerModel2D eu;
  auto U = eu.from_primitive(1.0, 0.3, -0.2, 2.0);
  CHECK(eu.pressure(U) == doctest::Approx(2.0).epsilon(1e-13));
  auto F = eu.flux_x(U);
  CHECK(F[0] == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(F[1] == doctest::Approx(1.0 * 0.3 * 0.3 + 2.0).epsilon(1e-13));
  auto G = eu.flux_y(U);
  CHECK(G[0] == doctest::Approx(-0.2).epsilon(1e-13));
  CHECK(G[2] == doctest::Approx(1.0 * 0.04 + 2.0).epsilon(1e-13));
  CHECK(eu.max_speed_x(U) ==
        doctest::Approx(0.3 + std::sqrt(1.4 * 2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(eu.pressure(EulerModel2D::State{1.0, 0.0, 0.0, -1.0}),
                  PositivityError);
  CHECK_THROWS_AS(eu.pressure(EulerModel2D::State{-1.0, 0.0, 0.0, 1.0}),
                  PositivityError);
}
