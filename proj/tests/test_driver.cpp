#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cat/driver.hpp"
#include "cat/models.hpp"

using namespace cat;

namespace {

double bump(double x) { return std::exp(-2.0 * x * x); }

}  // namespace

TEST_CASE("ghost filling: periodic wraps, free copies, dirichlet evaluates") {
  using S = Vec<1>;
  Grid1D g{.a = 0.0, .b = 1.0, .N = 5};
  Field1D<S> u(5, 2);
  for (int i = 0; i < 5; ++i) u(i) = S{static_cast<double>(i)};

  Boundary1D<S> per{.left = BcKind::periodic, .right = BcKind::periodic};
  fill_ghosts(u, g, per, 0.0);
  // nodes 0 and 4 are the same physical point: period is 4 nodes
  CHECK(u(-1)[0] == 3.0);
  CHECK(u(-2)[0] == 2.0);
  CHECK(u(5)[0] == 1.0);
  CHECK(u(6)[0] == 2.0);

  Boundary1D<S> fr;  // free on both sides
  fill_ghosts(u, g, fr, 0.0);
  CHECK(u(-1)[0] == 0.0);
  CHECK(u(6)[0] == 4.0);

  Boundary1D<S> dir{.left = BcKind::dirichlet, .right = BcKind::dirichlet};
  dir.left_value = [](double x, double t) { return S{x + t}; };
  dir.right_value = [](double x, double t) { return S{2.0 * x + t}; };
  fill_ghosts(u, g, dir, 0.5);
  CHECK(u(-1)[0] == doctest::Approx(-0.25 + 0.5));
  CHECK(u(5)[0] == doctest::Approx(2.5 + 0.5));

  // interior untouched through all of it
  for (int i = 0; i < 5; ++i) CHECK(u(i)[0] == static_cast<double>(i));

  Boundary1D<S> bad{.left = BcKind::periodic, .right = BcKind::free};
  CHECK_THROWS_AS(fill_ghosts(u, g, bad, 0.0), ConfigError);
  Boundary1D<S> nofn{.left = BcKind::dirichlet, .right = BcKind::free};
  CHECK_THROWS_AS(fill_ghosts(u, g, nofn, 0.0), ConfigError);
}

TEST_CASE("advance lands on t_end exactly and respects the CFL bound") {
  LinearModel m;
  Grid1D g{.a = -0.2, .b = 2.0, .N = 23};
  SchemeConfig sc{.kind = SchemeKind::cat, .P = 1, .cfl = 0.9};
  Field1D<LinearModel::State> u0(g.N, ghost_width(sc));
  for (int i = 0; i < g.N; ++i) u0(i) = LinearModel::State{bump(g.x(i))};
  Boundary1D<LinearModel::State> bc{.left = BcKind::dirichlet,
                                    .right = BcKind::free};
  bc.left_value = [](double x, double t) {
    return LinearModel::State{LinearModel::exact(x, t, bump)};
  };

  auto res = advance(m, g, u0, bc, sc, 0.77);
  double t = 0.0;
  for (double dt : res.dt_history) {
    CHECK(dt <= 0.9 * g.dx() + 1e-15);
    t += dt;
  }
  CHECK(t == doctest::Approx(0.77).epsilon(1e-14));
  CHECK(res.t == doctest::Approx(0.77).epsilon(1e-14));

  // t_end below one CFL step: single clipped step
  auto tiny = advance(m, g, u0, bc, sc, 1e-4);
  CHECK(tiny.dt_history.size() == 1);
  CHECK(tiny.dt_history[0] == doctest::Approx(1e-4));

  CHECK_THROWS_AS(advance(m, g, u0, bc, sc, -1.0), ConfigError);
}

TEST_CASE("advance is deterministic") {
  BurgersModel m;
  Grid1D g{.a = -1.0, .b = 1.0, .N = 101};
  SchemeConfig sc{.kind = SchemeKind::wbacat, .P = 2, .cfl = 0.8, .jobs = 3};
  Field1D<BurgersModel::State> u0(g.N, ghost_width(sc));
  for (int i = 0; i < g.N; ++i)
    u0(i) = BurgersModel::State{std::exp(m.H(g.x(i))) + 0.2 * bump(g.x(i))};
  Boundary1D<BurgersModel::State> bc{.left = BcKind::dirichlet,
                                     .right = BcKind::dirichlet};
  auto stat = [&m](double x, double) {
    return BurgersModel::State{std::exp(m.H(x))};
  };
  bc.left_value = stat;
  bc.right_value = stat;
  auto r1 = advance(m, g, u0, bc, sc, 0.05);
  auto r2 = advance(m, g, u0, bc, sc, 0.05);
  REQUIRE(r1.dt_history.size() == r2.dt_history.size());
  for (int i = 0; i < g.N; ++i) CHECK(r1.state(i)[0] == r2.state(i)[0]);
}

TEST_CASE("error norms and convergence order bookkeeping") {
  using S = Vec<2>;
  Grid1D g{.a = 0.0, .b = 1.0, .N = 11};
  Field1D<S> a(11, 0), b(11, 0);
  for (int i = 0; i < 11; ++i) {
    a(i) = S{1.0, 2.0};
    b(i) = S{1.0, 2.0};
  }
  auto e0 = error_norms(a, b, g);
  CHECK(e0.l1[0] == 0.0);
  CHECK(e0.linf[1] == 0.0);

  b(4)[1] = 2.5;
  auto e1 = error_norms(a, b, g);
  CHECK(e1.l1[1] == doctest::Approx(0.5 * g.dx()));
  CHECK(e1.linf[1] == doctest::Approx(0.5));
  CHECK(e1.l1[0] == 0.0);

  CHECK(convergence_order(4.0, 1.0) == doctest::Approx(2.0));
  CHECK(convergence_order(1e-3, 1e-3 / 16.0) == doctest::Approx(4.0));

  Grid1D gf{.a = 0.0, .b = 1.0, .N = 21};
  Field1D<S> fine(21, 0);
  for (int i = 0; i < 21; ++i) fine(i) = S{gf.x(i), 0.0};
  auto coarse = restrict_field(fine, gf, g);
  for (int i = 0; i < 11; ++i) CHECK(coarse(i)[0] == doctest::Approx(g.x(i)));
  Grid1D gbad{.a = 0.0, .b = 1.0, .N = 14};
  CHECK_THROWS_AS(restrict_field(fine, gf, gbad), ConfigError);
}

TEST_CASE("smooth linear run converges at the scheme order") {
  // transition-profile data is flat near the right edge at t=1, so the free
  // outflow boundary does not pollute the interior order
  LinearModel m;
  Boundary1D<LinearModel::State> bc{.left = BcKind::dirichlet,
                                    .right = BcKind::free};
  bc.left_value = [](double x, double t) {
    return LinearModel::State{
        LinearModel::exact(x, t, smooth_transition_profile)};
  };
  auto run = [&](int N, int P, SchemeKind kind) {
    Grid1D g{.a = -0.2, .b = 2.0, .N = N};
    SchemeConfig sc{.kind = kind, .P = P, .cfl = 0.9};
    sc.pin_indicators = true;
    Field1D<LinearModel::State> u0(g.N, ghost_width(sc));
    for (int i = 0; i < g.N; ++i)
      u0(i) = LinearModel::State{smooth_transition_profile(g.x(i))};
    auto res = advance(m, g, u0, bc, sc, 1.0);
    auto e = error_norms_exact(
        res.state,
        [&](double x) {
          return LinearModel::State{
              LinearModel::exact(x, 1.0, smooth_transition_profile)};
        },
        g);
    return e.l1[0];
  };
  for (int P = 1; P <= 2; ++P) {
    const double ec = run(41, P, SchemeKind::cat);
    const double ef = run(81, P, SchemeKind::cat);
    const double order = convergence_order(ec, ef);
    CHECK(order > 2.0 * P - 0.35);
    CHECK(order < 2.0 * P + 0.35);
  }
  // well-balanced variant converges at the same order
  const double ec = run(41, 2, SchemeKind::wbcat);
  const double ef = run(81, 2, SchemeKind::wbcat);
  CHECK(convergence_order(ec, ef) > 3.6);
}

TEST_CASE("first-order scheme runs stably on a shallow water jump") {
  ShallowWaterModel m{.flat = true};
  Grid1D g{.a = -1.0, .b = 1.0, .N = 200};
  SchemeConfig sc{.kind = SchemeKind::lf, .P = 1, .cfl = 0.9};
  Field1D<ShallowWaterModel::State> u0(g.N, ghost_width(sc));
  for (int i = 0; i < g.N; ++i)
    u0(i) = ShallowWaterModel::State{g.x(i) < 0.0 ? 2.0 : 1.0, 0.0};
  Boundary1D<ShallowWaterModel::State> bc;  // free both sides
  auto res = advance(m, g, u0, bc, sc, 0.1);
  for (int i = 0; i < g.N; ++i) {
    CHECK(res.state(i)[0] >= 1.0 - 1e-12);
    CHECK(res.state(i)[0] <= 2.0 + 1e-12);
  }
}
