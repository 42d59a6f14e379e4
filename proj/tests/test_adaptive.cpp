#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cat/adaptive.hpp"
#include "cat/grid.hpp"
#include "cat/models.hpp"
#include "cat/step1d.hpp"

using namespace cat;

namespace {

struct Advection {
  static constexpr int n = 1;
  using State = Vec<1>;
  double a = 1.0;
  State flux(const State& u) const { return State{a * u[0]}; }
  State source(const State&) const { return State{0.0}; }
  double Hx(double) const { return 0.0; }
  double max_speed(const State&) const { return std::fabs(a); }
  std::optional<LinearModel::Profile> stationary(const State&, double) const {
    return std::nullopt;
  }
};

double psi_scalar(int p, const std::vector<double>& s, double eps) {
  return smoothness_indicator_scalar(tables_for(p).diff,
                                     std::span<const double>(s), eps);
}

}  // namespace

TEST_CASE("smoothness indicator is 1 on constant data") {
  CHECK(psi_scalar(2, {3.0, 3.0, 3.0, 3.0}, 1e-8) == doctest::Approx(1.0));
  CHECK(psi_scalar(3, {1.0, 1.0, 1.0, 1.0, 1.0, 1.0}, 1e-8) ==
        doctest::Approx(1.0));
}

TEST_CASE("smoothness indicator flags a jump") {
  CHECK(psi_scalar(2, {0.0, 0.0, 1.0, 1.0}, 1e-8) < 0.5);
  CHECK(psi_scalar(3, {0.0, 0.0, 0.0, 1.0, 1.0, 1.0}, 1e-8) < 0.5);
}

TEST_CASE("smoothness indicator tends to 1 under refinement") {
  for (int p = 2; p <= 3; ++p) {
    double prev = 0.0;
    for (double h : {0.2, 0.1, 0.05, 0.025}) {
      std::vector<double> s(2 * p);
      for (int l = 0; l < 2 * p; ++l) s[l] = std::sin(1.0 + (l - p + 1) * h);
      const double psi = psi_scalar(p, s, h * h);
      CHECK(psi > prev);
      prev = psi;
    }
    CHECK(prev > 0.9);
  }
}

TEST_CASE("smoothness indicator is scale invariant without regularization") {
  std::vector<double> s = {0.3, 0.1, 0.4, 0.15, 0.9, 0.2};
  std::vector<double> s2 = s;
  for (auto& v : s2) v *= 1e6;
  CHECK(psi_scalar(3, s, 0.0) == doctest::Approx(psi_scalar(3, s2, 0.0)));
}

TEST_CASE("limiter functions hit their classical values") {
  CHECK(limiter_value(LimiterKind::minmod, -1.0) == 0.0);
  CHECK(limiter_value(LimiterKind::minmod, 0.5) == doctest::Approx(0.5));
  CHECK(limiter_value(LimiterKind::minmod, 2.0) == doctest::Approx(1.0));
  CHECK(limiter_value(LimiterKind::superbee, 0.5) == doctest::Approx(1.0));
  CHECK(limiter_value(LimiterKind::superbee, 2.0) == doctest::Approx(2.0));
  CHECK(limiter_value(LimiterKind::superbee, 4.0) == doctest::Approx(2.0));
  CHECK(limiter_value(LimiterKind::vanleer, 1.0) == doctest::Approx(1.0));
  CHECK(limiter_value(LimiterKind::vanleer, -2.0) == 0.0);
}

TEST_CASE("interface limiter is 1 on linear data and 0 at an extremum") {
  Advection m;
  LimiterConfig cfg;
  using S = Advection::State;
  CHECK(flux_limiter_phi(m, S{0.0}, S{1.0}, S{2.0}, S{3.0}, cfg) ==
        doctest::Approx(1.0));
  CHECK(flux_limiter_phi(m, S{0.0}, S{1.0}, S{0.5}, S{0.2}, cfg) == 0.0);
  cfg.strategy = LimiterStrategy::roe_speed;
  CHECK(flux_limiter_phi(m, S{0.0}, S{1.0}, S{2.0}, S{3.0}, cfg) ==
        doctest::Approx(1.0));
}

TEST_CASE("pinned indicators reproduce the non-adaptive step exactly") {
  BurgersModel m;
  Grid1D g{.a = -1.0, .b = 1.0, .N = 41};
  for (int P = 1; P <= 3; ++P) {
    const int ghost = std::max(P, 2);
    Field1D<BurgersModel::State> in(g.N, ghost), ref(g.N, ghost),
        got(g.N, ghost);
    for (int i = -ghost; i < g.N + ghost; ++i)
      in(i) = BurgersModel::State{1.0 + 0.3 * std::sin(3.0 * g.x(i))};
    const double dt = 0.3 * g.dx();
    cat_step(m, P, g, in, ref, dt);
    AdaptiveConfig cfg;
    cfg.pin_indicators = true;
    acat_step(m, P, g, in, got, dt, cfg);
    for (int i = 0; i < g.N; ++i) CHECK(got(i)[0] == ref(i)[0]);
  }
}

TEST_CASE("smooth data selects the full order away from a jump") {
  Advection m;
  Grid1D g{.a = 0.0, .b = 1.0, .N = 101};
  const int P = 2, ghost = 2;
  Field1D<Advection::State> in(g.N, ghost);
  auto u0 = [](double x) {
    return x < 0.5 ? std::sin(2.0 * x) : 2.0 + std::sin(2.0 * x);
  };
  for (int i = -ghost; i < g.N + ghost; ++i)
    in(i) = Advection::State{u0(g.x(i))};
  AdaptiveConfig cfg;
  const auto ind = compute_indicators(m, P, g, in, cfg);
  int jump = 0;
  while (g.x(jump) < 0.5) ++jump;
  for (int f = 0; f <= g.N; ++f) {
    if (std::abs(f - jump) > 4) {
      CHECK(ind.psi[0][f] > 0.9);
    }
  }
  // at the interface straddling the jump: low indicator, limiter shut off
  CHECK(ind.psi[0][jump] < 0.1);
  CHECK(ind.phi[jump] < 0.1);
}

TEST_CASE("blended step transports a step with no significant overshoot") {
  Advection m{.a = 1.0};
  Grid1D g{.a = 0.0, .b = 1.0, .N = 101};
  const int P = 1, ghost = 2;
  Field1D<Advection::State> in(g.N, ghost), out(g.N, ghost);
  for (int i = -ghost; i < g.N + ghost; ++i)
    in(i) = Advection::State{g.x(i) < 0.3 ? 1.0 : 0.0};
  const double dt = 0.8 * g.dx();
  AdaptiveConfig cfg;
  for (int step = 0; step < 30; ++step) {
    for (int l = 1; l <= ghost; ++l) {
      in(-l) = Advection::State{1.0};
      in(g.N - 1 + l) = Advection::State{0.0};
    }
    acat_step(m, P, g, in, out, dt, cfg);
    std::swap(in, out);
  }
  // the smoothness floor near the shoulders admits a tiny overshoot, but
  // nothing resembling the dispersive ringing of the unlimited scheme
  for (int i = 0; i < g.N; ++i) {
    CHECK(in(i)[0] <= 1.0 + 5e-3);
    CHECK(in(i)[0] >= -5e-3);
  }
  // the front started at x=0.3 and must have moved right by about a*t=0.24
  int cross = 0;
  while (cross < g.N - 1 && in(cross)[0] > 0.5) ++cross;
  CHECK(std::fabs(g.x(cross) - 0.54) < 0.05);
}

TEST_CASE("well-balanced adaptive step preserves stationary data") {
  SUBCASE("burgers") {
    BurgersModel m;
    Grid1D g{.a = -1.0, .b = 1.0, .N = 101};
    for (int P = 1; P <= 3; ++P) {
      const int ghost = std::max(P, 2);
      Field1D<BurgersModel::State> in(g.N, ghost), out(g.N, ghost);
      for (int i = -ghost; i < g.N + ghost; ++i)
        in(i) = BurgersModel::State{0.5 * std::exp(m.H(g.x(i)))};
      AdaptiveConfig cfg;
      cfg.wb = true;
      acat_step(m, P, g, in, out, 0.5 * g.dx(), cfg);
      for (int i = 0; i < g.N; ++i)
        CHECK(std::fabs(out(i)[0] - in(i)[0]) <= 1e-13 * std::fabs(in(i)[0]));
    }
  }
  SUBCASE("shallow water over a bump") {
    ShallowWaterModel m;
    Grid1D g{.a = -3.0, .b = 3.0, .N = 200};
    auto prof = m.stationary(ShallowWaterModel::State{2.0, 2.5}, -3.0);
    REQUIRE(prof.has_value());
    for (int P = 1; P <= 2; ++P) {
      const int ghost = std::max(P, 2);
      Field1D<ShallowWaterModel::State> in(g.N, ghost), out(g.N, ghost);
      for (int i = -ghost; i < g.N + ghost; ++i) in(i) = (*prof)(g.x(i));
      const double dt = 0.8 * g.dx() / m.max_speed(in(0));
      AdaptiveConfig cfg;
      cfg.wb = true;
      acat_step(m, P, g, in, out, dt, cfg);
      for (int i = 0; i < g.N; ++i)
        for (int c = 0; c < 2; ++c)
          CHECK(std::fabs(out(i)[c] - in(i)[c]) <=
                1e-12 * std::max(1.0, std::fabs(in(i)[c])));
    }
  }
}

TEST_CASE("adaptive step matches the plain step on smooth data") {
  BurgersModel m;
  Grid1D g{.a = -1.0, .b = 1.0, .N = 201};
  const int P = 2, ghost = 2;
  Field1D<BurgersModel::State> in(g.N, ghost), ref(g.N, ghost), got(g.N, ghost);
  for (int i = -ghost; i < g.N + ghost; ++i)
    in(i) = BurgersModel::State{2.0 + 0.1 * std::sin(2.0 * g.x(i))};
  const double dt = 0.2 * g.dx();
  cat_step(m, P, g, in, ref, dt);
  AdaptiveConfig cfg;
  acat_step(m, P, g, in, got, dt, cfg);
  for (int i = 0; i < g.N; ++i) CHECK(got(i)[0] == ref(i)[0]);
}

TEST_CASE("threaded adaptive step is deterministic") {
  BurgersModel m;
  Grid1D g{.a = -1.0, .b = 1.0, .N = 151};
  const int P = 2, ghost = 2;
  Field1D<BurgersModel::State> in(g.N, ghost), a(g.N, ghost), b(g.N, ghost);
  for (int i = -ghost; i < g.N + ghost; ++i)
    in(i) = BurgersModel::State{
        1.0 + (g.x(i) > 0 ? 0.5 : 0.0) + 0.1 * std::sin(5.0 * g.x(i))};
  const double dt = 0.2 * g.dx();
  AdaptiveConfig c1, c4;
  c4.jobs = 4;
  acat_step(m, P, g, in, a, dt, c1);
  acat_step(m, P, g, in, b, dt, c4);
  for (int i = 0; i < g.N; ++i) CHECK(a(i)[0] == b(i)[0]);
}
