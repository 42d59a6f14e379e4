#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cat/adaptive.hpp"
#include "cat/grid.hpp"
#include "cat/step1d.hpp"

namespace cat {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class BcKind { periodic, free, dirichlet };

// Per-side boundary treatment; dirichlet evaluates value(x, t) at the ghost
// coordinates (covers both exact-solution and stationary-profile data).
template <typename State>
struct Boundary1D {
  BcKind left = BcKind::free;
  BcKind right = BcKind::free;
  std::function<State(double, double)> left_value;
  std::function<State(double, double)> right_value;
};

// Populates ghost nodes only; interior nodes are never touched.
template <typename State>
void fill_ghosts(Field1D<State>& u, const Grid1D& g, const Boundary1D<State>& bc,
                 double t) {
  const int N = g.N, ghost = u.ghost();
  if ((bc.left == BcKind::periodic) != (bc.right == BcKind::periodic))
    throw ConfigError("periodic boundary must be set on both sides");
  for (int l = 1; l <= ghost; ++l) {
    switch (bc.left) {
      case BcKind::periodic:
        u(-l) = u(N - 1 - l);  // node N-1 coincides with node 0
        break;
      case BcKind::free:
        u(-l) = u(0);
        break;
      case BcKind::dirichlet:
        if (!bc.left_value)
          throw ConfigError("left dirichlet boundary needs a value function");
        u(-l) = bc.left_value(g.x(-l), t);
        break;
    }
    switch (bc.right) {
      case BcKind::periodic:
        u(N - 1 + l) = u(l);
        break;
      case BcKind::free:
        u(N - 1 + l) = u(N - 1);
        break;
      case BcKind::dirichlet:
        if (!bc.right_value)
          throw ConfigError("right dirichlet boundary needs a value function");
        u(N - 1 + l) = bc.right_value(g.x(N - 1 + l), t);
        break;
    }
  }
}

enum class SchemeKind { cat, wbcat, acat, wbacat, lf, wblf };

struct SchemeConfig {
  SchemeKind kind = SchemeKind::cat;
  int P = 1;
  double cfl = 0.9;
  LimiterConfig limiter;
  double threshold = 0.9;
  double eps = -1.0;  // adaptive indicator regularization; < 0 means dx^2
  bool pin_indicators = false;
  int jobs = 1;
};

inline bool scheme_is_adaptive(SchemeKind k) {
  return k == SchemeKind::acat || k == SchemeKind::wbacat;
}
inline bool scheme_is_wb(SchemeKind k) {
  return k == SchemeKind::wbcat || k == SchemeKind::wbacat ||
         k == SchemeKind::wblf;
}

inline int ghost_width(const SchemeConfig& sc) {
  if (scheme_is_adaptive(sc.kind)) return std::max(sc.P, 2);
  if (sc.kind == SchemeKind::lf || sc.kind == SchemeKind::wblf) return 1;
  return sc.P;
}

// First-order step, with or without the stationary-profile source.
template <typename Model>
void lf_step(const Model& m, const Grid1D& g,
             const Field1D<typename Model::State>& in,
             Field1D<typename Model::State>& out, double dt, bool wb,
             int jobs = 1) {
  using State = typename Model::State;
  const double dx = g.dx();
  const double lam = dt / dx;
  parallel_for(0, g.N, jobs, [&](int i) {
    const State fl = lf_flux(m, in(i - 1), in(i), dx, dt);
    const State fr = lf_flux(m, in(i), in(i + 1), dx, dt);
    State s{};
    bool done = false;
    if (wb) {
      try {
        auto prof = m.stationary(in(i), g.x(i));
        if (prof) {
          s = wb_lf_source(m, *prof, g.x(i - 1), g.x(i), g.x(i + 1), dx, dt);
          done = true;
        }
      } catch (const StationaryUnavailable&) {
      }
    }
    if (!done) s = lf_source(m, in(i), m.Hx(g.x(i)), dx);
    out(i) = in(i) + lam * (fl - fr + s);
  });
}

template <typename Model>
void apply_step(const Model& m, const SchemeConfig& sc, const Grid1D& g,
                const Field1D<typename Model::State>& in,
                Field1D<typename Model::State>& out, double dt) {
  switch (sc.kind) {
    case SchemeKind::cat:
      cat_step(m, sc.P, g, in, out, dt, sc.jobs);
      return;
    case SchemeKind::wbcat:
      wb_step(m, sc.P, g, in, out, dt, sc.jobs);
      return;
    case SchemeKind::lf:
    case SchemeKind::wblf:
      lf_step(m, g, in, out, dt, sc.kind == SchemeKind::wblf, sc.jobs);
      return;
    case SchemeKind::acat:
    case SchemeKind::wbacat: {
      AdaptiveConfig cfg;
      cfg.wb = sc.kind == SchemeKind::wbacat;
      cfg.limiter = sc.limiter;
      cfg.threshold = sc.threshold;
      cfg.eps = sc.eps;
      cfg.pin_indicators = sc.pin_indicators;
      cfg.jobs = sc.jobs;
      acat_step(m, sc.P, g, in, out, dt, cfg);
      return;
    }
  }
}

template <typename State>
struct RunResult {
  Field1D<State> state;
  std::vector<double> dt_history;
  double t = 0.0;
  double seconds = 0.0;
};

// Marches the state to t_end: fill ghosts, pick dt from the CFL condition
// against the largest wave speed in the interior, step. The last step is
// clipped so the run ends at t_end exactly.
template <typename Model>
RunResult<typename Model::State> advance(
    const Model& m, const Grid1D& g, Field1D<typename Model::State> state,
    const Boundary1D<typename Model::State>& bc, const SchemeConfig& sc,
    double t_end) {
  using State = typename Model::State;
  if (t_end <= 0.0) throw ConfigError("t_end must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  RunResult<State> res;
  Field1D<State> next(g.N, state.ghost());
  double t = 0.0;
  while (t < t_end) {
    fill_ghosts(state, g, bc, t);
    double speed = 0.0;
    for (int i = 0; i < g.N; ++i)
      speed = std::max(speed, m.max_speed(state(i)));
    double dt = speed > 0.0 ? sc.cfl * g.dx() / speed
                            : t_end - t;  // nothing moves: jump to the end
    dt = std::min(dt, t_end - t);
    if (!(dt > 1e-14 * t_end))
      throw std::runtime_error(
          "time step underflow at t=" + std::to_string(t) +
          " (max wave speed " + std::to_string(speed) + ")");
    apply_step(m, sc, g, state, next, dt);
    std::swap(state, next);
    t += dt;
    res.dt_history.push_back(dt);
  }
  res.state = std::move(state);
  res.t = t;
  res.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return res;
}

template <std::size_t N>
struct ErrorNorms {
  std::array<double, N> l1{};
  std::array<double, N> linf{};
};

template <typename State>
ErrorNorms<State::nvars> error_norms(const Field1D<State>& num,
                                     const Field1D<State>& ref,
                                     const Grid1D& g) {
  constexpr std::size_t C = State::nvars;
  if (ref.n() != num.n()) throw ConfigError("error_norms: grid size mismatch");
  ErrorNorms<C> e;
  for (int i = 0; i < g.N; ++i)
    for (std::size_t c = 0; c < C; ++c) {
      const double d = std::fabs(num(i)[c] - ref(i)[c]);
      e.l1[c] += d;
      e.linf[c] = std::max(e.linf[c], d);
    }
  for (std::size_t c = 0; c < C; ++c) e.l1[c] *= g.dx();
  return e;
}

template <typename State, typename Fn>
ErrorNorms<State::nvars> error_norms_exact(
    const Field1D<State>& num, Fn&& exact, const Grid1D& g) {
  Field1D<State> ref(g.N, 0);
  for (int i = 0; i < g.N; ++i) ref(i) = exact(g.x(i));
  return error_norms(num, ref, g);
}

// Nearest-node restriction of a fine-mesh field onto a coarse mesh whose
// node set is a subset (integer refinement of the same interval).
template <typename State>
Field1D<State> restrict_field(const Field1D<State>& fine, const Grid1D& gf,
                              const Grid1D& gc) {
  if ((gf.N - 1) % (gc.N - 1) != 0)
    throw ConfigError("restrict_field: meshes are not nested");
  const int ratio = (gf.N - 1) / (gc.N - 1);
  Field1D<State> out(gc.N, 0);
  for (int i = 0; i < gc.N; ++i) out(i) = fine(i * ratio);
  return out;
}

// Samples a fine-mesh field at the nodes of an arbitrary coarse mesh on the
// same interval via local degree-5 Lagrange interpolation. Used when the two
// node sets are not nested; the interpolation error is far below any scheme
// error measured against the reference.
template <typename State>
Field1D<State> sample_field(const Field1D<State>& fine, const Grid1D& gf,
                            const Grid1D& gc) {
  constexpr int deg = 5;
  if (gf.N <= deg) throw ConfigError("sample_field: reference mesh too coarse");
  Field1D<State> out(gc.N, 0);
  for (int i = 0; i < gc.N; ++i) {
    const double x = gc.x(i);
    int m = (int)std::lround((x - gf.a) / gf.dx()) - deg / 2;
    m = std::clamp(m, 0, gf.N - 1 - deg);
    State acc{};
    for (int j = 0; j <= deg; ++j) {
      double w = 1.0;
      for (int k = 0; k <= deg; ++k) {
        if (k == j) continue;
        w *= (x - gf.x(m + k)) / (gf.x(m + j) - gf.x(m + k));
      }
      acc += w * fine(m + j);
    }
    out(i) = acc;
  }
  return out;
}

inline double convergence_order(double coarse_err, double fine_err) {
  if (!(coarse_err > 0.0) || !(fine_err > 0.0)) return 0.0;
  return std::log2(coarse_err / fine_err);
}

}  // namespace cat
