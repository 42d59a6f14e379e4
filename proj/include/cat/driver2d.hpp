#pragma once

#include <chrono>
#include <functional>

#include "cat/driver.hpp"
#include "cat/step2d.hpp"

namespace cat {

// Per-side boundary treatment; dirichlet evaluates value(x, y, t).
template <typename State>
struct Boundary2D {
  BcKind left = BcKind::free;
  BcKind right = BcKind::free;
  BcKind bottom = BcKind::free;
  BcKind top = BcKind::free;
  std::function<State(double, double, double)> left_value, right_value,
      bottom_value, top_value;
};

// Fills the whole ghost frame: x-sides first on interior rows, then y-sides
// over all columns including the freshly filled ghost columns, so corners
// are consistent for both periodic wrap and extrapolation.
template <typename State>
void fill_ghosts2d(Field2D<State>& u, const Grid2D& g,
                   const Boundary2D<State>& bc, double t) {
  const int Nx = g.Nx, Ny = g.Ny, ghost = u.ghost();
  if ((bc.left == BcKind::periodic) != (bc.right == BcKind::periodic) ||
      (bc.bottom == BcKind::periodic) != (bc.top == BcKind::periodic))
    throw ConfigError("periodic boundary must be set on both sides of an axis");
  for (int j = 0; j < Ny; ++j)
    for (int l = 1; l <= ghost; ++l) {
      switch (bc.left) {
        case BcKind::periodic:
          u(-l, j) = u(Nx - 1 - l, j);
          break;
        case BcKind::free:
          u(-l, j) = u(0, j);
          break;
        case BcKind::dirichlet:
          if (!bc.left_value)
            throw ConfigError("left dirichlet boundary needs a value function");
          u(-l, j) = bc.left_value(g.x(-l), g.y(j), t);
          break;
      }
      switch (bc.right) {
        case BcKind::periodic:
          u(Nx - 1 + l, j) = u(l, j);
          break;
        case BcKind::free:
          u(Nx - 1 + l, j) = u(Nx - 1, j);
          break;
        case BcKind::dirichlet:
          if (!bc.right_value)
            throw ConfigError(
                "right dirichlet boundary needs a value function");
          u(Nx - 1 + l, j) = bc.right_value(g.x(Nx - 1 + l), g.y(j), t);
          break;
      }
    }
  for (int i = -ghost; i < Nx + ghost; ++i)
    for (int l = 1; l <= ghost; ++l) {
      switch (bc.bottom) {
        case BcKind::periodic:
          u(i, -l) = u(i, Ny - 1 - l);
          break;
        case BcKind::free:
          u(i, -l) = u(i, 0);
          break;
        case BcKind::dirichlet:
          if (!bc.bottom_value)
            throw ConfigError(
                "bottom dirichlet boundary needs a value function");
          u(i, -l) = bc.bottom_value(g.x(i), g.y(-l), t);
          break;
      }
      switch (bc.top) {
        case BcKind::periodic:
          u(i, Ny - 1 + l) = u(i, l);
          break;
        case BcKind::free:
          u(i, Ny - 1 + l) = u(i, Ny - 1);
          break;
        case BcKind::dirichlet:
          if (!bc.top_value)
            throw ConfigError("top dirichlet boundary needs a value function");
          u(i, Ny - 1 + l) = bc.top_value(g.x(i), g.y(Ny - 1 + l), t);
          break;
      }
    }
}

// First-order 2D step (with or without the stationary-profile source).
template <typename Model>
void lf2d_step(const Model& m, const Grid2D& g,
               const Field2D<typename Model::State>& in,
               Field2D<typename Model::State>& out, double dt, bool wb,
               int jobs = 1) {
  using State = typename Model::State;
  const double dx = g.dx(), dy = g.dy();
  const double lx = dt / dx, ly = dt / dy;
  const detail::XSlice<Model> mxs{m};
  const detail::YSlice<Model> mys{m};
  parallel_for(0, g.Nx * g.Ny, jobs, [&](int f) {
    const int i = f % g.Nx, j = f / g.Nx;
    const State fxm = lf_flux(mxs, in(i - 1, j), in(i, j), dx, dt);
    const State fxp = lf_flux(mxs, in(i, j), in(i + 1, j), dx, dt);
    const State fym = lf_flux(mys, in(i, j - 1), in(i, j), dy, dt);
    const State fyp = lf_flux(mys, in(i, j), in(i, j + 1), dy, dt);
    State s1{}, s2{};
    bool done = false;
    if (wb) {
      try {
        auto prof = m.stationary(in(i, j), g.x(i), g.y(j));
        if (prof) {
          auto px = [&](int l) { return (*prof)(g.x(i + l), g.y(j)); };
          auto py = [&](int l) { return (*prof)(g.x(i), g.y(j + l)); };
          s1 = lf_flux(mxs, px(0), px(1), dx, dt) -
               lf_flux(mxs, px(-1), px(0), dx, dt);
          s2 = lf_flux(mys, py(0), py(1), dy, dt) -
               lf_flux(mys, py(-1), py(0), dy, dt);
          done = true;
        }
      } catch (const StationaryUnavailable&) {
      }
    }
    if (!done) {
      s1 = lf_source(mxs, in(i, j), m.Hx(g.x(i), g.y(j)), dx);
      s2 = lf_source(mys, in(i, j), m.Hy(g.x(i), g.y(j)), dy);
    }
    out(i, j) = in(i, j) + lx * (fxm - fxp + s1) + ly * (fym - fyp + s2);
  });
}

template <typename Model>
void apply_step2d(const Model& m, const SchemeConfig& sc, const Grid2D& g,
                  const Field2D<typename Model::State>& in,
                  Field2D<typename Model::State>& out, double dt) {
  switch (sc.kind) {
    case SchemeKind::cat:
      cat2d_step(m, sc.P, g, in, out, dt, sc.jobs);
      return;
    case SchemeKind::wbcat:
      wb2d_step(m, sc.P, g, in, out, dt, sc.jobs);
      return;
    case SchemeKind::lf:
    case SchemeKind::wblf:
      lf2d_step(m, g, in, out, dt, sc.kind == SchemeKind::wblf, sc.jobs);
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
      acat2d_step(m, sc.P, g, in, out, dt, cfg);
      return;
    }
  }
}

template <typename State>
struct RunResult2D {
  Field2D<State> state;
  std::vector<double> dt_history;
  double t = 0.0;
  double seconds = 0.0;
};

// Time marching with the dimension-summed CFL bound
// dt = cfl / (max|lambda_x|/dx + max|lambda_y|/dy).
template <typename Model>
RunResult2D<typename Model::State> advance2d(
    const Model& m, const Grid2D& g, Field2D<typename Model::State> state,
    const Boundary2D<typename Model::State>& bc, const SchemeConfig& sc,
    double t_end) {
  using State = typename Model::State;
  if (t_end <= 0.0) throw ConfigError("t_end must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  RunResult2D<State> res;
  Field2D<State> next(g.Nx, g.Ny, state.ghost());
  double t = 0.0;
  while (t < t_end) {
    fill_ghosts2d(state, g, bc, t);
    double sum = 0.0;
    for (int j = 0; j < g.Ny; ++j)
      for (int i = 0; i < g.Nx; ++i)
        sum = std::max(sum, m.max_speed_x(state(i, j)) / g.dx() +
                                m.max_speed_y(state(i, j)) / g.dy());
    double dt = sum > 0.0 ? sc.cfl / sum : t_end - t;
    dt = std::min(dt, t_end - t);
    if (!(dt > 1e-14 * t_end))
      throw std::runtime_error("time step underflow at t=" + std::to_string(t));
    apply_step2d(m, sc, g, state, next, dt);
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

template <typename State>
ErrorNorms<State::nvars> error_norms2d(const Field2D<State>& num,
                                       const Field2D<State>& ref,
                                       const Grid2D& g) {
  constexpr std::size_t C = State::nvars;
  if (ref.nx() != num.nx() || ref.ny() != num.ny())
    throw ConfigError("error_norms2d: grid size mismatch");
  ErrorNorms<C> e;
  for (int j = 0; j < g.Ny; ++j)
    for (int i = 0; i < g.Nx; ++i)
      for (std::size_t c = 0; c < C; ++c) {
        const double d = std::fabs(num(i, j)[c] - ref(i, j)[c]);
        e.l1[c] += d;
        e.linf[c] = std::max(e.linf[c], d);
      }
  for (std::size_t c = 0; c < C; ++c) e.l1[c] *= g.dx() * g.dy();
  return e;
}

template <typename State, typename Fn>
ErrorNorms<State::nvars> error_norms2d_exact(const Field2D<State>& num,
                                             Fn&& exact, const Grid2D& g) {
  Field2D<State> ref(g.Nx, g.Ny, 0);
  for (int j = 0; j < g.Ny; ++j)
    for (int i = 0; i < g.Nx; ++i) ref(i, j) = exact(g.x(i), g.y(j));
  return error_norms2d(num, ref, g);
}

template <typename State>
Field2D<State> restrict_field2d(const Field2D<State>& fine, const Grid2D& gf,
                                const Grid2D& gc) {
  if ((gf.Nx - 1) % (gc.Nx - 1) != 0 || (gf.Ny - 1) % (gc.Ny - 1) != 0)
    throw ConfigError("restrict_field2d: meshes are not nested");
  const int rx = (gf.Nx - 1) / (gc.Nx - 1), ry = (gf.Ny - 1) / (gc.Ny - 1);
  Field2D<State> out(gc.Nx, gc.Ny, 0);
  for (int j = 0; j < gc.Ny; ++j)
    for (int i = 0; i < gc.Nx; ++i) out(i, j) = fine(i * rx, j * ry);
  return out;
}

}  // namespace cat
