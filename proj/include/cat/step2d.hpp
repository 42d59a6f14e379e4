#pragma once

#include <vector>

#include "cat/adaptive.hpp"
#include "cat/grid.hpp"
#include "cat/kernel2d.hpp"
#include "cat/models.hpp"
#include "cat/parallel.hpp"

namespace cat {

namespace detail {

// Directional views so the 1D limiter / Lax-Friedrichs helpers can be reused
// on 2D models.
template <typename Model>
struct XSlice {
  const Model& m;
  using State = typename Model::State;
  State flux(const State& u) const { return m.flux_x(u); }
  State source(const State& u) const { return m.source_x(u); }
};
template <typename Model>
struct YSlice {
  const Model& m;
  using State = typename Model::State;
  State flux(const State& u) const { return m.flux_y(u); }
  State source(const State& u) const { return m.source_y(u); }
};

// Block centered at node (c1, c2), i.e. at the point (x_{c1}+dx/2, y_{c2}+dy/2).
template <typename Model>
BlockResult<Model> plain_block(const Model& m, int P, const Grid2D& g,
                               const Field2D<typename Model::State>& u, int c1,
                               int c2, double dt) {
  using State = typename Model::State;
  constexpr int M = 2 * kMaxP;
  const int w = 2 * P;
  std::array<State, M * M> st;
  std::array<double, M * M> hx, hy;
  for (int l2 = 0; l2 < w; ++l2)
    for (int l1 = 0; l1 < w; ++l1) {
      const int i = c1 + l1 - P + 1, j = c2 + l2 - P + 1;
      st[l2 * w + l1] = u(i, j);
      hx[l2 * w + l1] = m.Hx(g.x(i), g.y(j));
      hy[l2 * w + l1] = m.Hy(g.x(i), g.y(j));
    }
  return cat_block(m, P, st.data(), hx.data(), hy.data(), nullptr, nullptr,
                   nullptr, nullptr, g.dx(), g.dy(), dt);
}

template <typename Model, typename Profile>
BlockResult<Model> wb_block(const Model& m, int P, const Grid2D& g,
                            const Field2D<typename Model::State>& u, int c1,
                            int c2, const Profile& prof, double dt) {
  using State = typename Model::State;
  constexpr int M = 2 * kMaxP;
  const int w = 2 * P;
  std::array<State, M * M> st, fxs, gys, sxs, sys;
  std::array<double, M * M> hx, hy;
  for (int l2 = 0; l2 < w; ++l2)
    for (int l1 = 0; l1 < w; ++l1) {
      const int i = c1 + l1 - P + 1, j = c2 + l2 - P + 1;
      const double x = g.x(i), y = g.y(j);
      const int l = l2 * w + l1;
      st[l] = u(i, j);
      hx[l] = m.Hx(x, y);
      hy[l] = m.Hy(x, y);
      const State ref = prof(x, y);
      fxs[l] = m.flux_x(ref);
      gys[l] = m.flux_y(ref);
      sxs[l] = m.source_x(ref);
      sys[l] = m.source_y(ref);
    }
  return cat_block(m, P, st.data(), hx.data(), hy.data(), fxs.data(),
                   gys.data(), sxs.data(), sys.data(), g.dx(), g.dy(), dt);
}

}  // namespace detail

// Plain 2D order-2P update; blocks are shared between neighboring nodes.
template <typename Model>
void cat2d_step(const Model& m, int P, const Grid2D& g,
                const Field2D<typename Model::State>& in,
                Field2D<typename Model::State>& out, double dt, int jobs = 1) {
  const int Nx = g.Nx, Ny = g.Ny;
  const int bw = Nx + 1;
  std::vector<BlockResult<Model>> blocks((Nx + 1) * (Ny + 1));
  // block index (b1, b2) = blocks[(b2+1)*bw + (b1+1)], b1 = -1..Nx-1
  parallel_for(0, (Nx + 1) * (Ny + 1), jobs, [&](int f) {
    const int b1 = f % bw - 1, b2 = f / bw - 1;
    blocks[f] = detail::plain_block(m, P, g, in, b1, b2, dt);
  });
  auto blk = [&](int b1, int b2) -> const BlockResult<Model>& {
    return blocks[(b2 + 1) * bw + (b1 + 1)];
  };
  const double lx = dt / g.dx(), ly = dt / g.dy();
  parallel_for(0, Nx * Ny, jobs, [&](int f) {
    const int i = f % Nx, j = f / Nx;
    const auto& xm = blk(i - 1, j).x;
    const auto& xp = blk(i, j).x;
    const auto& ym = blk(i, j - 1).y;
    const auto& yp = blk(i, j).y;
    const auto s1 = assemble_source<Model>(P, xm, xp, dt);
    const auto s2 = assemble_source<Model>(P, ym, yp, dt);
    out(i, j) = in(i, j) + lx * (xm.flux - xp.flux + s1) +
                ly * (ym.flux - yp.flux + s2);
  });
}

// Well-balanced 2D update: per node, the three adjacent blocks are computed
// on data differenced against the node's own stationary family member.
template <typename Model>
void wb2d_step(const Model& m, int P, const Grid2D& g,
               const Field2D<typename Model::State>& in,
               Field2D<typename Model::State>& out, double dt, int jobs = 1) {
  const double lx = dt / g.dx(), ly = dt / g.dy();
  parallel_for(0, g.Nx * g.Ny, jobs, [&](int f) {
    const int i = f % g.Nx, j = f / g.Nx;
    bool done = false;
    try {
      auto prof = m.stationary(in(i, j), g.x(i), g.y(j));
      if (prof) {
        const auto bl = detail::wb_block(m, P, g, in, i - 1, j, *prof, dt);
        const auto bd = detail::wb_block(m, P, g, in, i, j - 1, *prof, dt);
        const auto bc = detail::wb_block(m, P, g, in, i, j, *prof, dt);
        const auto s1 = assemble_source<Model>(P, bl.x, bc.x, dt);
        const auto s2 = assemble_source<Model>(P, bd.y, bc.y, dt);
        out(i, j) = in(i, j) + lx * (bl.x.flux - bc.x.flux + s1) +
                    ly * (bd.y.flux - bc.y.flux + s2);
        done = true;
      }
    } catch (const StationaryUnavailable&) {
    }
    if (!done) {
      const auto bl = detail::plain_block(m, P, g, in, i - 1, j, dt);
      const auto bd = detail::plain_block(m, P, g, in, i, j - 1, dt);
      const auto bc = detail::plain_block(m, P, g, in, i, j, dt);
      const auto s1 = assemble_source<Model>(P, bl.x, bc.x, dt);
      const auto s2 = assemble_source<Model>(P, bd.y, bc.y, dt);
      out(i, j) = in(i, j) + lx * (bl.x.flux - bc.x.flux + s1) +
                  ly * (bd.y.flux - bc.y.flux + s2);
    }
  });
}

// Per-direction indicator fields. x entries: interface ((f1-1)+1/2, j),
// f1 = 0..Nx, index f1 + j*(Nx+1); y entries: interface (i, (f2-1)+1/2),
// index f2 + i*(Ny+1).
struct IndicatorField2D {
  std::vector<std::vector<double>> psix, psiy;  // [p-2][...]
  std::vector<double> phix, phiy;
};

template <typename Model>
IndicatorField2D compute_indicators2d(const Model& m, int P, const Grid2D& g,
                                      const Field2D<typename Model::State>& u,
                                      const AdaptiveConfig& cfg) {
  using State = typename Model::State;
  IndicatorField2D out;
  const int nx = (g.Nx + 1) * g.Ny, ny = (g.Ny + 1) * g.Nx;
  const int pmax = std::max(P, 2);
  out.psix.assign(pmax - 1, std::vector<double>(nx, 1.0));
  out.psiy.assign(pmax - 1, std::vector<double>(ny, 1.0));
  out.phix.assign(nx, 1.0);
  out.phiy.assign(ny, 1.0);
  if (cfg.pin_indicators) return out;
  const detail::XSlice<Model> mx{m};
  const detail::YSlice<Model> my{m};
  const double epsx = cfg.eps >= 0.0 ? cfg.eps : g.dx() * g.dx();
  const double epsy = cfg.eps >= 0.0 ? cfg.eps : g.dy() * g.dy();
  parallel_for(0, nx, cfg.jobs, [&](int f) {
    const int f1 = f % (g.Nx + 1), j = f / (g.Nx + 1);
    const int c = f1 - 1;
    for (int p = 2; p <= pmax; ++p) {
      std::array<State, 2 * kMaxP> st;
      for (int l = 0; l < 2 * p; ++l) st[l] = u(c + l - p + 1, j);
      out.psix[p - 2][f] = smoothness_indicator<State>(
          tables_for(p).diff, std::span<const State>(st.data(), 2 * p), epsx);
    }
    const double lim = flux_limiter_phi(mx, u(c - 1, j), u(c, j), u(c + 1, j),
                                        u(c + 2, j), cfg.limiter);
    out.phix[f] = std::max(lim, out.psix[0][f]);
  });
  parallel_for(0, ny, cfg.jobs, [&](int f) {
    const int f2 = f % (g.Ny + 1), i = f / (g.Ny + 1);
    const int c = f2 - 1;
    for (int p = 2; p <= pmax; ++p) {
      std::array<State, 2 * kMaxP> st;
      for (int l = 0; l < 2 * p; ++l) st[l] = u(i, c + l - p + 1);
      out.psiy[p - 2][f] = smoothness_indicator<State>(
          tables_for(p).diff, std::span<const State>(st.data(), 2 * p), epsy);
    }
    const double lim = flux_limiter_phi(my, u(i, c - 1), u(i, c), u(i, c + 1),
                                        u(i, c + 2), cfg.limiter);
    out.phiy[f] = std::max(lim, out.psiy[0][f]);
  });
  return out;
}

// Order-adaptive 2D step; selection per node over the four adjacent
// interfaces, direction by direction indicators.
template <typename Model>
void acat2d_step(const Model& m, int P, const Grid2D& g,
                 const Field2D<typename Model::State>& in,
                 Field2D<typename Model::State>& out, double dt,
                 const AdaptiveConfig& cfg) {
  using State = typename Model::State;
  const double dx = g.dx(), dy = g.dy();
  const double lx = dt / dx, ly = dt / dy;
  const IndicatorField2D ind = compute_indicators2d(m, P, g, in, cfg);
  const detail::XSlice<Model> mx{m};
  const detail::YSlice<Model> my{m};

  const double epsx = cfg.eps >= 0.0 ? cfg.eps : dx * dx;
  const double epsy = cfg.eps >= 0.0 ? cfg.eps : dy * dy;
  parallel_for(0, g.Nx * g.Ny, cfg.jobs, [&](int f) {
    const int i = f % g.Nx, j = f / g.Nx;
    const int fx0 = i + j * (g.Nx + 1), fy0 = j + i * (g.Ny + 1);
    const int pmax = std::max(P, 2);

    decltype(m.stationary(in(i, j), g.x(i), g.y(j))) prof;
    if (cfg.wb) {
      try {
        prof = m.stationary(in(i, j), g.x(i), g.y(j));
        if (prof)
          for (int l = -pmax; l <= pmax; ++l)
            (void)(*prof)(g.x(i + l), g.y(j + l));
      } catch (const StationaryUnavailable&) {
        prof.reset();
      }
    }

    // per-direction indicators, on the profile fluctuation when available
    double psi_x[2][kMaxP - 1], psi_y[2][kMaxP - 1];
    double phi_x[2] = {ind.phix[fx0], ind.phix[fx0 + 1]};
    double phi_y[2] = {ind.phiy[fy0], ind.phiy[fy0 + 1]};
    for (int p = 2; p <= pmax; ++p) {
      psi_x[0][p - 2] = ind.psix[p - 2][fx0];
      psi_x[1][p - 2] = ind.psix[p - 2][fx0 + 1];
      psi_y[0][p - 2] = ind.psiy[p - 2][fy0];
      psi_y[1][p - 2] = ind.psiy[p - 2][fy0 + 1];
    }
    if (prof && !cfg.pin_indicators) {
      std::array<State, 2 * kMaxP + 1> wx, wy;
      for (int l = -pmax; l <= pmax; ++l) {
        wx[l + pmax] = in(i + l, j) - (*prof)(g.x(i + l), g.y(j));
        wy[l + pmax] = in(i, j + l) - (*prof)(g.x(i), g.y(j + l));
      }
      auto fill = [&](const std::array<State, 2 * kMaxP + 1>& w, double eps,
                      double psi[2][kMaxP - 1], double phi[2]) {
        for (int p = 2; p <= pmax; ++p) {
          std::array<State, 2 * kMaxP> st;
          for (int s = 0; s < 2; ++s) {
            for (int l = 0; l < 2 * p; ++l) st[l] = w[pmax - p + s + l];
            psi[s][p - 2] = smoothness_indicator<State>(
                tables_for(p).diff, std::span<const State>(st.data(), 2 * p),
                eps);
          }
        }
        for (int s = 0; s < 2; ++s) {
          double lm = 1.0;
          for (std::size_t c = 0; c < State::nvars; ++c)
            lm = std::min(
                lm, limiter_phi_scalar(cfg.limiter.kind, w[pmax - 2 + s][c],
                                       w[pmax - 1 + s][c], w[pmax + s][c],
                                       w[pmax + 1 + s][c]));
          phi[s] = std::max(lm, psi[s][0]);
        }
      };
      fill(wx, epsx, psi_x, phi_x);
      fill(wy, epsy, psi_y, phi_y);
    }

    int ps = 0;
    for (int p = 2; p <= P; ++p)
      if (psi_x[0][p - 2] >= cfg.threshold && psi_x[1][p - 2] >= cfg.threshold &&
          psi_y[0][p - 2] >= cfg.threshold && psi_y[1][p - 2] >= cfg.threshold)
        ps = p;
    if (cfg.pin_indicators) ps = P >= 2 ? P : 0;

    auto blocks = [&](int p) {
      if (prof)
        return std::array{detail::wb_block(m, p, g, in, i - 1, j, *prof, dt),
                          detail::wb_block(m, p, g, in, i, j - 1, *prof, dt),
                          detail::wb_block(m, p, g, in, i, j, *prof, dt)};
      return std::array{detail::plain_block(m, p, g, in, i - 1, j, dt),
                        detail::plain_block(m, p, g, in, i, j - 1, dt),
                        detail::plain_block(m, p, g, in, i, j, dt)};
    };

    if (ps >= 2) {
      const auto [bl, bd, bc] = blocks(ps);
      const auto s1 = assemble_source<Model>(ps, bl.x, bc.x, dt);
      const auto s2 = assemble_source<Model>(ps, bd.y, bc.y, dt);
      out(i, j) = in(i, j) + lx * (bl.x.flux - bc.x.flux + s1) +
                  ly * (bd.y.flux - bc.y.flux + s2);
      return;
    }

    const double phi = cfg.pin_indicators
                           ? 1.0
                           : std::min(std::min(phi_x[0], phi_x[1]),
                                      std::min(phi_y[0], phi_y[1]));
    const auto [bl, bd, bc] = blocks(1);
    const State s1 = assemble_source<Model>(1, bl.x, bc.x, dt);
    const State s2 = assemble_source<Model>(1, bd.y, bc.y, dt);
    const State fxm = lf_flux(mx, in(i - 1, j), in(i, j), dx, dt);
    const State fxp = lf_flux(mx, in(i, j), in(i + 1, j), dx, dt);
    const State fym = lf_flux(my, in(i, j - 1), in(i, j), dy, dt);
    const State fyp = lf_flux(my, in(i, j), in(i, j + 1), dy, dt);
    State s1lf, s2lf;
    if (prof) {
      auto px = [&](int l) { return (*prof)(g.x(i + l), g.y(j)); };
      auto py = [&](int l) { return (*prof)(g.x(i), g.y(j + l)); };
      s1lf = lf_flux(mx, px(0), px(1), dx, dt) -
             lf_flux(mx, px(-1), px(0), dx, dt);
      s2lf = lf_flux(my, py(0), py(1), dy, dt) -
             lf_flux(my, py(-1), py(0), dy, dt);
    } else {
      s1lf = lf_source(mx, in(i, j), m.Hx(g.x(i), g.y(j)), dx);
      s2lf = lf_source(my, in(i, j), m.Hy(g.x(i), g.y(j)), dy);
    }
    const State Fm = phi * bl.x.flux + (1.0 - phi) * fxm;
    const State Fp = phi * bc.x.flux + (1.0 - phi) * fxp;
    const State Gm = phi * bd.y.flux + (1.0 - phi) * fym;
    const State Gp = phi * bc.y.flux + (1.0 - phi) * fyp;
    const State S1 = phi * s1 + (1.0 - phi) * s1lf;
    const State S2 = phi * s2 + (1.0 - phi) * s2lf;
    out(i, j) =
        in(i, j) + lx * (Fm - Fp + S1) + ly * (Gm - Gp + S2);
  });
}

}  // namespace cat
