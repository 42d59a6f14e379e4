#pragma once

#include <array>
#include <cmath>

#include "cat/kernel1d.hpp"

namespace cat {

// Local space-time block centered at (x_{c1}+dx/2, y_{c2}+dy/2): the x-flux
// at interface (c1+1/2, c2), the y-flux at (c1, c2+1/2), and the
// time-differentiated line integrals needed to splice the two directional
// sources. Each half is shaped like a 1D interface result so the 1D source
// assembly can be reused: x.It are the x-subinterval integrals along the row
// j2 = 0, y.It the y-subinterval integrals along the column j1 = 0.
template <typename Phys>
struct BlockResult {
  InterfaceResult<Phys> x;
  InterfaceResult<Phys> y;
};

// One (2P)x(2P) block of the 2D order-2P scheme. Arrays are row-major over
// the offsets j = (j1, j2), j1, j2 = -P+1..P: index l2 * 2P + l1 with
// l = j + P - 1. The starred arrays, when non-null, hold fluxes and sources
// evaluated on a reference stationary profile; the recursion then runs on
// differenced data exactly as in the 1D kernel.
template <typename Phys>
BlockResult<Phys> cat_block(const Phys& phys, int P,
                            const typename Phys::State* U, const double* hx,
                            const double* hy,
                            const typename Phys::State* fxstar,
                            const typename Phys::State* gystar,
                            const typename Phys::State* sxstar,
                            const typename Phys::State* systar, double dx,
                            double dy, double dt) {
  using State = typename Phys::State;
  constexpr int M = 2 * kMaxP;
  const int w = 2 * P;
  const int ns = 2 * P - 1;
  const int nn = w * w;
  const SchemeTables& tab = tables_for(P);

  auto check = [](const State& s, int k) {
    for (double v : s)
      if (!std::isfinite(v)) throw DivergenceError(k);
  };

  std::array<State, M * M> Fk, Gk;       // time-differentiated fluxes
  std::array<State, M * M> cumx, cumy;   // cumulative line integrals
  std::array<std::array<State, M - 1>, M> ix, iy;  // per-row / per-column
  std::array<std::array<State, M * M>, M> stage;

  auto sub_integrals = [&](auto&& vals, std::array<State, M - 1>& out) {
    for (int s = 0; s < ns; ++s) {
      const auto a = tab.quad.weights(s - P + 2);
      State acc{};
      for (int q = 0; q < w; ++q) acc += a[q] * vals(q);
      out[s] = acc;
    }
  };
  auto cum_rows = [&](const std::array<std::array<State, M - 1>, M>& it,
                      std::array<State, M * M>& cum, bool rows) {
    for (int t = 0; t < w; ++t) {
      State acc{};
      for (int j = 0; j < w; ++j) {
        if (rows)
          cum[t * w + j] = acc;  // row t, position j1 = j
        else
          cum[j * w + t] = acc;  // column t, position j2 = j
        if (j + 1 < w) acc += it[t][j];
      }
    }
  };

  std::array<State, M * M> sxh, syh;
  for (int l2 = 0; l2 < w; ++l2)
    for (int l1 = 0; l1 < w; ++l1) {
      const int l = l2 * w + l1;
      Fk[l] = phys.flux_x(U[l]);
      Gk[l] = phys.flux_y(U[l]);
      State sx = phys.source_x(U[l]);
      State sy = phys.source_y(U[l]);
      if (fxstar) Fk[l] -= fxstar[l];
      if (gystar) Gk[l] -= gystar[l];
      if (sxstar) sx -= sxstar[l];
      if (systar) sy -= systar[l];
      sxh[l] = sx * hx[l];
      syh[l] = sy * hy[l];
      check(Fk[l], 0);
      check(Gk[l], 0);
      for (int r = 0; r < w; ++r) stage[r][l] = U[l];
    }
  for (int t = 0; t < w; ++t) {
    sub_integrals([&](int q) { return dx * sxh[t * w + q]; }, ix[t]);
    sub_integrals([&](int q) { return dy * syh[q * w + t]; }, iy[t]);
  }
  cum_rows(ix, cumx, true);
  cum_rows(iy, cumy, false);

  BlockResult<Phys> out;
  out.x.flux = State{};
  out.y.flux = State{};

  const auto& ghalf = tab.recon;
  const int mid = P - 1;  // local index of offset 0
  auto accumulate = [&](double coef) {
    State fx{}, gy{};
    for (int l = 0; l < w; ++l) {
      fx += ghalf[l] * Fk[mid * w + l];
      gy += ghalf[l] * Gk[l * w + mid];
    }
    out.x.flux += coef * fx;
    out.y.flux += coef * gy;
  };
  accumulate(1.0);
  for (int s = 0; s < ns; ++s) {
    out.x.It[0][s] = ix[mid][s];
    out.y.It[0][s] = iy[mid][s];
  }

  std::array<double, M> rpow;
  std::array<State, M * M> uk, Fnext, Gnext, sxr, syr;
  std::array<std::array<State, M - 1>, M> ixnext, iynext;

  double dt_pow = 1.0, kfact = 1.0;
  for (int k = 1; k <= 2 * P - 1; ++k) {
    // stage time derivative couples both directions
    for (int l2 = 0; l2 < w; ++l2)
      for (int l1 = 0; l1 < w; ++l1) {
        const auto g1 = tab.diff.deriv(1, l1 - P + 1);
        const auto g2 = tab.diff.deriv(1, l2 - P + 1);
        State acc{};
        for (int l = 0; l < w; ++l) {
          acc += (g1[l] / dx) * (cumx[l2 * w + l] - Fk[l2 * w + l]);
          acc += (g2[l] / dy) * (cumy[l * w + l1] - Gk[l * w + l1]);
        }
        uk[l2 * w + l1] = acc;
      }
    for (int r = 0; r < w; ++r) {
      const double rdt = (r - P + 1) * dt;
      double c = 1.0;
      for (int m = 1; m <= k; ++m) c *= rdt / m;
      rpow[r] = c;
    }
    for (int l = 0; l < nn; ++l) {
      Fnext[l] = State{};
      Gnext[l] = State{};
    }
    for (int t = 0; t < w; ++t)
      for (int s = 0; s < ns; ++s) {
        ixnext[t][s] = State{};
        iynext[t][s] = State{};
      }
    const auto gt = tab.diff.deriv(k, 0);
    const double dtk = std::pow(dt, k);
    for (int r = 0; r < w; ++r) {
      const double gw = gt[r] / dtk;
      for (int l = 0; l < nn; ++l) {
        stage[r][l] += rpow[r] * uk[l];
        check(stage[r][l], k);
        State f = phys.flux_x(stage[r][l]);
        State g = phys.flux_y(stage[r][l]);
        State sx = phys.source_x(stage[r][l]);
        State sy = phys.source_y(stage[r][l]);
        if (fxstar) f -= fxstar[l];
        if (gystar) g -= gystar[l];
        if (sxstar) sx -= sxstar[l];
        if (systar) sy -= systar[l];
        Fnext[l] += gw * f;
        Gnext[l] += gw * g;
        sxr[l] = sx * hx[l];
        syr[l] = sy * hy[l];
      }
      for (int t = 0; t < w; ++t) {
        std::array<State, M - 1> tmp;
        sub_integrals([&](int q) { return (gw * dx) * sxr[t * w + q]; }, tmp);
        for (int s = 0; s < ns; ++s) ixnext[t][s] += tmp[s];
        sub_integrals([&](int q) { return (gw * dy) * syr[q * w + t]; }, tmp);
        for (int s = 0; s < ns; ++s) iynext[t][s] += tmp[s];
      }
    }
    Fk = Fnext;
    Gk = Gnext;
    ix = ixnext;
    iy = iynext;
    cum_rows(ix, cumx, true);
    cum_rows(iy, cumy, false);

    dt_pow *= dt;
    kfact *= (k + 1);
    accumulate(dt_pow / kfact);
    for (int s = 0; s < ns; ++s) {
      out.x.It[k][s] = ix[mid][s];
      out.y.It[k][s] = iy[mid][s];
    }
  }
  return out;
}

}  // namespace cat
