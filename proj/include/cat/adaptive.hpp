#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cat/grid.hpp"
#include "cat/kernel1d.hpp"
#include "cat/models.hpp"
#include "cat/parallel.hpp"
#include "cat/step1d.hpp"

namespace cat {

enum class LimiterKind { minmod, superbee, vanleer };
enum class LimiterStrategy { roe_speed, two_sided_min };

inline double limiter_value(LimiterKind kind, double r) {
  switch (kind) {
    case LimiterKind::minmod:
      return std::max(0.0, std::min(1.0, r));
    case LimiterKind::superbee:
      return std::max({0.0, std::min(2.0 * r, 1.0), std::min(r, 2.0)});
    case LimiterKind::vanleer:
      return (r + std::fabs(r)) / (1.0 + std::fabs(r));
  }
  return 0.0;
}

// psi^p on 2p scalar samples: near 1 on smooth data, near 0 at a jump.
inline double smoothness_indicator_scalar(const DiffTable& table,
                                          std::span<const double> samples,
                                          double eps) {
  const int p = table.p();
  double il = eps, ir = eps;
  // one-sided squared increments, central increment excluded
  for (int j = -p + 1; j <= -1; ++j) {
    const double d = samples[j + p] - samples[j + p - 1];
    il += d * d;
  }
  for (int j = 1; j <= p - 1; ++j) {
    const double d = samples[j + p] - samples[j + p - 1];
    ir += d * d;
  }
  const double I = il * ir / (il + ir);
  const double ud = undivided_difference(table, samples);
  return I / (I + ud * ud);
}

// Componentwise indicator combined by minimum.
template <typename State>
double smoothness_indicator(const DiffTable& table,
                            std::span<const State> samples, double eps) {
  const int w = 2 * table.p();
  double psi = 1.0;
  std::vector<double> comp(w);
  for (std::size_t c = 0; c < samples[0].size(); ++c) {
    for (int l = 0; l < w; ++l) comp[l] = samples[l][c];
    psi = std::min(psi, smoothness_indicator_scalar(table, comp, eps));
  }
  return psi;
}

struct LimiterConfig {
  LimiterKind kind = LimiterKind::minmod;
  LimiterStrategy strategy = LimiterStrategy::two_sided_min;
};

// phi^1 at the interface between the middle pair of a 4-node window,
// componentwise, combined by minimum.
template <typename Model>
double flux_limiter_phi(const Model& m,
                        const typename Model::State& um,  // i-1
                        const typename Model::State& u0,  // i
                        const typename Model::State& u1,  // i+1
                        const typename Model::State& u2,  // i+2
                        const LimiterConfig& cfg) {
  double phi = 1.0;
  const auto f0 = m.flux(u0);
  const auto f1 = m.flux(u1);
  for (std::size_t c = 0; c < u0.size(); ++c) {
    const double du = u1[c] - u0[c];
    const double scale =
        std::max({1.0, std::fabs(u0[c]), std::fabs(u1[c])});
    if (std::fabs(du) <= 1e-14 * scale) continue;  // locally flat: no limiting
    const double rm = (u0[c] - um[c]) / du;
    const double rp = (u2[c] - u1[c]) / du;
    double v;
    if (cfg.strategy == LimiterStrategy::two_sided_min) {
      v = std::min(limiter_value(cfg.kind, rm), limiter_value(cfg.kind, rp));
    } else {
      const double tol = 1e-12 * scale;
      double a;
      if (std::fabs(du) > tol) {
        a = (f1[c] - f0[c]) / du;
      } else {
        // directional derivative of the flux component at u0
        const double d = 1e-7 * scale;
        auto up = u0;
        up[c] += d;
        a = (m.flux(up)[c] - f0[c]) / d;
      }
      v = limiter_value(cfg.kind, a > 0.0 ? rm : rp);
    }
    phi = std::min(phi, v);
  }
  return phi;
}

template <typename Model>
typename Model::State lf_flux(const Model& m, const typename Model::State& ul,
                              const typename Model::State& ur, double dx,
                              double dt) {
  return 0.5 * (m.flux(ul) + m.flux(ur)) - (0.5 * dx / dt) * (ur - ul);
}

template <typename Model>
typename Model::State lf_source(const Model& m,
                                const typename Model::State& ui, double hx_i,
                                double dx) {
  return dx * hx_i * m.source(ui);
}

// Well-balanced first-order source: difference of Lax-Friedrichs fluxes
// evaluated on the node's stationary profile.
template <typename Model, typename Profile>
typename Model::State wb_lf_source(const Model& m, const Profile& prof,
                                   double xm, double x0, double xp, double dx,
                                   double dt) {
  const auto um = prof(xm), u0 = prof(x0), up = prof(xp);
  return lf_flux(m, u0, up, dx, dt) - lf_flux(m, um, u0, dx, dt);
}

struct AdaptiveConfig {
  bool wb = false;
  LimiterConfig limiter;
  double threshold = 0.9;
  double eps = -1.0;  // < 0: use dx^2
  bool pin_indicators = false;
  int jobs = 1;
};

// Per-interface indicator and limiter fields; entry f corresponds to the
// interface centered at node f-1 (i.e. interface (f-1)+1/2).
struct IndicatorField {
  int P = 1;
  std::vector<std::vector<double>> psi;  // psi[p-2][f], p = 2..P
  std::vector<double> phi;               // phi[f]
};

template <typename Model>
IndicatorField compute_indicators(const Model& m, int P, const Grid1D& g,
                                  const Field1D<typename Model::State>& u,
                                  const AdaptiveConfig& cfg) {
  using State = typename Model::State;
  IndicatorField out;
  out.P = P;
  const int nf = g.N + 1;
  // psi^2 is always computed: the blended path uses it to keep the limiter
  // from clipping smooth critical points (where increment ratios are wild
  // even though the data is perfectly regular)
  const int pmax = std::max(P, 2);
  out.psi.assign(pmax - 1, std::vector<double>(nf, 1.0));
  out.phi.assign(nf, 1.0);
  if (cfg.pin_indicators) return out;
  const double eps = cfg.eps >= 0.0 ? cfg.eps : g.dx() * g.dx();
  parallel_for(0, nf, cfg.jobs, [&](int f) {
    const int c = f - 1;  // interface centered at node c
    for (int p = 2; p <= pmax; ++p) {
      std::array<State, 2 * kMaxP> st;
      for (int l = 0; l < 2 * p; ++l) st[l] = u(c + l - p + 1);
      out.psi[p - 2][f] = smoothness_indicator<State>(
          tables_for(p).diff, std::span<const State>(st.data(), 2 * p), eps);
    }
    const double lim = flux_limiter_phi(m, u(c - 1), u(c), u(c + 1), u(c + 2),
                                        cfg.limiter);
    out.phi[f] = std::max(lim, out.psi[0][f]);
  });
  return out;
}

// Two-sided limiter value on already extracted scalar samples
// (w0..w3 bracketing the interface between w1 and w2).
inline double limiter_phi_scalar(LimiterKind kind, double w0, double w1,
                                 double w2, double w3) {
  const double du = w2 - w1;
  const double scale = std::max({1.0, std::fabs(w1), std::fabs(w2)});
  if (std::fabs(du) <= 1e-14 * scale) return 1.0;  // locally flat
  return std::min(limiter_value(kind, (w1 - w0) / du),
                  limiter_value(kind, (w3 - w2) / du));
}

// Order-adaptive step. Per node: the largest half width whose indicators
// clear the threshold on both adjacent interfaces is used; if none, a
// limiter-blended mix of the order-2 scheme and Lax-Friedrichs.
// For well-balanced runs the indicators are evaluated on the fluctuation
// about the node's stationary profile, not on the raw field: steep but
// steady gradients would otherwise disqualify the wide stencils even
// though the scheme handles them exactly.
template <typename Model>
void acat_step(const Model& m, int P, const Grid1D& g,
               const Field1D<typename Model::State>& in,
               Field1D<typename Model::State>& out, double dt,
               const AdaptiveConfig& cfg) {
  using State = typename Model::State;
  const int N = g.N;
  const double dx = g.dx();
  const double lam = dt / dx;
  const double eps = cfg.eps >= 0.0 ? cfg.eps : dx * dx;
  const IndicatorField ind = compute_indicators(m, P, g, in, cfg);

  parallel_for(0, N, cfg.jobs, [&](int i) {
    const int pmax = std::max(P, 2);

    decltype(m.stationary(in(i), g.x(i))) prof;
    if (cfg.wb) {
      try {
        prof = m.stationary(in(i), g.x(i));
        // probe the full stencil once so failures fall back cleanly
        if (prof)
          for (int l = -pmax; l <= pmax; ++l) (void)(*prof)(g.x(i + l));
      } catch (const StationaryUnavailable&) {
        prof.reset();
      }
    }

    // indicators at the two interfaces around node i
    double psi_l[kMaxP - 1], psi_r[kMaxP - 1], phi_l = ind.phi[i],
                             phi_r = ind.phi[i + 1];
    for (int p = 2; p <= pmax; ++p) {
      psi_l[p - 2] = ind.psi[p - 2][i];
      psi_r[p - 2] = ind.psi[p - 2][i + 1];
    }
    if (prof && !cfg.pin_indicators) {
      std::array<State, 2 * kMaxP + 1> w;  // fluctuation about the profile
      for (int l = -pmax; l <= pmax; ++l)
        w[l + pmax] = in(i + l) - (*prof)(g.x(i + l));
      for (int p = 2; p <= pmax; ++p) {
        std::array<State, 2 * kMaxP> st;
        for (int l = 0; l < 2 * p; ++l) st[l] = w[pmax - p + l];
        psi_l[p - 2] = smoothness_indicator<State>(
            tables_for(p).diff, std::span<const State>(st.data(), 2 * p), eps);
        for (int l = 0; l < 2 * p; ++l) st[l] = w[pmax - p + 1 + l];
        psi_r[p - 2] = smoothness_indicator<State>(
            tables_for(p).diff, std::span<const State>(st.data(), 2 * p), eps);
      }
      double ll = 1.0, lr = 1.0;
      for (std::size_t c = 0; c < State::nvars; ++c) {
        ll = std::min(ll, limiter_phi_scalar(cfg.limiter.kind, w[pmax - 2][c],
                                             w[pmax - 1][c], w[pmax][c],
                                             w[pmax + 1][c]));
        lr = std::min(lr, limiter_phi_scalar(cfg.limiter.kind, w[pmax - 1][c],
                                             w[pmax][c], w[pmax + 1][c],
                                             w[pmax + 2][c]));
      }
      phi_l = std::max(ll, psi_l[0]);
      phi_r = std::max(lr, psi_r[0]);
    }

    int ps = 0;  // selected half width; 0 means blended order-2 path
    for (int p = 2; p <= P; ++p)
      if (psi_l[p - 2] >= cfg.threshold && psi_r[p - 2] >= cfg.threshold)
        ps = p;
    if (cfg.pin_indicators) ps = P >= 2 ? P : 0;

    // order-2p node-centered update, interfaces centered at i-1 and i
    auto interfaces = [&](int p) {
      if (prof)
        return std::pair{detail::wb_interface(m, p, g, in, i - 1, *prof, dt),
                         detail::wb_interface(m, p, g, in, i, *prof, dt)};
      return std::pair{detail::plain_interface(m, p, g, in, i - 1, dt),
                       detail::plain_interface(m, p, g, in, i, dt)};
    };

    if (ps >= 2) {
      const auto [left, right] = interfaces(ps);
      const auto src = assemble_source<Model>(ps, left, right, dt);
      out(i) = in(i) + lam * (left.flux - right.flux + src);
      return;
    }

    // blended order-2 path
    const double phi = cfg.pin_indicators ? 1.0 : std::min(phi_l, phi_r);
    const auto [left, right] = interfaces(1);
    const State s1 = assemble_source<Model>(1, left, right, dt);
    const State flfl = lf_flux(m, in(i - 1), in(i), dx, dt);
    const State flfr = lf_flux(m, in(i), in(i + 1), dx, dt);
    State slf;
    if (prof)
      slf = wb_lf_source(m, *prof, g.x(i - 1), g.x(i), g.x(i + 1), dx, dt);
    else
      slf = lf_source(m, in(i), m.Hx(g.x(i)), dx);
    const State fl = phi * left.flux + (1.0 - phi) * flfl;
    const State fr = phi * right.flux + (1.0 - phi) * flfr;
    const State s = phi * s1 + (1.0 - phi) * slf;
    out(i) = in(i) + lam * (fl - fr + s);
  });
}

}  // namespace cat
