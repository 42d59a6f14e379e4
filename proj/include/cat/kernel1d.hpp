#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include "cat/stencil.hpp"
#include "cat/vecmath.hpp"

namespace cat {

struct DivergenceError : std::runtime_error {
  int stage;
  explicit DivergenceError(int k)
      : std::runtime_error("nonfinite value in Taylor stage " +
                           std::to_string(k)),
        stage(k) {}
};

// Differentiation and quadrature coefficients for one half width, cached
// process-wide. Thread-safe via static initialization.
struct SchemeTables {
  DiffTable diff;
  QuadTable quad;
  std::vector<double> recon;  // flux-form midpoint weights
  explicit SchemeTables(int P)
      : diff(P), quad(P), recon(reconstruction_weights(P)) {}
};

inline const SchemeTables& tables_for(int P) {
  static const SchemeTables t1(1), t2(2), t3(3);
  switch (P) {
    case 1:
      return t1;
    case 2:
      return t2;
    case 3:
      return t3;
  }
  throw std::invalid_argument("tables_for: unsupported half width");
}

// Result of the local space-time recursion at one interface: the high-order
// flux and the time-differentiated per-subinterval source integrals
// It[k][s], k = 0..2P-1, with s = 0..2P-2 indexing the subinterval
// [x_{j-1}, x_j], j = s - P + 2, of the stencil.
template <typename Phys>
struct InterfaceResult {
  typename Phys::State flux;
  std::array<std::array<typename Phys::State, 2 * kMaxP - 1>, 2 * kMaxP> It;
};

// One interface of the order-2P scheme. The stencil holds the 2P states at
// nodes j = -P+1..P around the interface (between local nodes P-1 and P),
// hx the matching H_x values. When fstar/sstar are non-null they hold
// F and S evaluated on a reference stationary profile at the stencil nodes;
// the recursion then runs on the differenced data F(U)-F*, S(U)-S*, which
// vanishes identically on stationary input.
template <typename Phys>
InterfaceResult<Phys> cat_interface(const Phys& phys, int P,
                                    std::span<const typename Phys::State> U,
                                    std::span<const double> hx,
                                    const typename Phys::State* fstar,
                                    const typename Phys::State* sstar,
                                    double dx, double dt) {
  using State = typename Phys::State;
  constexpr int M = 2 * kMaxP;
  const int w = 2 * P;       // stencil width
  const int ns = 2 * P - 1;  // subintervals
  const SchemeTables& tab = tables_for(P);

  auto check = [](const State& s, int k) {
    for (double v : s)
      if (!std::isfinite(v)) throw DivergenceError(k);
  };

  // Fk[j], itk[s], cum[j] hold the current order-k time-differentiated
  // quantities; stage[r][j] accumulates the Taylor expansions in time.
  std::array<State, M> Fk, cum, sh0;
  std::array<State, M - 1> itk;
  std::array<std::array<State, M>, M> stage;

  for (int l = 0; l < w; ++l) {
    Fk[l] = phys.flux(U[l]);
    State s = phys.source(U[l]);
    if (fstar) Fk[l] -= fstar[l];
    if (sstar) s -= sstar[l];
    sh0[l] = s * hx[l];
    check(Fk[l], 0);
    for (int r = 0; r < w; ++r) stage[r][l] = U[l];
  }
  for (int s = 0; s < ns; ++s) {
    const auto a = tab.quad.weights(s - P + 2);
    State acc{};
    for (int l = 0; l < w; ++l) acc += a[l] * sh0[l];
    itk[s] = dx * acc;
  }
  cum[0] = State{};
  for (int j = 1; j < w; ++j) cum[j] = cum[j - 1] + itk[j - 1];

  InterfaceResult<Phys> out;
  out.flux = State{};

  double dt_pow = 1.0;  // dt^{k-1}
  double kfact = 1.0;   // k!
  const auto& ghalf = tab.recon;
  {
    State f{};
    for (int l = 0; l < w; ++l) f += ghalf[l] * Fk[l];
    out.flux += f;  // k=1 term: dt^0/1!
    for (int s = 0; s < ns; ++s) out.It[0][s] = itk[s];
  }

  std::array<double, M> rpow;  // (r dt)^k / k!
  std::array<State, M> uk, Fnext, cumnext;
  std::array<State, M - 1> itnext;

  for (int k = 1; k <= 2 * P - 1; ++k) {
    // time derivative of U at each stencil node from the previous order
    for (int j = 0; j < w; ++j) {
      const auto g = tab.diff.deriv(1, j - P + 1);
      State acc{};
      for (int l = 0; l < w; ++l) acc += g[l] * (cum[l] - Fk[l]);
      uk[j] = (1.0 / dx) * acc;
    }
    // advance the stage states and evaluate flux/source on them
    for (int r = 0; r < w; ++r) {
      const double rdt = (r - P + 1) * dt;
      double c = 1.0;
      for (int m = 1; m <= k; ++m) c *= rdt / m;
      rpow[r] = c;
    }
    for (int j = 0; j < w; ++j) Fnext[j] = State{};
    for (int s = 0; s < ns; ++s) itnext[s] = State{};
    const auto gt = tab.diff.deriv(k, 0);  // time differentiation at r=0
    const double dtk = std::pow(dt, k);
    std::array<State, M> shr;
    for (int r = 0; r < w; ++r) {
      const double gw = gt[r] / dtk;
      for (int j = 0; j < w; ++j) {
        stage[r][j] += rpow[r] * uk[j];
        check(stage[r][j], k);
        State f = phys.flux(stage[r][j]);
        State s = phys.source(stage[r][j]);
        if (fstar) f -= fstar[j];
        if (sstar) s -= sstar[j];
        Fnext[j] += gw * f;
        shr[j] = s * hx[j];
      }
      for (int s = 0; s < ns; ++s) {
        const auto a = tab.quad.weights(s - P + 2);
        State acc{};
        for (int l = 0; l < w; ++l) acc += a[l] * shr[l];
        itnext[s] += (gw * dx) * acc;
      }
    }
    Fk = Fnext;
    itk = itnext;
    cum[0] = State{};
    for (int j = 1; j < w; ++j) cum[j] = cum[j - 1] + itk[j - 1];

    dt_pow *= dt;
    kfact *= (k + 1);
    State f{};
    for (int l = 0; l < w; ++l) f += ghalf[l] * Fk[l];
    out.flux += (dt_pow / kfact) * f;
    for (int s = 0; s < ns; ++s) out.It[k][s] = itk[s];
  }
  return out;
}

// Numerical source at node i spliced from the integrals of its two adjacent
// interface computations (left centered at i-1, right centered at i).
template <typename Phys>
typename Phys::State assemble_source(int P,
                                     const InterfaceResult<Phys>& left,
                                     const InterfaceResult<Phys>& right,
                                     double dt) {
  using State = typename Phys::State;
  const int w = 2 * P;
  const SchemeTables& tab = tables_for(P);
  const auto& ghalf = tab.recon;
  State out{};
  double dt_pow = 1.0, kfact = 1.0;
  for (int k = 1; k <= 2 * P; ++k) {
    kfact *= k;
    State acc{};
    for (int l = 0; l < w; ++l) {
      const State& v = (l < P) ? left.It[k - 1][l] : right.It[k - 1][l - 1];
      acc += ghalf[l] * v;
    }
    out += (dt_pow / kfact) * acc;
    dt_pow *= dt;
  }
  return out;
}

}  // namespace cat
