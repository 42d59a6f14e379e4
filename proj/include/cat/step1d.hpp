#pragma once

#include <vector>

#include "cat/grid.hpp"
#include "cat/kernel1d.hpp"
#include "cat/models.hpp"
#include "cat/parallel.hpp"

namespace cat {

namespace detail {

// Plain interface computation centered at node c (interface c+1/2).
template <typename Model>
InterfaceResult<Model> plain_interface(const Model& m, int P,
                                       const Grid1D& g,
                                       const Field1D<typename Model::State>& u,
                                       int c, double dt) {
  using State = typename Model::State;
  std::array<State, 2 * kMaxP> st;
  std::array<double, 2 * kMaxP> hx;
  for (int l = 0; l < 2 * P; ++l) {
    const int idx = c + l - P + 1;
    st[l] = u(idx);
    hx[l] = m.Hx(g.x(idx));
  }
  return cat_interface(m, P, std::span<const State>(st.data(), 2 * P),
                       std::span<const double>(hx.data(), 2 * P), nullptr,
                       nullptr, g.dx(), dt);
}

// Interface centered at node c on the data differenced against a stationary
// profile. fstar/sstar must span nodes c-P+1..c+P.
template <typename Model, typename Profile>
InterfaceResult<Model> wb_interface(const Model& m, int P, const Grid1D& g,
                                    const Field1D<typename Model::State>& u,
                                    int c, const Profile& prof, double dt) {
  using State = typename Model::State;
  std::array<State, 2 * kMaxP> st, fstar, sstar;
  std::array<double, 2 * kMaxP> hx;
  for (int l = 0; l < 2 * P; ++l) {
    const int idx = c + l - P + 1;
    const double x = g.x(idx);
    st[l] = u(idx);
    hx[l] = m.Hx(x);
    const State ref = prof(x);
    fstar[l] = m.flux(ref);
    sstar[l] = m.source(ref);
  }
  return cat_interface(m, P, std::span<const State>(st.data(), 2 * P),
                       std::span<const double>(hx.data(), 2 * P), fstar.data(),
                       sstar.data(), g.dx(), dt);
}

}  // namespace detail

// Order-2P update: U_i += dt/dx (F_{i-1/2} - F_{i+1/2} + S_i). Interfaces
// are shared between neighboring nodes.
template <typename Model>
void cat_step(const Model& m, int P, const Grid1D& g,
              const Field1D<typename Model::State>& in,
              Field1D<typename Model::State>& out, double dt, int jobs = 1) {
  const int N = g.N;
  std::vector<InterfaceResult<Model>> faces(N + 1);
  try {
    parallel_for(0, N + 1, jobs, [&](int f) {
      // faces[f] is the interface centered at node f-1
      faces[f] = detail::plain_interface(m, P, g, in, f - 1, dt);
    });
  } catch (DivergenceError&) {
    throw;
  }
  const double lam = dt / g.dx();
  parallel_for(0, N, jobs, [&](int i) {
    const auto src = assemble_source<Model>(P, faces[i], faces[i + 1], dt);
    out(i) = in(i) + lam * (faces[i].flux - faces[i + 1].flux + src);
  });
}

// Well-balanced order-2P update: each node subtracts its own local
// stationary profile in both adjacent interface computations. Nodes without
// a usable profile fall back to the plain scheme.
template <typename Model>
void wb_step(const Model& m, int P, const Grid1D& g,
             const Field1D<typename Model::State>& in,
             Field1D<typename Model::State>& out, double dt, int jobs = 1) {
  const int N = g.N;
  const double lam = dt / g.dx();
  parallel_for(0, N, jobs, [&](int i) {
    bool done = false;
    try {
      auto prof = m.stationary(in(i), g.x(i));
      if (prof) {
        const auto left = detail::wb_interface(m, P, g, in, i - 1, *prof, dt);
        const auto right = detail::wb_interface(m, P, g, in, i, *prof, dt);
        const auto src = assemble_source<Model>(P, left, right, dt);
        out(i) = in(i) + lam * (left.flux - right.flux + src);
        done = true;
      }
    } catch (const StationaryUnavailable&) {
    }
    if (!done) {
      const auto left = detail::plain_interface(m, P, g, in, i - 1, dt);
      const auto right = detail::plain_interface(m, P, g, in, i, dt);
      const auto src = assemble_source<Model>(P, left, right, dt);
      out(i) = in(i) + lam * (left.flux - right.flux + src);
    }
  });
}

}  // namespace cat
