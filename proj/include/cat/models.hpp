#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "cat/vecmath.hpp"

namespace cat {

// Raised when a local stationary profile cannot be built; callers fall back
// to the non-well-balanced path.
struct StationaryUnavailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Input sits on the critical regime boundary; no root can be selected.
struct AmbiguousRegime : StationaryUnavailable {
  using StationaryUnavailable::StationaryUnavailable;
};
struct PositivityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// C^5 ramp: 0 for x<0, 1 for x>1, eleventh-degree interpolant between.
inline double smooth_transition_profile(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // p(x) = x^6 sum_{k=0}^{5} (-1)^k C(5+k,k) (x-1)^k
  static const double binom[6] = {1, 6, 21, 56, 126, 252};
  double s = 0.0, pw = 1.0;
  for (int k = 0; k <= 5; ++k) {
    s += (k % 2 ? -binom[k] : binom[k]) * pw;
    pw *= (x - 1.0);
  }
  const double x2 = x * x;
  return x2 * x2 * x2 * s;
}

// u_t + u_x = u, i.e. flux u and source u with H(x) = x.
struct LinearModel {
  static constexpr int n = 1;
  using State = Vec<1>;

  State flux(const State& u) const { return u; }
  State source(const State& u) const { return u; }
  double H(double x) const { return x; }
  double Hx(double) const { return 1.0; }
  double max_speed(const State&) const { return 1.0; }

  struct Profile {
    double c;  // u*(x) = c e^x
    State operator()(double x) const { return State{c * std::exp(x)}; }
  };
  std::optional<Profile> stationary(const State& u0, double x0) const {
    return Profile{u0[0] * std::exp(-x0)};
  }

  static double exact(double x, double t, double (*u0)(double)) {
    return u0(x - t) * std::exp(t);
  }
};

// u_t + (u^2/2)_x = u^2 H_x with H(x) = x + amp*sin(freq*x).
struct BurgersModel {
  static constexpr int n = 1;
  using State = Vec<1>;

  double amp = 0.1;
  double freq = 10.0;

  State flux(const State& u) const { return State{0.5 * u[0] * u[0]}; }
  State source(const State& u) const { return State{u[0] * u[0]}; }
  double H(double x) const { return x + amp * std::sin(freq * x); }
  double Hx(double x) const { return 1.0 + amp * freq * std::cos(freq * x); }
  double max_speed(const State& u) const { return std::fabs(u[0]); }

  struct Profile {
    const BurgersModel* m;
    double c;  // u*(x) = c e^{H(x)}
    State operator()(double x) const { return State{c * std::exp(m->H(x))}; }
  };
  std::optional<Profile> stationary(const State& u0, double x0) const {
    return Profile{this, u0[0] * std::exp(-H(x0))};
  }
};

// Shallow water with bathymetry H(x):
//   h_t + q_x = 0
//   q_t + (q^2/h + g h^2/2)_x = g h H_x
struct ShallowWaterModel {
  static constexpr int n = 2;
  using State = Vec<2>;  // (h, q)

  double g = 9.81;
  bool flat = false;       // H == 0 everywhere
  double dry_tol = 1e-12;  // |h| below this is treated as a dry state

  double H(double x) const {
    if (flat || x < -0.2 || x > 0.2) return 0.0;
    return -0.25 * (1.0 + std::cos(5.0 * M_PI * x));
  }
  double Hx(double x) const {
    if (flat || x < -0.2 || x > 0.2) return 0.0;
    return 0.25 * 5.0 * M_PI * std::sin(5.0 * M_PI * x);
  }

  double velocity(const State& U) const {
    if (U[0] <= dry_tol) {
      // dry fronts undershoot at truncation level; only a substantial
      // negative thickness indicates a blown-up run
      if (U[0] < -1e-2)
        throw PositivityError("shallow water: negative thickness h=" +
                              std::to_string(U[0]));
      return 0.0;
    }
    // desingularized q/h: nearly-dry cells carry roundoff-level q that
    // would otherwise blow up the wave speed (and collapse dt)
    const double h = U[0], eps = 1e-6;
    if (h > eps) return U[1] / h;
    return U[1] * h / (h * h + eps * eps);
  }

  State flux(const State& U) const {
    const double u = velocity(U);
    return State{U[1], U[1] * u + 0.5 * g * U[0] * U[0]};
  }
  State source(const State& U) const { return State{0.0, g * U[0]}; }
  double max_speed(const State& U) const {
    const double u = velocity(U);
    return std::fabs(u) + std::sqrt(g * std::max(U[0], 0.0));
  }
  double froude(const State& U) const {
    const double u = velocity(U);
    return std::fabs(u) / std::sqrt(g * U[0]);
  }

  // Root of h^3 - b h^2 + d = 0 on the side of h_c = (q^2/g)^{1/3} selected
  // by the flow regime. Bisection on a guaranteed bracket, then Newton.
  static double cubic_root(double b, double d, double h_c, bool subcritical) {
    auto P = [&](double h) { return ((h - b) * h) * h + d; };
    const double Pc = P(h_c);
    if (Pc > 0.0)
      throw StationaryUnavailable(
          "shallow water: stationary cubic has no positive root");
    double lo = subcritical ? h_c : 0.0;
    double hi = subcritical ? b : h_c;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double v = P(mid);
      // P decreases through the supercritical root and increases through
      // the subcritical one.
      const bool left_of_root = subcritical ? (v < 0.0) : (v > 0.0);
      (left_of_root ? lo : hi) = mid;
    }
    double h = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
      const double dp = (3.0 * h - 2.0 * b) * h;
      if (dp == 0.0) break;
      const double step = P(h) / dp;
      const double hn = h - step;
      if (hn > lo - (hi - lo) && hn < hi + (hi - lo)) h = hn;
    }
    return h;
  }

  // Thickness of the stationary profile with Bernoulli constant C and
  // discharge q at a point with bathymetry value Hx_val.
  double stationary_h(double C, double q, double H_val, bool subcritical) const {
    const double b = C / g + H_val;
    const double d = 0.5 * q * q / g;
    const double h_c = std::cbrt(q * q / g);
    return cubic_root(b, d, h_c, subcritical);
  }

  struct Profile {
    const ShallowWaterModel* m;
    double q, C, h0, H0;
    bool subcritical;
    bool lake_at_rest;  // q == 0: h* = h0 + H - H0 in closed form
    State operator()(double x) const {
      const double Hv = m->H(x);
      if (lake_at_rest) {
        const double h = h0 + Hv - H0;
        if (h < -m->dry_tol)
          throw StationaryUnavailable(
              "shallow water: lake-at-rest profile runs dry");
        return State{std::max(h, 0.0), 0.0};
      }
      if (Hv == H0) return State{h0, q};
      return State{m->stationary_h(C, q, Hv, subcritical), q};
    }
  };

  std::optional<Profile> stationary(const State& U0, double x0) const {
    const double h0 = U0[0], q0 = U0[1];
    if (h0 < -dry_tol) return std::nullopt;  // dry-front undershoot
    const double H0 = H(x0);
    if (std::fabs(q0) <= dry_tol)
      return Profile{this, 0.0, 0.0, std::max(h0, 0.0), H0, true, true};
    if (h0 <= dry_tol) return std::nullopt;  // moving water with no depth
    const double Fr = froude(U0);
    if (std::fabs(Fr - 1.0) < 1e-8)
      throw AmbiguousRegime("shallow water: critical anchor state, Fr=" +
                            std::to_string(Fr));
    const double C = 0.5 * q0 * q0 / (h0 * h0) + g * h0 - g * H0;
    return Profile{this, q0, C, h0, H0, Fr < 1.0, false};
  }
};

// 2D compressible Euler with a gravitational potential H(x,y):
// state (rho, rho u, rho v, E), p = (gamma-1)(E - rho(u^2+v^2)/2).
struct EulerModel2D {
  static constexpr int n = 4;
  using State = Vec<4>;

  enum class Potential { linear, well_a, well_b };

  double gamma = 1.4;
  Potential pot = Potential::linear;

  double H(double x, double y) const {
    switch (pot) {
      case Potential::linear:
        return x + y;
      case Potential::well_a: {
        const double dx = x - 1.0 / 3.0, dy = y + 0.5;
        return 1.0 / std::sqrt(dx * dx + dy * dy);
      }
      case Potential::well_b: {
        const double dx = x - 0.4, dy = y + 0.1;
        return 1.0 / std::sqrt(dx * dx + dy * dy);
      }
    }
    return 0.0;
  }
  double Hx(double x, double y) const {
    switch (pot) {
      case Potential::linear:
        return 1.0;
      case Potential::well_a: {
        const double dx = x - 1.0 / 3.0, dy = y + 0.5;
        const double r2 = dx * dx + dy * dy;
        return -dx / (r2 * std::sqrt(r2));
      }
      case Potential::well_b: {
        const double dx = x - 0.4, dy = y + 0.1;
        const double r2 = dx * dx + dy * dy;
        return -dx / (r2 * std::sqrt(r2));
      }
    }
    return 0.0;
  }
  double Hy(double x, double y) const {
    switch (pot) {
      case Potential::linear:
        return 1.0;
      case Potential::well_a: {
        const double dx = x - 1.0 / 3.0, dy = y + 0.5;
        const double r2 = dx * dx + dy * dy;
        return -dy / (r2 * std::sqrt(r2));
      }
      case Potential::well_b: {
        const double dx = x - 0.4, dy = y + 0.1;
        const double r2 = dx * dx + dy * dy;
        return -dy / (r2 * std::sqrt(r2));
      }
    }
    return 0.0;
  }

  double pressure(const State& U) const {
    if (U[0] <= 0.0)
      throw PositivityError("euler: nonpositive density rho=" +
                            std::to_string(U[0]));
    const double p =
        (gamma - 1.0) * (U[3] - 0.5 * (U[1] * U[1] + U[2] * U[2]) / U[0]);
    if (p <= 0.0)
      throw PositivityError("euler: nonpositive pressure p=" +
                            std::to_string(p));
    return p;
  }

  State flux_x(const State& U) const {
    const double p = pressure(U);
    const double u = U[1] / U[0];
    return State{U[1], U[1] * u + p, U[2] * u, u * (U[3] + p)};
  }
  State flux_y(const State& U) const {
    const double p = pressure(U);
    const double v = U[2] / U[0];
    return State{U[2], U[1] * v, U[2] * v + p, v * (U[3] + p)};
  }
  State source_x(const State& U) const {
    return State{0.0, -U[0], 0.0, -U[1]};
  }
  State source_y(const State& U) const {
    return State{0.0, 0.0, -U[0], -U[2]};
  }
  double sound_speed(const State& U) const {
    return std::sqrt(gamma * pressure(U) / U[0]);
  }
  double max_speed_x(const State& U) const {
    return std::fabs(U[1] / U[0]) + sound_speed(U);
  }
  double max_speed_y(const State& U) const {
    return std::fabs(U[2] / U[0]) + sound_speed(U);
  }

  // Isothermal hydrostatic family member matching the nodal density:
  // rho* = p* = rho_anchor e^{-(H - H_anchor)}, zero velocity.
  struct Profile {
    const EulerModel2D* m;
    double rho0, H0;
    State operator()(double x, double y) const {
      const double r = rho0 * std::exp(-(m->H(x, y) - H0));
      return State{r, 0.0, 0.0, r / (m->gamma - 1.0)};
    }
  };
  std::optional<Profile> stationary(const State& U0, double x0,
                                    double y0) const {
    if (U0[0] <= 0.0) return std::nullopt;
    return Profile{this, U0[0], H(x0, y0)};
  }

  State from_primitive(double rho, double u, double v, double p) const {
    return State{rho, rho * u, rho * v,
                 p / (gamma - 1.0) + 0.5 * rho * (u * u + v * v)};
  }
};

}  // namespace cat
