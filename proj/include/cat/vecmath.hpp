#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace cat {

// Small fixed-size state vector with componentwise arithmetic.
template <std::size_t N>
struct Vec : std::array<double, N> {
  static constexpr std::size_t nvars = N;
  constexpr Vec() : std::array<double, N>{} {}
  constexpr Vec(const std::array<double, N>& a) : std::array<double, N>(a) {}
  template <typename... Ts>
    requires(sizeof...(Ts) == N)
  constexpr Vec(Ts... vs) : std::array<double, N>{static_cast<double>(vs)...} {}

  Vec& operator+=(const Vec& o) {
    for (std::size_t i = 0; i < N; ++i) (*this)[i] += o[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (std::size_t i = 0; i < N; ++i) (*this)[i] -= o[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (std::size_t i = 0; i < N; ++i) (*this)[i] *= s;
    return *this;
  }
};

template <std::size_t N>
Vec<N> operator+(Vec<N> a, const Vec<N>& b) {
  return a += b;
}
template <std::size_t N>
Vec<N> operator-(Vec<N> a, const Vec<N>& b) {
  return a -= b;
}
template <std::size_t N>
Vec<N> operator*(double s, Vec<N> a) {
  return a *= s;
}
template <std::size_t N>
Vec<N> operator*(Vec<N> a, double s) {
  return a *= s;
}
template <std::size_t N>
Vec<N> operator-(const Vec<N>& a) {
  Vec<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = -a[i];
  return r;
}

template <std::size_t N>
double max_abs(const Vec<N>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace cat
