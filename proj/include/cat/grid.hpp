#pragma once

#include <stdexcept>
#include <vector>

namespace cat {

// Node-based 1D mesh: N nodes spanning [a, b] inclusive, dx = (b-a)/(N-1).
struct Grid1D {
  double a = 0.0, b = 1.0;
  int N = 2;
  double dx() const { return (b - a) / (N - 1); }
  double x(int i) const { return a + i * dx(); }
};

struct Grid2D {
  double ax = 0.0, bx = 1.0, ay = 0.0, by = 1.0;
  int Nx = 2, Ny = 2;
  double dx() const { return (bx - ax) / (Nx - 1); }
  double dy() const { return (by - ay) / (Ny - 1); }
  double x(int i) const { return ax + i * dx(); }
  double y(int j) const { return ay + j * dy(); }
};

// Nodal field with ghost nodes on both sides; index -g..N+g-1.
template <typename State>
class Field1D {
 public:
  Field1D() = default;
  Field1D(int n, int ghost) : n_(n), g_(ghost), data_(n + 2 * ghost) {}

  int n() const { return n_; }
  int ghost() const { return g_; }
  State& operator()(int i) { return data_[i + g_]; }
  const State& operator()(int i) const { return data_[i + g_]; }

 private:
  int n_ = 0, g_ = 0;
  std::vector<State> data_;
};

// Row-major 2D nodal field with a ghost frame.
template <typename State>
class Field2D {
 public:
  Field2D() = default;
  Field2D(int nx, int ny, int ghost)
      : nx_(nx), ny_(ny), g_(ghost), data_((nx + 2 * ghost) * (ny + 2 * ghost)) {}

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int ghost() const { return g_; }
  State& operator()(int i, int j) {
    return data_[(j + g_) * (nx_ + 2 * g_) + (i + g_)];
  }
  const State& operator()(int i, int j) const {
    return data_[(j + g_) * (nx_ + 2 * g_) + (i + g_)];
  }

 private:
  int nx_ = 0, ny_ = 0, g_ = 0;
  std::vector<State> data_;
};

}  // namespace cat
