#pragma once

#include <span>
#include <vector>

namespace cat {

// Hard cap on the half stencil width used anywhere in the library.
inline constexpr int kMaxP = 3;

// Coefficients gamma^{k,q}_{p,j} of the interpolatory differentiation formula
//   f^(k)(x_i + q*dx) ~ (1/dx^k) sum_j gamma^{k,q}_{p,j} f(x_{i+j}),
// on the 2p-point unit-spaced stencil j = -p+1..p. Exact for polynomials of
// degree <= 2p-1. q ranges over the node offsets -p+1..p and 1/2.
//
// Returns 2p weights for nodes j = -p+1..p.
std::vector<double> fornberg_weights(int p, int k, double q);

// Weights a^{j}_{P,l} of the interpolatory quadrature formula
//   integral_{j-1}^{j} f ~ sum_l a^{j}_{P,l} f(l),   l = -P+1..P,
// on the unit-spaced reference stencil, exact for degree <= 2P-1.
// Valid subinterval indices: j = -P+2..P.
std::vector<double> quadrature_weights(int P, int j);

// Flux-form midpoint weights w_j, j = -P+1..P. Defined so that the
// difference w_j - w_{j+1} telescopes to the (2P+1)-point centered
// first-derivative formula: a flux built with these weights yields an
// order-2P conservative difference. Plain midpoint interpolation only does
// this for P = 1 (where both sets of weights are [1/2, 1/2]).
std::vector<double> reconstruction_weights(int P);

// Differentiation coefficients for one half width p, precomputed for every
// derivative order k = 0..2p-1 and every offset q in {-p+1..p, 1/2}.
// Immutable after construction.
class DiffTable {
 public:
  explicit DiffTable(int p);

  int p() const { return p_; }

  // gamma^{k,j} with j a node offset in [-p+1, p].
  std::span<const double> deriv(int k, int j_offset) const;

  // gamma^{k,1/2}.
  std::span<const double> deriv_half(int k) const;

 private:
  int p_;
  // node_[k][j_offset + p - 1], half_[k]
  std::vector<std::vector<std::vector<double>>> node_;
  std::vector<std::vector<double>> half_;
};

// Quadrature weights for one half width P, all subintervals j = -P+2..P.
class QuadTable {
 public:
  explicit QuadTable(int P);

  int p() const { return p_; }

  // a^{j}_{P,*} with j in [-P+2, P].
  std::span<const double> weights(int j) const;

 private:
  int p_;
  std::vector<std::vector<double>> w_;
};

// (1/dx^k) sum_j gamma_j * samples_j. Throws on length mismatch.
double apply_formula(std::span<const double> coeffs,
                     std::span<const double> samples, double dx);

// Order-(2P-1) undivided difference of 2P unit-spaced samples; annihilates
// polynomials of degree <= 2P-2 and maps xi^(2P-1) to (2P-1)!.
double undivided_difference(const DiffTable& table,
                            std::span<const double> samples);

}  // namespace cat
