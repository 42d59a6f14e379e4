#include "cat/stencil.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cat {

namespace {

// Fornberg's recursion for the weights of derivatives 0..m at point x0 on an
// arbitrary grid. Done in long double; the stencils here are tiny so this is
// accurate well below the 1e-13 exactness tolerances.
std::vector<std::vector<long double>> fornberg(long double x0,
                                               std::span<const long double> xs,
                                               int m) {
  const int n = static_cast<int>(xs.size());
  std::vector<std::vector<std::vector<long double>>> d(
      m + 1, std::vector<std::vector<long double>>(
                 n, std::vector<long double>(n, 0.0L)));
  d[0][0][0] = 1.0L;
  long double c1 = 1.0L;
  for (int i = 1; i < n; ++i) {
    long double c2 = 1.0L;
    for (int v = 0; v < i; ++v) {
      const long double c3 = xs[i] - xs[v];
      c2 *= c3;
      for (int k = 0; k <= std::min(i, m); ++k) {
        d[k][i][v] = ((xs[i] - x0) * d[k][i - 1][v] -
                      (k > 0 ? k * d[k - 1][i - 1][v] : 0.0L)) /
                     c3;
      }
    }
    for (int k = 0; k <= std::min(i, m); ++k) {
      d[k][i][i] = c1 / c2 *
                   ((k > 0 ? k * d[k - 1][i - 1][i - 1] : 0.0L) -
                    (xs[i - 1] - x0) * d[k][i - 1][i - 1]);
    }
    c1 = c2;
  }
  std::vector<std::vector<long double>> out(m + 1,
                                            std::vector<long double>(n));
  for (int k = 0; k <= m; ++k)
    for (int j = 0; j < n; ++j) out[k][j] = d[k][n - 1][j];
  return out;
}

std::vector<long double> stencil_nodes(int p) {
  std::vector<long double> xs(2 * p);
  for (int l = 0; l < 2 * p; ++l) xs[l] = static_cast<long double>(l - p + 1);
  return xs;
}

}  // namespace

std::vector<double> fornberg_weights(int p, int k, double q) {
  if (p < 1 || p > kMaxP)
    throw std::invalid_argument("fornberg_weights: p out of range");
  if (k < 0 || k > 2 * p - 1)
    throw std::invalid_argument("fornberg_weights: derivative order " +
                                std::to_string(k) + " invalid for p=" +
                                std::to_string(p));
  const auto xs = stencil_nodes(p);
  const auto all = fornberg(static_cast<long double>(q), xs, k);
  std::vector<double> w(2 * p);
  for (int j = 0; j < 2 * p; ++j) w[j] = static_cast<double>(all[k][j]);
  return w;
}

std::vector<double> quadrature_weights(int P, int j) {
  if (P < 1 || P > kMaxP)
    throw std::invalid_argument("quadrature_weights: P out of range");
  if (j < -P + 2 || j > P)
    throw std::invalid_argument("quadrature_weights: subinterval index " +
                                std::to_string(j) + " outside [-P+2, P]");
  const int n = 2 * P;
  // Solve the dual Vandermonde system: sum_l a_l xi_l^m = moment_m,
  // moment_m = (j^{m+1} - (j-1)^{m+1}) / (m+1), m = 0..2P-1.
  std::vector<std::vector<long double>> a(n, std::vector<long double>(n + 1));
  for (int m = 0; m < n; ++m) {
    for (int l = 0; l < n; ++l)
      a[m][l] = std::pow(static_cast<long double>(l - P + 1),
                         static_cast<long double>(m));
    a[m][n] = (std::pow(static_cast<long double>(j), m + 1) -
               std::pow(static_cast<long double>(j - 1), m + 1)) /
              (m + 1);
  }
  // Gaussian elimination with partial pivoting.
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const long double f = a[r][c] / a[c][c];
      for (int cc = c; cc <= n; ++cc) a[r][cc] -= f * a[c][cc];
    }
  }
  std::vector<double> w(n);
  for (int l = 0; l < n; ++l) w[l] = static_cast<double>(a[l][n] / a[l][l]);
  return w;
}

std::vector<double> reconstruction_weights(int P) {
  if (P < 1 || P > kMaxP)
    throw std::invalid_argument("reconstruction_weights: P out of range");
  // Central first-derivative weights on the 2P+1 nodes -P..P, then partial
  // sums from the right so that w_j - w_{j+1} telescopes back to them.
  std::vector<long double> xs(2 * P + 1);
  for (int l = 0; l <= 2 * P; ++l) xs[l] = static_cast<long double>(l - P);
  const auto d1 = fornberg(0.0L, xs, 1)[1];
  std::vector<double> w(2 * P);
  long double acc = 0.0L;
  for (int j = P; j >= -P + 1; --j) {
    acc += d1[j + P];
    w[j + P - 1] = static_cast<double>(acc);
  }
  return w;
}

DiffTable::DiffTable(int p) : p_(p) {
  if (p < 1 || p > kMaxP) throw std::invalid_argument("DiffTable: bad p");
  const auto xs = stencil_nodes(p);
  node_.resize(2 * p);
  half_.resize(2 * p);
  for (int k = 0; k < 2 * p; ++k) {
    node_[k].resize(2 * p);
    for (int j = -p + 1; j <= p; ++j) {
      const auto all = fornberg(static_cast<long double>(j), xs, k);
      auto& dst = node_[k][j + p - 1];
      dst.resize(2 * p);
      for (int l = 0; l < 2 * p; ++l) dst[l] = static_cast<double>(all[k][l]);
    }
    const auto all = fornberg(0.5L, xs, k);
    half_[k].resize(2 * p);
    for (int l = 0; l < 2 * p; ++l) half_[k][l] = static_cast<double>(all[k][l]);
  }
}

std::span<const double> DiffTable::deriv(int k, int j_offset) const {
  if (k < 0 || k >= 2 * p_)
    throw std::invalid_argument("DiffTable::deriv: bad order");
  if (j_offset < -p_ + 1 || j_offset > p_)
    throw std::invalid_argument("DiffTable::deriv: bad offset");
  return node_[k][j_offset + p_ - 1];
}

std::span<const double> DiffTable::deriv_half(int k) const {
  if (k < 0 || k >= 2 * p_)
    throw std::invalid_argument("DiffTable::deriv_half: bad order");
  return half_[k];
}

QuadTable::QuadTable(int P) : p_(P) {
  w_.resize(2 * P - 1);
  for (int j = -P + 2; j <= P; ++j) w_[j + P - 2] = quadrature_weights(P, j);
}

std::span<const double> QuadTable::weights(int j) const {
  if (j < -p_ + 2 || j > p_)
    throw std::invalid_argument("QuadTable::weights: bad subinterval");
  return w_[j + p_ - 2];
}

double apply_formula(std::span<const double> coeffs,
                     std::span<const double> samples, double dx) {
  if (coeffs.size() != samples.size())
    throw std::invalid_argument("apply_formula: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * samples[i];
  return s / dx;
}

double undivided_difference(const DiffTable& table,
                            std::span<const double> samples) {
  const auto g = table.deriv_half(2 * table.p() - 1);
  if (g.size() != samples.size())
    throw std::invalid_argument("undivided_difference: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g[i] * samples[i];
  return s;
}

}  // namespace cat
