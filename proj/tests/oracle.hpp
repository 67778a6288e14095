#pragma once

// Test-only reference computations. Nothing here calls into the library's
// eigensolvers or Hamiltonian builders.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix zeros(std::size_t n) { return Matrix(n, std::vector<double>(n, 0.0)); }

struct Spectrum {
  std::vector<double> values;                // ascending
  std::vector<std::vector<double>> vectors;  // vectors[m] is eigenvector m
};

// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
inline Spectrum jacobi(Matrix a) {
  const std::size_t n = a.size();
  Matrix v = zeros(n);
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, total = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) {
        total += a[p][q] * a[p][q];
        if (p != q) off += a[p][q] * a[p][q];
      }
    if (off <= 1e-30 * total || off == 0.0) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return a[x][x] < a[y][y]; });
  Spectrum out;
  for (auto m : order) {
    out.values.push_back(a[m][m]);
    std::vector<double> col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = v[k][m];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

// det(M - x I) by Gaussian elimination with partial pivoting.
inline double char_poly(Matrix m, double x) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) m[i][i] -= x;
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

// Smallest root of the characteristic polynomial: below the Gershgorin bound
// the sign is (-1)^0 * (+) for det(M - xI) with x -> -inf when n is even...
// so locate it by scanning from the lower Gershgorin bound for the first
// sign change, then bisect.
inline double smallest_root(const Matrix& m) {
  const std::size_t n = m.size();
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) r += std::abs(m[i][j]);
    lo = std::min(lo, m[i][i] - r);
    hi = std::max(hi, m[i][i] + r);
  }
  lo -= 1.0;
  const int steps = 20000;
  const double h = (hi - lo + 2.0) / steps;
  double a = lo, fa = char_poly(m, a);
  for (int s = 1; s <= steps; ++s) {
    double b = lo + s * h;
    const double fb = char_poly(m, b);
    if (fb == 0.0) return b;
    if ((fa < 0) != (fb < 0)) {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = char_poly(m, mid);
        if ((fa < 0) == (fm < 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
    a = b;
    fa = fb;
  }
  return lo;
}

// Homogeneous Tavis-Cummings interaction energy at zero detuning.
inline double u_closed_form(int big_n) {
  return 2.0 * std::sqrt(static_cast<double>(big_n)) - std::sqrt(4.0 * big_n - 2.0);
}

// Manifold n block built from the Dicke ladder, energies relative to n w_ex.
inline Matrix manifold(int big_n, double delta, int n) {
  const int dim = std::min(n, big_n) + 1;
  Matrix m = zeros(dim);
  for (int k = 0; k < dim; ++k) {
    m[k][k] = (n - k) * delta;
    if (k + 1 < dim)
      m[k][k + 1] = m[k + 1][k] =
          std::sqrt(static_cast<double>(n - k)) * std::sqrt(static_cast<double>(big_n - k) * (k + 1));
  }
  return m;
}

// Landau boundary from the full psi = 0 spectrum on a product basis
// (photons <= n_max, any excitation number), in units of g.
inline double landau_boundary(int big_n, double delta, int z, double mu, int n_max) {
  const int ne = big_n + 1;
  const int dim = (n_max + 1) * ne;
  auto idx = [&](int p, int e) { return p * ne + e; };
  Matrix h = zeros(dim);
  for (int p = 0; p <= n_max; ++p)
    for (int e = 0; e <= big_n; ++e) {
      h[idx(p, e)][idx(p, e)] = p * delta - mu * (p + e);
      if (e > 0 && p + 1 <= n_max) {
        const double amp = std::sqrt(p + 1.0) * std::sqrt(static_cast<double>(big_n - e + 1) * e);
        h[idx(p, e)][idx(p + 1, e - 1)] = h[idx(p + 1, e - 1)][idx(p, e)] = amp;
      }
    }
  const auto sp = jacobi(h);
  const auto& g = sp.vectors[0];
  double chi = 0.0;
  for (std::size_t m = 1; m < sp.values.size(); ++m) {
    // <m| a + a^dag |g>
    double amp = 0.0;
    for (int p = 0; p <= n_max; ++p)
      for (int e = 0; e <= big_n; ++e) {
        const double gv = g[idx(p, e)];
        if (gv == 0.0) continue;
        if (p + 1 <= n_max) amp += sp.vectors[m][idx(p + 1, e)] * std::sqrt(p + 1.0) * gv;
        if (p >= 1) amp += sp.vectors[m][idx(p - 1, e)] * std::sqrt(static_cast<double>(p)) * gv;
      }
    const double gap = sp.values[m] - sp.values[0];
    if (gap > 1e-12) chi += amp * amp / gap;
  }
  return 1.0 / (z * chi);
}

}  // namespace oracle
