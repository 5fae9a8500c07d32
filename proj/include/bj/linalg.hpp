#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "bj/errors.hpp"

namespace bj::linalg {

/// Dense row-major matrix view helpers for the small systems this library
/// solves (n <= ~8). Everything copies; no aliasing concerns.

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Solve M * x = rhs for square M (row-major n x n) by LU with partial
/// pivoting. Throws numeric_failure on (near-)singular M.
inline std::vector<double> solve(std::vector<double> m, std::vector<double> rhs, int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  auto at = [&](int r, int c) -> double& { return m[static_cast<std::size_t>(r * n + c)]; };
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(at(r, col)) > std::abs(at(piv, col))) piv = r;
    if (std::abs(at(piv, col)) < 1e-14) throw numeric_failure("singular linear system");
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(at(piv, c), at(col, c));
      std::swap(rhs[static_cast<std::size_t>(piv)], rhs[static_cast<std::size_t>(col)]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = at(r, col) / at(col, col);
      at(r, col) = 0.0;
      for (int c = col + 1; c < n; ++c) at(r, c) -= f * at(col, c);
      rhs[static_cast<std::size_t>(r)] -= f * rhs[static_cast<std::size_t>(col)];
    }
  }
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int r = n - 1; r >= 0; --r) {
    double s = rhs[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < n; ++c) s -= at(r, c) * x[static_cast<std::size_t>(c)];
    x[static_cast<std::size_t>(r)] = s / at(r, r);
  }
  return x;
}

/// Numerical rank of a rows x cols row-major matrix by Gaussian elimination
/// with full pivoting; entries below rel_tol * max|entry| count as zero.
inline int rank(std::vector<double> m, int rows, int cols, double rel_tol = 1e-9) {
  double scale = 0.0;
  for (double v : m) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0;
  const double tol = rel_tol * scale;
  auto at = [&](int r, int c) -> double& { return m[static_cast<std::size_t>(r * cols + c)]; };
  int rk = 0;
  for (int col = 0; col < cols && rk < rows; ++col) {
    int piv = rk;
    for (int r = rk + 1; r < rows; ++r)
      if (std::abs(at(r, col)) > std::abs(at(piv, col))) piv = r;
    if (std::abs(at(piv, col)) <= tol) continue;
    if (piv != rk)
      for (int c = 0; c < cols; ++c) std::swap(at(piv, c), at(rk, c));
    for (int r = rk + 1; r < rows; ++r) {
      const double f = at(r, col) / at(rk, col);
      for (int c = col; c < cols; ++c) at(r, c) -= f * at(rk, c);
    }
    ++rk;
  }
  return rk;
}

/// Orthonormal-free nullspace basis of a rows x cols row-major matrix
/// (coefficients of free variables after row reduction). Basis vectors are
/// not normalized in any particular norm.
inline std::vector<std::vector<double>> nullspace(std::vector<double> m, int rows, int cols,
                                                  double rel_tol = 1e-12) {
  double scale = 0.0;
  for (double v : m) scale = std::max(scale, std::abs(v));
  const double tol = scale > 0.0 ? rel_tol * scale : 0.0;
  auto at = [&](int r, int c) -> double& { return m[static_cast<std::size_t>(r * cols + c)]; };
  std::vector<int> pivot_col;
  int rk = 0;
  for (int col = 0; col < cols && rk < rows; ++col) {
    int piv = rk;
    for (int r = rk + 1; r < rows; ++r)
      if (std::abs(at(r, col)) > std::abs(at(piv, col))) piv = r;
    if (std::abs(at(piv, col)) <= tol) continue;
    if (piv != rk)
      for (int c = 0; c < cols; ++c) std::swap(at(piv, c), at(rk, c));
    for (int r = 0; r < rows; ++r) {
      if (r == rk) continue;
      const double f = at(r, col) / at(rk, col);
      for (int c = col; c < cols; ++c) at(r, c) -= f * at(rk, c);
    }
    const double d = at(rk, col);
    for (int c = col; c < cols; ++c) at(rk, c) /= d;
    pivot_col.push_back(col);
    ++rk;
  }
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<std::vector<double>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    std::vector<double> v(static_cast<std::size_t>(cols), 0.0);
    v[static_cast<std::size_t>(free)] = 1.0;
    for (int r = 0; r < rk; ++r) v[static_cast<std::size_t>(pivot_col[static_cast<std::size_t>(r)])] = -at(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Eigenvalues of a symmetric matrix by the cyclic Jacobi method; accurate to
/// machine precision for any spectrum, including repeated eigenvalues.
inline std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
  auto at = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r * n + c)]; };
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return std::vector<double>(static_cast<std::size_t>(n), 0.0);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(at(p, q)));
    if (off <= 1e-15 * scale) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (std::abs(apq) <= 1e-18 * scale) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> eig(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = at(i, i);
  return eig;
}

/// Characteristic polynomial coefficients of a square matrix by the
/// Faddeev-LeVerrier recurrence: p(x) = x^n + c[0] x^(n-1) + ... + c[n-1].
inline std::vector<double> char_poly(const std::vector<double>& a, int n) {
  std::vector<double> M(static_cast<std::size_t>(n * n), 0.0);  // running matrix
  std::vector<double> c(static_cast<std::size_t>(n), 0.0);
  std::vector<double> AM(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) M[static_cast<std::size_t>(i * n + i)] = 1.0;
  for (int k = 1; k <= n; ++k) {
    // AM = A * M
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += a[static_cast<std::size_t>(i * n + l)] * M[static_cast<std::size_t>(l * n + j)];
        AM[static_cast<std::size_t>(i * n + j)] = s;
      }
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += AM[static_cast<std::size_t>(i * n + i)];
    const double ck = -tr / k;
    c[static_cast<std::size_t>(k - 1)] = ck;
    M = AM;
    for (int i = 0; i < n; ++i) M[static_cast<std::size_t>(i * n + i)] += ck;
  }
  return c;
}

/// All eigenvalues of a real square matrix via Durand-Kerner iteration on the
/// characteristic polynomial. Adequate for the n <= 8 matrices used here.
inline std::vector<std::complex<double>> eigenvalues(const std::vector<double>& a, int n) {
  const auto c = char_poly(a, n);
  auto eval = [&](std::complex<double> x) {
    std::complex<double> v(1.0, 0.0);
    for (int k = 0; k < n; ++k) v = v * x + c[static_cast<std::size_t>(k)];
    return v;
  };
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(n));
  const std::complex<double> seed(0.4, 0.9);
  std::complex<double> acc(1.0, 0.0);
  for (auto& r : roots) {
    acc *= seed;
    r = acc;
  }
  for (int iter = 0; iter < 500; ++iter) {
    double shift = 0.0;
    for (int i = 0; i < n; ++i) {
      std::complex<double> denom(1.0, 0.0);
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= roots[static_cast<std::size_t>(i)] - roots[static_cast<std::size_t>(j)];
      if (std::abs(denom) < 1e-300) continue;
      const auto delta = eval(roots[static_cast<std::size_t>(i)]) / denom;
      roots[static_cast<std::size_t>(i)] -= delta;
      shift = std::max(shift, std::abs(delta));
    }
    if (shift < 1e-14) break;
  }
  return roots;
}

}  // namespace bj::linalg
