#pragma once

// Lowest eigenpairs of the symmetric-definite tridiagonal pencil A x = t B x
// (B positive definite). Eigenvalues are isolated by Sturm/inertia bisection
// on the LDL^T of A - t B, then eigenvectors are refined by inverse iteration
// with B-orthogonal deflation inside clusters.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sphectra {

/// Symmetric tridiagonal matrix: diag has size m, off has size m-1.
struct Tridiag {
  std::vector<double> diag, off;
  int size() const { return static_cast<int>(diag.size()); }
};

struct TridiagPair {
  double value = 0.0;
  std::vector<double> vector;
  double residual = 0.0;
};

namespace detail {

// Number of pencil eigenvalues below t (inertia of A - t B).
inline int count_below(const Tridiag& A, const Tridiag& B, double t) {
  const int m = A.size();
  int neg = 0;
  double d = A.diag[0] - t * B.diag[0];
  if (d == 0.0) d = -1e-300;
  if (d < 0.0) ++neg;
  for (int i = 1; i < m; ++i) {
    const double e = A.off[i - 1] - t * B.off[i - 1];
    double di = A.diag[i] - t * B.diag[i] - e * e / d;
    if (di == 0.0) di = -1e-300;
    if (di < 0.0) ++neg;
    d = di;
  }
  return neg;
}

// Solves (A - t B) x = rhs by tridiagonal LU with partial pivoting; stable
// at shifts very close to an eigenvalue.
inline void shifted_solve(const Tridiag& A, const Tridiag& B, double t,
                          std::vector<double>& x) {
  const int m = A.size();
  std::vector<double> dl(m, 0.0), dd(m, 0.0), du(m, 0.0), du2(m, 0.0);
  std::vector<int> piv(m, 0);
  for (int i = 0; i < m; ++i) dd[i] = A.diag[i] - t * B.diag[i];
  for (int i = 0; i + 1 < m; ++i) {
    du[i] = A.off[i] - t * B.off[i];
    dl[i] = du[i];
  }
  // LU factorization (dgttrf-style)
  for (int i = 0; i + 1 < m; ++i) {
    if (std::abs(dd[i]) >= std::abs(dl[i])) {
      piv[i] = 0;
      if (dd[i] == 0.0) dd[i] = 1e-300;
      const double f = dl[i] / dd[i];
      dd[i + 1] -= f * du[i];
      dl[i] = f;
      du2[i] = 0.0;
    } else {
      piv[i] = 1;
      const double f = dd[i] / dl[i];
      dd[i] = dl[i];
      dl[i] = f;
      const double tmp = du[i];
      du[i] = dd[i + 1];
      dd[i + 1] = tmp - f * dd[i + 1];
      du2[i] = (i + 2 < m) ? du[i + 1] : 0.0;
      if (i + 2 < m) du[i + 1] = -f * du[i + 1];
    }
  }
  if (dd[m - 1] == 0.0) dd[m - 1] = 1e-300;
  // forward substitution with pivots
  for (int i = 0; i + 1 < m; ++i) {
    if (piv[i] == 0) {
      x[i + 1] -= dl[i] * x[i];
    } else {
      const double tmp = x[i];
      x[i] = x[i + 1];
      x[i + 1] = tmp - dl[i] * x[i];
    }
  }
  // back substitution
  x[m - 1] /= dd[m - 1];
  if (m >= 2) x[m - 2] = (x[m - 2] - du[m - 2] * x[m - 1]) / dd[m - 2];
  for (int i = m - 3; i >= 0; --i)
    x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dd[i];
}

inline void b_multiply(const Tridiag& B, const std::vector<double>& x,
                       std::vector<double>& y) {
  const int m = B.size();
  for (int i = 0; i < m; ++i) {
    double s = B.diag[i] * x[i];
    if (i > 0) s += B.off[i - 1] * x[i - 1];
    if (i + 1 < m) s += B.off[i] * x[i + 1];
    y[i] = s;
  }
}

inline double b_inner(const Tridiag& B, const std::vector<double>& x,
                      const std::vector<double>& y) {
  const int m = B.size();
  double s = 0.0;
  for (int i = 0; i < m; ++i) {
    double bx = B.diag[i] * x[i];
    if (i > 0) bx += B.off[i - 1] * x[i - 1];
    if (i + 1 < m) bx += B.off[i] * x[i + 1];
    s += bx * y[i];
  }
  return s;
}

}  // namespace detail

/// The k lowest eigenpairs, values accurate to ~1e-13 relative from the
/// bisection, vectors from inverse iteration at the converged shift.
inline std::vector<TridiagPair> lowest_pairs(const Tridiag& A, const Tridiag& B,
                                             int k) {
  const int m = A.size();
  if (B.size() != m || k < 1 || k > m)
    throw std::invalid_argument("lowest_pairs: inconsistent sizes");

  // Upper bound by doubling; A may be PSD so start slightly below zero.
  double lo0 = -1.0, hi0 = 1.0;
  while (detail::count_below(A, B, lo0) > 0) lo0 *= 2.0;
  while (detail::count_below(A, B, hi0) < k) hi0 *= 2.0;

  std::vector<TridiagPair> out(k);
  std::vector<std::vector<double>> found;
  for (int j = 0; j < k; ++j) {
    double lo = lo0, hi = hi0;
    for (int it = 0; it < 120 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi));
         ++it) {
      const double mid = 0.5 * (lo + hi);
      (detail::count_below(A, B, mid) <= j ? lo : hi) = mid;
    }
    const double val = 0.5 * (lo + hi);

    // inverse iteration at a shift nudged off the eigenvalue
    const double shift = val - 1e-8 * std::max(1.0, std::abs(val));
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i) x[i] = 1.0 / std::sqrt(m + i + 1.0);
    std::vector<double> bx(m);
    for (int sweep = 0; sweep < 4; ++sweep) {
      // deflate against converged vectors of the same cluster
      for (const auto& prev : found) {
        const double c = detail::b_inner(B, prev, x);
        for (int i = 0; i < m; ++i) x[i] -= c * prev[i];
      }
      detail::b_multiply(B, x, bx);
      x = bx;
      detail::shifted_solve(A, B, shift, x);
      const double nrm = std::sqrt(detail::b_inner(B, x, x));
      for (int i = 0; i < m; ++i) x[i] /= nrm;
    }
    for (const auto& prev : found) {
      const double c = detail::b_inner(B, prev, x);
      for (int i = 0; i < m; ++i) x[i] -= c * prev[i];
    }
    const double nrm = std::sqrt(detail::b_inner(B, x, x));
    for (int i = 0; i < m; ++i) x[i] /= nrm;

    // residual |A x - val B x| / |B x|
    double rnum = 0.0, rden = 0.0;
    for (int i = 0; i < m; ++i) {
      double ax = A.diag[i] * x[i];
      if (i > 0) ax += A.off[i - 1] * x[i - 1];
      if (i + 1 < m) ax += A.off[i] * x[i + 1];
      double bxi = B.diag[i] * x[i];
      if (i > 0) bxi += B.off[i - 1] * x[i - 1];
      if (i + 1 < m) bxi += B.off[i] * x[i + 1];
      const double r = ax - val * bxi;
      rnum += r * r;
      rden += bxi * bxi;
    }

    out[j].value = val;
    out[j].vector = x;
    out[j].residual = std::sqrt(rnum / std::max(rden, 1e-300));
    found.push_back(out[j].vector);
  }
  return out;
}

}  // namespace sphectra
