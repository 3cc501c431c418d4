#pragma once

// Scalar-generic kernels shared by the double-precision library and the
// extended-precision cross-checks.  Real only needs the arithmetic operators,
// abs() found by ADL or std::, and construction from int.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dnls/lattice.hpp"

namespace dnls::detail {

template <class Real>
Real left_of(std::span<const Real> v, std::size_t i, Boundary bc) {
  if (i > 0) return v[i - 1];
  return bc == Boundary::Periodic ? v[v.size() - 1] : Real(0);
}

template <class Real>
Real right_of(std::span<const Real> v, std::size_t i, Boundary bc) {
  if (i + 1 < v.size()) return v[i + 1];
  return bc == Boundary::Periodic ? v[0] : Real(0);
}

template <class Real>
Real abs_of(const Real& x) {
  using std::abs;
  return abs(x);
}

// r_i = -psi_{i-1} + 2 psi_i - psi_{i+1} - c psi_i^3 - E psi_i
template <class Real>
void residual_into(std::span<const Real> psi, Boundary bc, const Real& c, const Real& E,
                   std::span<Real> out) {
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const Real& x = psi[i];
    out[i] = -left_of(psi, i, bc) + 2 * x - right_of(psi, i, bc) - c * x * x * x - E * x;
  }
}

// Diagonal of the linearised operator T at psi: 2 - E - 3 c psi_i^2.  The
// off-diagonal couplings are the implicit -1 neighbour links.
template <class Real>
std::vector<Real> linearised_diagonal(std::span<const Real> psi, const Real& c, const Real& E) {
  std::vector<Real> d(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) d[i] = 2 - E - 3 * c * psi[i] * psi[i];
  return d;
}

// out = T x where (T x)_i = d_i x_i - x_left - x_right.
template <class Real>
void apply_operator(std::span<const Real> diag, std::span<const Real> x, Boundary bc,
                    std::span<Real> out) {
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = diag[i] * x[i] - left_of(x, i, bc) - right_of(x, i, bc);
}

template <class Real>
using DenseMatrix = std::vector<std::vector<Real>>;

// Dense form of T.  Small periodic rings fold coincident neighbours onto the
// same entry (N = 2 gives -2 off the diagonal, N = 1 gives -2 on it).
template <class Real>
DenseMatrix<Real> assemble_dense(std::span<const Real> diag, Boundary bc) {
  const std::size_t n = diag.size();
  DenseMatrix<Real> a(n, std::vector<Real>(n, Real(0)));
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] += diag[i];
    if (i > 0)
      a[i][i - 1] -= 1;
    else if (bc == Boundary::Periodic)
      a[i][n - 1] -= 1;
    if (i + 1 < n)
      a[i][i + 1] -= 1;
    else if (bc == Boundary::Periodic)
      a[i][0] -= 1;
  }
  return a;
}

template <class Real>
struct DenseSolve {
  std::vector<Real> x;
  Real min_pivot;
  bool ok;
};

// Gaussian elimination with partial pivoting.  Stops with ok = false as soon
// as a pivot falls to pivot_floor or below.
template <class Real>
DenseSolve<Real> dense_solve(DenseMatrix<Real> a, std::vector<Real> b, const Real& pivot_floor) {
  const std::size_t n = b.size();
  Real min_pivot = n ? abs_of(a[0][0]) : Real(0);
  bool first = true;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (abs_of(a[r][k]) > abs_of(a[best][k])) best = r;
    std::swap(a[k], a[best]);
    std::swap(b[k], b[best]);
    const Real pivot = abs_of(a[k][k]);
    if (first || pivot < min_pivot) min_pivot = pivot;
    first = false;
    if (pivot <= pivot_floor) return {{}, min_pivot, false};
    for (std::size_t r = k + 1; r < n; ++r) {
      const Real f = a[r][k] / a[k][k];
      if (f == Real(0)) continue;
      for (std::size_t col = k; col < n; ++col) a[r][col] -= f * a[k][col];
      b[r] -= f * b[k];
    }
  }
  std::vector<Real> x(n, Real(0));
  for (std::size_t k = n; k-- > 0;) {
    Real s = b[k];
    for (std::size_t col = k + 1; col < n; ++col) s -= a[k][col] * x[col];
    x[k] = s / a[k][k];
  }
  return {std::move(x), min_pivot, true};
}

// Thomas elimination for the open tridiagonal system with unit negative
// couplings.  Returns nullopt on a pivot at or below pivot_floor.
template <class Real>
std::optional<std::vector<Real>> thomas_solve(std::span<const Real> diag, std::span<const Real> rhs,
                                              const Real& pivot_floor) {
  const std::size_t n = diag.size();
  std::vector<Real> cp(n), rp(n), x(n);
  Real m = diag[0];
  if (abs_of(m) <= pivot_floor) return std::nullopt;
  cp[0] = Real(-1) / m;
  rp[0] = rhs[0] / m;
  for (std::size_t i = 1; i < n; ++i) {
    m = diag[i] + cp[i - 1];
    if (abs_of(m) <= pivot_floor) return std::nullopt;
    cp[i] = Real(-1) / m;
    rp[i] = (rhs[i] + rp[i - 1]) / m;
  }
  x[n - 1] = rp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = rp[i] - cp[i] * x[i + 1];
  return x;
}

// Periodic tridiagonal system (corner couplings -1), N >= 3.  Rank-one
// Sherman-Morrison correction over two open solves.
template <class Real>
std::optional<std::vector<Real>> cyclic_solve(std::span<const Real> diag, std::span<const Real> rhs,
                                              const Real& pivot_floor) {
  const std::size_t n = diag.size();
  const Real d0 = diag[0];
  if (abs_of(d0) <= pivot_floor) return std::nullopt;
  // T = B + u v^T with u = (gamma, 0.., alpha), v = (1, 0.., beta/gamma),
  // alpha = beta = -1, gamma = -d0.
  const Real gamma = -d0;
  std::vector<Real> b(diag.begin(), diag.end());
  b[0] = d0 - gamma;
  b[n - 1] = diag[n - 1] - Real(1) / gamma;
  std::vector<Real> u(n, Real(0));
  u[0] = gamma;
  u[n - 1] = Real(-1);
  auto y = thomas_solve<Real>(b, rhs, pivot_floor);
  if (!y) return std::nullopt;
  auto z = thomas_solve<Real>(b, u, pivot_floor);
  if (!z) return std::nullopt;
  const Real beta_over_gamma = Real(-1) / gamma;
  const Real denom = 1 + (*z)[0] + beta_over_gamma * (*z)[n - 1];
  if (abs_of(denom) <= Real(1) / Real(100000000)) return std::nullopt;
  const Real factor = ((*y)[0] + beta_over_gamma * (*y)[n - 1]) / denom;
  for (std::size_t i = 0; i < n; ++i) (*y)[i] -= factor * (*z)[i];
  return y;
}

// O(N) path: Thomas for open chains, cyclic correction for periodic rings of
// three or more sites.  nullopt means the caller should fall back to dense.
template <class Real>
std::optional<std::vector<Real>> banded_solve(std::span<const Real> diag, std::span<const Real> rhs,
                                              Boundary bc, const Real& pivot_floor) {
  const std::size_t n = diag.size();
  if (n == 0) return std::vector<Real>{};
  if (bc == Boundary::Open) return thomas_solve<Real>(diag, rhs, pivot_floor);
  if (n < 3) return std::nullopt;
  return cyclic_solve<Real>(diag, rhs, pivot_floor);
}

}  // namespace dnls::detail
