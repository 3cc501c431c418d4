#include "dnls/precise.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "dnls/detail/kernels.hpp"
#include "dnls/error.hpp"
#include "dnls/map.hpp"

namespace dnls {

namespace {

namespace mp = boost::multiprecision;

template <unsigned Digits>
using Float = mp::number<mp::cpp_bin_float<Digits>, mp::et_off>;

template <class Real>
Real max_abs_of(const std::vector<Real>& v) {
  Real m = 0;
  for (const auto& x : v) m = std::max(m, Real(abs(x)));
  return m;
}

template <class Real>
ShootingCheck run(const LatticeWave& w, const ModelParams& p, int digits) {
  const std::size_t n = w.size();
  const Real c = p.c;
  const Real E = p.E;
  std::vector<Real> psi(w.values().begin(), w.values().end());
  std::vector<Real> r(n);

  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real scale = 1 + abs(E) + 3 * abs(c);
  const Real target = eps * scale * 1000;

  ShootingCheck out;
  out.digits = digits;
  for (int it = 0; it < 60; ++it) {
    detail::residual_into<Real>(psi, w.bc(), c, E, r);
    if (max_abs_of(r) <= target) break;
    const auto diag = detail::linearised_diagonal<Real>(psi, c, E);
    std::vector<Real> F(n);
    for (std::size_t i = 0; i < n; ++i) F[i] = -r[i];
    const Real tiny = eps * 16;
    auto x = detail::banded_solve<Real>(diag, F, w.bc(), tiny);
    if (!x) {
      auto res = detail::dense_solve<Real>(detail::assemble_dense<Real>(diag, w.bc()), F, tiny);
      if (!res.ok) throw NearDegenerate("singular operator while polishing", static_cast<double>(res.min_pivot));
      x = std::move(res.x);
    }
    for (std::size_t i = 0; i < n; ++i) psi[i] += (*x)[i];
    ++out.newton_iterations;
  }
  detail::residual_into<Real>(psi, w.bc(), c, E, r);
  out.polished_residual = static_cast<double>(max_abs_of(r));

  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i) shift = std::max(shift, std::abs(static_cast<double>(psi[i]) - w[i]));
  out.polish_shift = shift;

  // Map iteration from (psi_0 - psi_{-1}, psi_0).
  const Real left = w.bc() == Boundary::Periodic ? psi[n - 1] : Real(0);
  Real Z = psi[0] - left;
  Real y = psi[0];
  double err = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    Z = Z - E * y - c * y * y * y;
    y = y + Z;
    const double d = std::abs(static_cast<double>(y) - w[i]);
    err = std::isfinite(d) ? std::max(err, d) : HUGE_VAL;
  }
  out.shot_error = err;
  return out;
}

}  // namespace

double shooting_growth(const LatticeWave& w, const ModelParams& p) {
  Jacobian2 prod;
  double log2_scale = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    prod = jacobian_at(w[i], p) * prod;
    const double s = std::max({std::abs(prod.a), std::abs(prod.b), std::abs(prod.c), std::abs(prod.d)});
    int e = 0;
    std::frexp(s, &e);
    prod = {std::ldexp(prod.a, -e), std::ldexp(prod.b, -e), std::ldexp(prod.c, -e), std::ldexp(prod.d, -e)};
    log2_scale += e;
    worst = std::max(worst, log2_scale * std::log10(2.0));
  }
  return worst;
}

ShootingCheck shooting_check(const LatticeWave& w, const ModelParams& p) {
  p.validate();
  if (w.size() != p.N || w.bc() != p.bc) throw DimensionError("wave does not match the parameters");
  const double growth = shooting_growth(w, p);
  // Keep about 25 digits beyond what the amplification eats.
  const double need = growth + 25.0;
  ShootingCheck out;
  if (need <= 50)
    out = run<Float<50>>(w, p, 50);
  else if (need <= 100)
    out = run<Float<100>>(w, p, 100);
  else if (need <= 200)
    out = run<Float<200>>(w, p, 200);
  else
    out = run<Float<400>>(w, p, 400);
  out.growth_log10 = growth;

  const Orbit orbit = shoot(w, p, HUGE_VAL);
  double err = orbit.diverged() ? HUGE_VAL : 0.0;
  for (std::size_t i = 1; i < orbit.states.size(); ++i) {
    const double d = std::abs(orbit.states[i].psi - w[i]);
    err = std::isfinite(d) ? std::max(err, d) : HUGE_VAL;
  }
  out.double_error = err;
  return out;
}

}  // namespace dnls
