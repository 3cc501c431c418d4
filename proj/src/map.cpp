#include "dnls/map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dnls/error.hpp"

namespace dnls {

namespace {

bool within(MapState s, double bound) {
  // NaN fails both comparisons and so counts as out of bounds.
  return std::abs(s.Z) <= bound && std::abs(s.psi) <= bound;
}

bool finite(MapState s) { return std::isfinite(s.Z) && std::isfinite(s.psi); }

}  // namespace

MapState step(MapState s, const ModelParams& p) noexcept {
  const double Z = s.Z - p.E * s.psi - p.c * s.psi * s.psi * s.psi;
  return {Z, s.psi + Z};
}

MapState inverse_step(MapState s, const ModelParams& p) noexcept {
  const double psi = s.psi - s.Z;
  return {s.Z + p.E * psi + p.c * psi * psi * psi, psi};
}

Orbit iterate(MapState s0, const ModelParams& p, std::size_t steps, double bound) {
  if (!(bound > 0.0)) throw InvalidArgument("divergence bound must be positive");
  Orbit orbit;
  orbit.states.reserve(steps + 1);
  if (!within(s0, bound)) {
    if (finite(s0)) orbit.states.push_back(s0);
    orbit.status = OrbitStatus::Diverged;
    return orbit;
  }
  orbit.states.push_back(s0);
  MapState s = s0;
  for (std::size_t k = 1; k <= steps; ++k) {
    s = step(s, p);
    if (!within(s, bound)) {
      if (finite(s)) orbit.states.push_back(s);
      orbit.status = OrbitStatus::Diverged;
      orbit.diverged_at = k;
      return orbit;
    }
    orbit.states.push_back(s);
  }
  return orbit;
}

Jacobian2 step_jacobian(double psi, const ModelParams& p) noexcept {
  const double k = -p.E - 3.0 * p.c * psi * psi;
  return {1.0, k, 1.0, 1.0 + k};
}

Jacobian2 jacobian_at(double psi, const ModelParams& p) noexcept {
  return {2.0 - p.E - 3.0 * p.c * psi * psi, -1.0, 1.0, 0.0};
}

double ScaledTrace::value() const noexcept {
  if (exponent > std::numeric_limits<int>::max()) return std::copysign(HUGE_VAL, mantissa);
  if (exponent < std::numeric_limits<int>::min()) return std::copysign(0.0, mantissa);
  return std::ldexp(mantissa, static_cast<int>(exponent));
}

double ScaledTrace::log10_abs() const noexcept {
  if (mantissa == 0.0) return -HUGE_VAL;
  return std::log10(std::abs(mantissa)) + static_cast<double>(exponent) * std::log10(2.0);
}

ScaledTrace cycle_trace(std::span<const double> cycle, const ModelParams& p) {
  if (cycle.empty()) throw InvalidArgument("cycle must contain at least one site");
  Jacobian2 prod;
  std::int64_t exponent = 0;
  for (double psi : cycle) {
    prod = jacobian_at(psi, p) * prod;
    const double scale = std::max({std::abs(prod.a), std::abs(prod.b), std::abs(prod.c), std::abs(prod.d)});
    if (!std::isfinite(scale)) throw InvalidArgument("cycle amplitudes must be finite");
    if (scale == 0.0) continue;  // cannot happen for det = 1, kept for safety
    int e = 0;
    std::frexp(scale, &e);
    // Power-of-two rescaling is exact, so small products keep full accuracy.
    prod = {std::ldexp(prod.a, -e), std::ldexp(prod.b, -e), std::ldexp(prod.c, -e), std::ldexp(prod.d, -e)};
    exponent += e;
  }
  const double t = prod.trace();
  if (t == 0.0) return {0.0, 0};
  int e = 0;
  const double mant = std::frexp(t, &e);
  return {mant, exponent + e};
}

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Marginal: return "marginal";
    case Stability::Unstable: return "unstable";
  }
  return "unknown";
}

Stability stability_of(const ScaledTrace& t) {
  const double v = std::abs(t.value());
  if (std::abs(v - 2.0) <= kMarginalTolerance) return Stability::Marginal;
  return v < 2.0 ? Stability::Stable : Stability::Unstable;
}

std::vector<FixedPoint> fixed_points(const ModelParams& p) {
  std::vector<FixedPoint> out;
  auto add = [&](double psi) {
    const double cyc[] = {psi};
    const ScaledTrace t = cycle_trace(cyc, p);
    out.push_back({MapState{0.0, psi}, t.value(), stability_of(t)});
  };
  add(0.0);
  if (p.c != 0.0) {
    const double q = -p.E / p.c;
    if (q > 0.0) {
      const double r = std::sqrt(q);
      add(r);
      add(-r);
    }
  }
  return out;
}

MapState state_at(const LatticeWave& w, std::size_t i) {
  if (i >= w.size()) throw DimensionError("site index out of range");
  return {w[i] - w.left(i), w[i]};
}

Orbit shoot(const LatticeWave& w, const ModelParams& p, double bound) {
  return iterate(state_at(w, 0), p, w.size() - 1, bound);
}

}  // namespace dnls
