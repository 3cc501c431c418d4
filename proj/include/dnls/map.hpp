#pragma once

// The stationary lattice equation read as a recursion along the chain:
//
//   Z'   = Z - E psi - c psi^3
//   psi' = psi + Z'
//
// with Z_i = psi_i - psi_{i-1}.  The map is area preserving; its cycles are
// lattice solutions and their stability follows from the trace of the
// product of 2x2 transfer matrices.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dnls/lattice.hpp"

namespace dnls {

struct MapState {
  double Z = 0.0;
  double psi = 0.0;
};

inline constexpr double kDefaultDivergenceBound = 1e8;

enum class OrbitStatus { Completed, Diverged };

struct Orbit {
  std::vector<MapState> states;
  OrbitStatus status = OrbitStatus::Completed;
  // Index of the first state beyond the bound when status is Diverged.  That
  // state is kept if finite; nothing after it is recorded.
  std::size_t diverged_at = 0;

  bool diverged() const noexcept { return status == OrbitStatus::Diverged; }
};

// Row-major [[a, b], [c, d]].
struct Jacobian2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  double det() const noexcept { return a * d - b * c; }
  double trace() const noexcept { return a + d; }
  Jacobian2 operator*(const Jacobian2& o) const noexcept {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
};

// One map step.  The result may be non-finite if the orbit overflows; iterate
// turns that into a divergence status.
MapState step(MapState s, const ModelParams& p) noexcept;

// Undoes step exactly in exact arithmetic.
MapState inverse_step(MapState s, const ModelParams& p) noexcept;

Orbit iterate(MapState s0, const ModelParams& p, std::size_t steps, double bound = kDefaultDivergenceBound);

// d(Z', psi') / d(Z, psi) = [[1, -E - 3c psi^2], [1, 1 - E - 3c psi^2]].
Jacobian2 step_jacobian(double psi, const ModelParams& p) noexcept;

// Transfer matrix (psi_i, psi_{i-1}) -> (psi_{i+1}, psi_i):
// [[2 - E - 3c psi^2, -1], [1, 0]].
Jacobian2 jacobian_at(double psi, const ModelParams& p) noexcept;

// A trace that may exceed the double range: value = mantissa * 2^exponent.
struct ScaledTrace {
  double mantissa = 0.0;
  std::int64_t exponent = 0;

  // Overflows to +-inf when the trace is out of range.
  double value() const noexcept;
  // log10 |trace|, -inf for a zero trace.
  double log10_abs() const noexcept;
};

// Trace of M(psi_N) ... M(psi_1).  The running product is renormalised after
// every factor, so arbitrarily long chaotic cycles do not overflow.
ScaledTrace cycle_trace(std::span<const double> cycle, const ModelParams& p);

enum class Stability { Stable, Marginal, Unstable };

std::string_view to_string(Stability s);

inline constexpr double kMarginalTolerance = 1e-12;

// |trace| < 2 stable, |trace| = 2 (within kMarginalTolerance) marginal.
Stability stability_of(const ScaledTrace& t);

struct FixedPoint {
  MapState state;
  double trace = 0.0;
  Stability stability = Stability::Unstable;
};

// Origin first, then (+sqrt(-E/c), 0) and (-sqrt(-E/c), 0) when -E/c > 0.
std::vector<FixedPoint> fixed_points(const ModelParams& p);

// Map state that generates site i of w: (psi_i - psi_{i-1}, psi_i).  Site
// 0 uses the wrapped neighbour under periodic boundaries and 0 otherwise.
MapState state_at(const LatticeWave& w, std::size_t i);

// Iterates the map from state_at(w, 0) through N - 1 steps, so a lattice
// solution is reproduced site by site.
Orbit shoot(const LatticeWave& w, const ModelParams& p, double bound = kDefaultDivergenceBound);

}  // namespace dnls
