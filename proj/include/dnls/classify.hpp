#pragma once

// Phase portraits (psi_i, Z_i) and their classification as periodic,
// quasiperiodic (points on a closed loop), chaotic (dispersed loop),
// Bloch-like (an origin-centred ellipse at E > 0) or divergent.  On a finite
// chain these classes are heuristics; every threshold lives in
// ClassifyConfig and reports carry the raw points.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dnls/lattice.hpp"
#include "dnls/map.hpp"

namespace dnls {

struct Cluster {
  double psi = 0.0;  // member mean
  double Z = 0.0;
  std::size_t count = 0;
};

struct Clustering {
  std::vector<Cluster> clusters;    // ordered by first member
  std::vector<std::size_t> labels;  // cluster index of each input point
};

// Single-linkage grouping: two points share a cluster when a chain of points
// links them with max-norm steps of at most tol.  Unlike greedy
// running-mean clustering this depends only on the point set, never on input
// order, and a larger tol can only merge clusters.
Clustering cluster_points(std::span<const PhasePoint> points, double tol);

struct ClassifyConfig {
  double cluster_tol = 1e-6;
  bool relative_tol = true;       // cluster_tol scales with max |psi|
  double loop_gap_ratio = 4.0;    // max/median gap below this: closed loop
  double condensed_ratio = 1e3;   // at or above this: points condensed onto few limits
  std::size_t min_points = 8;
  std::size_t max_period = 12;
  double ellipse_tol = 1e-6;      // relative residual of the conic fit

  void validate() const;
  double absolute_tol(std::span<const PhasePoint> points) const;
};

enum class PortraitKind { Periodic, Quasiperiodic, Chaotic, Divergent, BlochLike, Unclassifiable };

struct PortraitClass {
  PortraitKind kind = PortraitKind::Unclassifiable;
  std::size_t period = 0;  // for Periodic
  double gap_ratio = 0.0;  // max/median gap along the angle-ordered loop, when computed
  std::string reason;
};

std::string to_string(const PortraitClass& c);

struct PhasePortrait {
  std::vector<PhasePoint> points;
  Clustering clustering;
  std::optional<double> E;  // enables the Bloch test when positive
  bool diverged = false;
};

PhasePortrait build_portrait(const LatticeWave& w, std::optional<double> E, const ClassifyConfig& cfg = {});

// Points (psi, Z) of the visited map states.
PhasePortrait orbit_portrait(const Orbit& orbit, std::optional<double> E, const ClassifyConfig& cfg = {});

PortraitClass classify(const PhasePortrait& portrait, const ClassifyConfig& cfg = {});

// Max gap over median gap between consecutive cluster centres ordered by angle
// around their centroid.  Needs at least three clusters; returns nullopt
// otherwise.
std::optional<double> loop_gap_ratio(std::span<const Cluster> clusters);

// Least-squares fit of a psi^2 + b psi Z + d Z^2 = 1.  True when the fit is
// an ellipse and every point satisfies it within tol (relative).
bool fits_origin_ellipse(std::span<const PhasePoint> points, double tol);

// E > 0 and the portrait of w is an origin-centred ellipse.
bool bloch_check(const ModelParams& p, const LatticeWave& w, const ClassifyConfig& cfg = {});

}  // namespace dnls
