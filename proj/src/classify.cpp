#include "dnls/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dnls/detail/kernels.hpp"
#include "dnls/error.hpp"
#include "dnls/newton.hpp"

namespace dnls {

namespace {

struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    // Keep the smaller index as root so roots are first members.
    if (a < b) parent[b] = a;
    else if (b < a) parent[a] = b;
  }
};

bool balanced(const Clustering& cl, std::size_t total) {
  const std::size_t k = cl.clusters.size();
  const std::size_t lo = total / k;
  const std::size_t hi = (total + k - 1) / k;
  for (const auto& c : cl.clusters)
    if (c.count < lo || c.count > hi) return false;
  return true;
}

bool labels_periodic(const std::vector<std::size_t>& labels, std::size_t k) {
  for (std::size_t i = 0; i + k < labels.size(); ++i)
    if (labels[i] != labels[i + k]) return false;
  return true;
}

}  // namespace

Clustering cluster_points(std::span<const PhasePoint> points, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("cluster tolerance must be positive");
  const std::size_t n = points.size();
  Clustering out;
  if (n == 0) return out;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a].psi < points[b].psi || (points[a].psi == points[b].psi && a < b);
  });
  DisjointSet ds(n);
  for (std::size_t s = 0; s < n; ++s) {
    const PhasePoint& a = points[order[s]];
    for (std::size_t t = s + 1; t < n; ++t) {
      const PhasePoint& b = points[order[t]];
      if (b.psi - a.psi > tol) break;
      if (std::abs(b.Z - a.Z) <= tol) ds.unite(order[s], order[t]);
    }
  }

  std::vector<std::size_t> index_of_root(n, n);
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = ds.find(i);
    if (index_of_root[r] == n) {
      index_of_root[r] = out.clusters.size();
      out.clusters.push_back({});
    }
    const std::size_t k = index_of_root[r];
    out.labels[i] = k;
    out.clusters[k].psi += points[i].psi;
    out.clusters[k].Z += points[i].Z;
    ++out.clusters[k].count;
  }
  for (auto& c : out.clusters) {
    c.psi /= static_cast<double>(c.count);
    c.Z /= static_cast<double>(c.count);
  }
  return out;
}

void ClassifyConfig::validate() const {
  if (!(cluster_tol > 0.0)) throw ConfigError("cluster_tol", "must be positive");
  if (!(loop_gap_ratio > 1.0)) throw ConfigError("loop_gap_ratio", "must exceed 1");
  if (!(condensed_ratio > loop_gap_ratio)) throw ConfigError("condensed_ratio", "must exceed loop_gap_ratio");
  if (!(ellipse_tol > 0.0)) throw ConfigError("ellipse_tol", "must be positive");
  if (max_period < 1) throw ConfigError("max_period", "must be at least 1");
}

double ClassifyConfig::absolute_tol(std::span<const PhasePoint> points) const {
  if (!relative_tol) return cluster_tol;
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, std::abs(p.psi));
  return m > 0.0 ? cluster_tol * m : cluster_tol;
}

std::string to_string(const PortraitClass& c) {
  switch (c.kind) {
    case PortraitKind::Periodic: return "Periodic(" + std::to_string(c.period) + ")";
    case PortraitKind::Quasiperiodic: return "Quasiperiodic";
    case PortraitKind::Chaotic: return "Chaotic";
    case PortraitKind::Divergent: return "Divergent";
    case PortraitKind::BlochLike: return "BlochLike";
    case PortraitKind::Unclassifiable: return "Unclassifiable";
  }
  return "Unknown";
}

PhasePortrait build_portrait(const LatticeWave& w, std::optional<double> E, const ClassifyConfig& cfg) {
  cfg.validate();
  PhasePortrait out;
  out.points = phase_function(w);
  out.clustering = cluster_points(out.points, cfg.absolute_tol(out.points));
  out.E = E;
  return out;
}

PhasePortrait orbit_portrait(const Orbit& orbit, std::optional<double> E, const ClassifyConfig& cfg) {
  cfg.validate();
  PhasePortrait out;
  out.points.reserve(orbit.states.size());
  for (const auto& s : orbit.states) out.points.push_back({s.psi, s.Z});
  if (!out.points.empty()) out.clustering = cluster_points(out.points, cfg.absolute_tol(out.points));
  out.E = E;
  out.diverged = orbit.diverged();
  return out;
}

std::optional<double> loop_gap_ratio(std::span<const Cluster> clusters) {
  const std::size_t k = clusters.size();
  if (k < 3) return std::nullopt;
  double cx = 0.0, cy = 0.0;
  for (const auto& c : clusters) {
    cx += c.psi;
    cy += c.Z;
  }
  cx /= double(k);
  cy /= double(k);
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> angle(k);
  for (std::size_t i = 0; i < k; ++i) angle[i] = std::atan2(clusters[i].Z - cy, clusters[i].psi - cx);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return angle[a] < angle[b] || (angle[a] == angle[b] && a < b); });
  std::vector<double> gaps(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Cluster& a = clusters[order[i]];
    const Cluster& b = clusters[order[(i + 1) % k]];
    gaps[i] = std::hypot(b.psi - a.psi, b.Z - a.Z);
  }
  const double max_gap = *std::max_element(gaps.begin(), gaps.end());
  std::vector<double> sorted = gaps;
  std::sort(sorted.begin(), sorted.end());
  const double median = k % 2 ? sorted[k / 2] : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
  if (median == 0.0) return max_gap == 0.0 ? 1.0 : HUGE_VAL;
  return max_gap / median;
}

bool fits_origin_ellipse(std::span<const PhasePoint> points, double tol) {
  if (points.size() < 3) return false;
  // Normal equations for rows (psi^2, psi Z, Z^2) against 1.
  detail::DenseMatrix<double> a(3, std::vector<double>(3, 0.0));
  std::vector<double> rhs(3, 0.0);
  double scale = 0.0;
  for (const auto& p : points) scale = std::max({scale, std::abs(p.psi), std::abs(p.Z)});
  if (!(scale > 0.0)) return false;
  for (const auto& p : points) {
    const double x = p.psi / scale, y = p.Z / scale;
    const double row[3] = {x * x, x * y, y * y};
    for (int i = 0; i < 3; ++i) {
      rhs[i] += row[i];
      for (int j = 0; j < 3; ++j) a[i][j] += row[i] * row[j];
    }
  }
  double norm = 0.0;
  for (const auto& r : a)
    for (double v : r) norm = std::max(norm, std::abs(v));
  const auto sol = detail::dense_solve<double>(a, rhs, 1e-12 * norm);
  if (!sol.ok) return false;
  const double qa = sol.x[0], qb = sol.x[1], qd = sol.x[2];
  if (!(qa > 0.0 && qd > 0.0 && 4.0 * qa * qd - qb * qb > 0.0)) return false;
  for (const auto& p : points) {
    const double x = p.psi / scale, y = p.Z / scale;
    if (std::abs(qa * x * x + qb * x * y + qd * y * y - 1.0) > tol) return false;
  }
  return true;
}

PortraitClass classify(const PhasePortrait& portrait, const ClassifyConfig& cfg) {
  cfg.validate();
  PortraitClass out;
  const std::size_t total = portrait.points.size();
  if (portrait.diverged) {
    out.kind = PortraitKind::Divergent;
    out.reason = "orbit left the divergence bound";
    return out;
  }
  if (total < cfg.min_points) {
    out.kind = PortraitKind::Unclassifiable;
    out.reason = "fewer than " + std::to_string(cfg.min_points) + " points";
    return out;
  }
  if (portrait.E && *portrait.E > 0.0 && fits_origin_ellipse(portrait.points, cfg.ellipse_tol)) {
    out.kind = PortraitKind::BlochLike;
    out.reason = "origin-centred ellipse at positive energy";
    return out;
  }

  const Clustering& cl = portrait.clustering;
  const std::size_t k = cl.clusters.size();
  if (k >= 1 && k <= total / 2 && k <= cfg.max_period && balanced(cl, total) && labels_periodic(cl.labels, k)) {
    out.kind = PortraitKind::Periodic;
    out.period = k;
    out.reason = "site sequence repeats every " + std::to_string(k) + " clusters";
    return out;
  }

  const auto ratio = loop_gap_ratio(cl.clusters);
  if (!ratio) {
    out.kind = PortraitKind::Unclassifiable;
    out.reason = "too few distinct points for a loop";
    return out;
  }
  out.gap_ratio = *ratio;
  if (*ratio < cfg.loop_gap_ratio) {
    out.kind = PortraitKind::Quasiperiodic;
    out.reason = "points lie on a closed loop";
  } else if (*ratio >= cfg.condensed_ratio) {
    out.kind = PortraitKind::Quasiperiodic;
    out.reason = "points condensed onto a few limit points";
  } else {
    out.kind = PortraitKind::Chaotic;
    out.reason = "loop is dispersed";
  }
  return out;
}

bool bloch_check(const ModelParams& p, const LatticeWave& w, const ClassifyConfig& cfg) {
  if (!(p.E > 0.0)) return false;
  if (!(w.max_abs() > 0.0)) return false;
  return fits_origin_ellipse(phase_function(w), cfg.ellipse_tol);
}

}  // namespace dnls
