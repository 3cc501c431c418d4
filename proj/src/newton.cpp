#include "dnls/newton.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dnls/error.hpp"
#include "dnls/perturbation.hpp"
#include "dnls/seed.hpp"

namespace dnls {

namespace {

std::optional<double> try_diagnostic(const LatticeWave& w, double c) {
  if (w.bc() != Boundary::Periodic) return std::nullopt;
  try {
    return diagnostic_energy(w, c);
  } catch (const UndefinedDiagnostic&) {
    return std::nullopt;
  }
}

bool out_of_bounds(std::span<const double> v, double bound) {
  for (double x : v)
    if (!(std::abs(x) <= bound)) return true;
  return false;
}

std::string pattern_note(const LatticeWave& seed) {
  try {
    const auto k = infer_pattern(seed).counts();
    return " near seed (n, m, l) = (" + std::to_string(k.n) + ", " + std::to_string(k.m) + ", " +
           std::to_string(k.l) + ")";
  } catch (const Error&) {
    return "";
  }
}

}  // namespace

void SolveConfig::validate() const {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw ConfigError("tol", "must be positive");
  if (max_iter < 1) throw ConfigError("max_iter", "must be at least 1");
  if (!(e_jump > 0.0 && e_jump <= 1.0)) throw ConfigError("e_jump", "must lie in (0, 1]");
  if (!(bound > 0.0)) throw ConfigError("bound", "must be positive");
  if (max_halvings < 0) throw ConfigError("max_halvings", "must be non-negative");
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Converged: return "converged";
    case Outcome::StructureChanged: return "structure_changed";
    case Outcome::Diverged: return "diverged";
    case Outcome::MaxIter: return "max_iter";
    case Outcome::Degenerate: return "degenerate";
  }
  return "unknown";
}

NewtonStep newton_step(const LatticeWave& w, const ModelParams& p) {
  p.validate();
  if (w.size() != p.N || w.bc() != p.bc) throw DimensionError("wave does not match the parameters");
  const CorrectionSystem sys = build_system(w, p.E, p.c);
  const std::vector<double> x = solve_system(sys);
  std::vector<double> next(w.values().begin(), w.values().end());
  for (std::size_t i = 0; i < next.size(); ++i) next[i] += x[i];
  for (double v : next)
    if (!std::isfinite(v)) throw OutOfDomain("Newton step overflowed");
  return {LatticeWave(std::move(next), w.bc()), max_abs(x)};
}

double residual_scale(const LatticeWave& w, const ModelParams& p) {
  const double a = w.max_abs();
  return std::max(1.0, std::abs(p.E) + 3.0 * std::abs(p.c) * a * a);
}

SolveResult solve(const LatticeWave& seed, const ModelParams& p, const SolveConfig& cfg) {
  cfg.validate();
  p.validate();
  if (seed.size() != p.N || seed.bc() != p.bc) throw DimensionError("seed does not match the parameters");
  if (!(seed.norm_squared() > 0.0)) throw CannotNormalize("zero seed");

  SolveResult result{std::nullopt, {}, seed};
  IterationTrace& trace = result.trace;
  LatticeWave psi = seed;
  std::optional<double> prev_E;
  const double jump_limit = cfg.e_jump * std::max(1.0, std::abs(p.E));

  auto finish_converged = [&]() {
    trace.outcome = trace.structure_change_at ? Outcome::StructureChanged : Outcome::Converged;
    ConvergedState st{psi, p.E, try_diagnostic(psi, p.c), p.c * psi.norm_squared(), hamiltonian(psi, p)};
    result.state = std::move(st);
    result.last = psi;
  };

  for (int m = 1; m <= cfg.max_iter; ++m) {
    NewtonStep st{psi, 0.0};
    try {
      st = newton_step(psi, p);
    } catch (const NearDegenerate& e) {
      trace.outcome = Outcome::Degenerate;
      trace.failed_at = m;
      trace.message = std::string(e.what()) + pattern_note(seed);
      result.last = psi;
      return result;
    } catch (const OutOfDomain& e) {
      trace.outcome = Outcome::Diverged;
      trace.failed_at = m;
      trace.message = e.what();
      result.last = psi;
      return result;
    }

    if (cfg.step_halving) {
      const double before = max_abs(residual(psi, p));
      // Halve the step until the residual stops growing.
      for (int h = 0; h < cfg.max_halvings; ++h) {
        if (!out_of_bounds(st.psi.values(), cfg.bound) && max_abs(residual(st.psi, p)) <= before) break;
        std::vector<double> v(psi.size());
        double d = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
          const double full = st.psi[i] - psi[i];
          v[i] = psi[i] + 0.5 * full;
          d = std::max(d, std::abs(0.5 * full));
        }
        st = {LatticeWave(std::move(v), psi.bc()), d};
      }
    }

    if (out_of_bounds(st.psi.values(), cfg.bound)) {
      trace.records.push_back({m, std::nullopt, st.delta_inf, HUGE_VAL});
      trace.outcome = Outcome::Diverged;
      trace.failed_at = m;
      char buf[64];
      std::snprintf(buf, sizeof buf, "amplitude exceeded bound %g", cfg.bound);
      trace.message = buf;
      result.last = psi;
      return result;
    }

    psi = std::move(st.psi);
    const double res = max_abs(residual(psi, p));
    const auto E_m = try_diagnostic(psi, p.c);
    trace.records.push_back({m, E_m, st.delta_inf, res});

    if (m > 1 && E_m && prev_E && !trace.structure_change_at && std::abs(*E_m - *prev_E) > jump_limit)
      trace.structure_change_at = m;
    if (E_m) prev_E = E_m;

    if (st.delta_inf < cfg.tol && res < 10.0 * cfg.tol * residual_scale(psi, p)) {
      finish_converged();
      return result;
    }
  }
  trace.outcome = Outcome::MaxIter;
  trace.message = "no convergence after " + std::to_string(cfg.max_iter) + " iterations";
  result.last = psi;
  return result;
}

std::vector<PhasePoint> phase_function(const LatticeWave& w) {
  const std::size_t n = w.size();
  const std::size_t count = w.bc() == Boundary::Periodic ? n : n - 1;
  std::vector<PhasePoint> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pts.push_back({w[i], w.right(i) - w[i]});
  return pts;
}

}  // namespace dnls
