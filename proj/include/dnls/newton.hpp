#pragma once

// Newton refinement of a strong-coupling seed into an exact lattice solution
// at finite c.  E0 is held fixed; each step solves T x = F at the current
// state and moves to psi + x.  Since the Hessian of H is 2T and its gradient
// is -2F, this is exactly psi - [Hess H]^-1 grad H.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dnls/lattice.hpp"

namespace dnls {

struct SolveConfig {
  double tol = 1e-12;       // on ||delta psi||_inf
  int max_iter = 100;
  double e_jump = 0.5;      // relative jump in E(m) that flags a structure change
  double bound = 1e8;       // amplitude beyond which the iteration has diverged
  bool step_halving = false;
  int max_halvings = 30;

  // ConfigError naming the offending field.
  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  std::optional<double> E_m;  // sum-weighted estimate; empty when undefined
  double delta_inf = 0.0;
  double residual_inf = 0.0;
};

enum class Outcome { Converged, StructureChanged, Diverged, MaxIter, Degenerate };

std::string_view to_string(Outcome o);

struct IterationTrace {
  std::vector<IterationRecord> records;
  Outcome outcome = Outcome::MaxIter;
  // Iteration at which E(m) jumped, if it did.
  std::optional<int> structure_change_at;
  // Iteration that ended the run for Diverged or Degenerate.
  std::optional<int> failed_at;
  std::string message;
};

struct ConvergedState {
  LatticeWave psi;
  double E0 = 0.0;
  std::optional<double> E_diag;
  double C = 0.0;  // c * sum(psi^2)
  double H = 0.0;
};

struct SolveResult {
  std::optional<ConvergedState> state;  // set for Converged and StructureChanged
  IterationTrace trace;
  LatticeWave last;  // final iterate, whatever the outcome

  bool ok() const noexcept { return state.has_value(); }
};

struct NewtonStep {
  LatticeWave psi;
  double delta_inf = 0.0;
};

// One step at E0 = p.E.  Throws NearDegenerate when T is singular.
NewtonStep newton_step(const LatticeWave& w, const ModelParams& p);

// Convergence needs ||delta||_inf < tol and ||residual||_inf below
// 10 tol scaled by the size of the linearised operator,
// max(1, |E0| + 3|c| max psi^2).  The scale keeps the test meaningful when c
// is so large that rounding alone exceeds 10 tol.
double residual_scale(const LatticeWave& w, const ModelParams& p);

SolveResult solve(const LatticeWave& seed, const ModelParams& p, const SolveConfig& cfg = {});

// Points (psi_i, Z_i) with Z_i = psi_{i+1} - psi_i.  Periodic chains give N
// points, open chains N - 1.
std::vector<PhasePoint> phase_function(const LatticeWave& w);

}  // namespace dnls
