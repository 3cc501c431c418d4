#pragma once

// First-order corrections around strong-coupling seeds.  Writing psi = p + x
// and E = E0 + E1, dropping quadratic terms in x gives the linear system
//
//   T x = F,   T_ii = 2 - E0 - 3c p_i^2,  T_{i,i+-1} = -1,
//              F_i  = E0 p_i + c p_i^3 + p_{i-1} - 2 p_i + p_{i+1}
//
// (periodic rings also couple the two ends).  F is minus the residual of p.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dnls/lattice.hpp"
#include "dnls/seed.hpp"

namespace dnls {

struct CorrectionSystem {
  std::vector<double> diag;
  std::vector<double> F;
  Boundary bc = Boundary::Periodic;

  std::size_t size() const noexcept { return diag.size(); }
  // Max row sum of |T|, with coincident neighbours of tiny rings folded.
  double norm_inf() const;
};

CorrectionSystem build_system(const LatticeWave& p, double E0, double c);

// Pivots below this fraction of ||T||_inf mark the system as degenerate.
inline constexpr double kDegeneracyRatio = 1e-8;
// Systems up to this size always take the dense path.
inline constexpr std::size_t kDenseLimit = 8;

// Solves T x = F.  Above kDenseLimit sites this is O(N) elimination (with a
// rank-one corner correction for rings); small systems, and any system where
// the fast path loses accuracy, use dense partial pivoting.  Throws
// NearDegenerate for a numerically singular T.
std::vector<double> solve_system(const CorrectionSystem& sys);

// Dense partial-pivoting path on its own.
std::vector<double> solve_dense(const CorrectionSystem& sys);

// || T x - F ||_inf.
double system_residual(const CorrectionSystem& sys, std::span<const double> x);

// E1 = (-c sum p^3 - 3c sum p^2 x - E0 sum p - E0 sum x) / (sum p + sum x).
// Throws UndefinedDiagnostic when the denominator is within eps_sum of zero;
// eps_sum < 0 selects default_sum_epsilon(N).
double energy_correction(std::span<const double> p, std::span<const double> x, double E0, double c,
                         double eps_sum = -1.0);

// Closed-form first-order corrections for a site whose neighbourhood in the
// seed is (left, centre, right), each 0 or +-1/sqrt(n).  Every case reads
//
//   x = (a_n n + a_m m + a_l l) / (divisor sqrt(n) D)
//
// with D = c - 2m - 4l for an empty centre and D = c + m + 2l otherwise.  The
// left/right order does not matter, so each centre value has six cases.
struct A1Entry {
  int centre = 0;
  int first = 0;   // neighbour signs with first >= second
  int second = 0;
  int a_n = 0, a_m = 0, a_l = 0;
  int divisor = 1;
};

class A1Table {
 public:
  static const A1Table& standard();

  explicit A1Table(std::array<A1Entry, 18> entries);

  const std::array<A1Entry, 18>& entries() const noexcept { return entries_; }
  std::array<A1Entry, 18>& entries() noexcept { return entries_; }

  const A1Entry& lookup(int left, int centre, int right) const;

  // Throws OutOfDomain when the denominator is not positive.
  double evaluate(int left, int centre, int right, PatternCounts counts, double c) const;

 private:
  std::array<A1Entry, 18> entries_;
};

// Amplitudes must each be 0 or +-1/sqrt(n) (to 1e-9 relative); otherwise
// InvalidArgument.
double a1_correction(double pL, double pC, double pR, int n, int m, int l, double c,
                     const A1Table& table = A1Table::standard());

// The table applied to every site of a seed.
std::vector<double> a1_corrections(const SeedPattern& pattern, double c,
                                   const A1Table& table = A1Table::standard());

struct TwoSitePair {
  double E = 0.0;
  std::array<double, 2> psi{};
};

struct TwoSiteSolutions {
  TwoSitePair symmetric;       // E = -c/2
  TwoSitePair antisymmetric;   // E = (8 - c)/2
  std::optional<TwoSitePair> broken;  // E = 2 - c, only for c > 4
  std::optional<double> alpha;        // present together with broken

  std::vector<TwoSitePair> all() const;
};

TwoSiteSolutions two_site_exact(double c);

// sqrt(1 - 16/c^2) for c >= 4; OutOfDomain otherwise.
double symmetry_breaking_alpha(double c);

// Exact components (large, small) of the symmetry-breaking two-site vector,
// the small one written without cancellation.  Requires c > 4.
std::pair<double, double> surd_exact(double c);

// Partial sums of the large-c expansions
//   large = 1 - 2/c^2 - 10/c^4 - 84/c^6
//   small = 2/c + 4/c^3 + 28/c^5 + 264/c^7
// keeping the first `terms` (1..4) terms of each.
std::pair<double, double> surd_series(double c, int terms);

}  // namespace dnls
