#include "dnls/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "dnls/detail/kernels.hpp"
#include "dnls/error.hpp"

namespace dnls {

namespace {

constexpr double kBackwardTolerance = 1e-10;

int sign_of_amplitude(double v, double amp) {
  const double tol = 1e-9 * amp;
  if (std::abs(v) <= tol) return 0;
  if (std::abs(v - amp) <= tol) return 1;
  if (std::abs(v + amp) <= tol) return -1;
  throw InvalidArgument("seed amplitude " + std::to_string(v) + " is neither 0 nor +-1/sqrt(n)");
}

}  // namespace

double CorrectionSystem::norm_inf() const {
  const std::size_t n = diag.size();
  if (n == 0) return 0.0;
  const auto a = detail::assemble_dense<double>(diag, bc);
  if (n <= 2) {
    double best = 0.0;
    for (const auto& row : a) {
      double s = 0.0;
      for (double v : row) s += std::abs(v);
      best = std::max(best, s);
    }
    return best;
  }
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool edge = bc == Boundary::Open && (i == 0 || i + 1 == n);
    best = std::max(best, std::abs(diag[i]) + (edge ? 1.0 : 2.0));
  }
  return best;
}

CorrectionSystem build_system(const LatticeWave& p, double E0, double c) {
  if (!std::isfinite(E0) || !std::isfinite(c)) throw InvalidArgument("c and E0 must be finite");
  CorrectionSystem sys;
  sys.bc = p.bc();
  sys.diag = detail::linearised_diagonal<double>(p.values(), c, E0);
  sys.F.resize(p.size());
  detail::residual_into<double>(p.values(), p.bc(), c, E0, sys.F);
  for (double& f : sys.F) f = -f;
  return sys;
}

double system_residual(const CorrectionSystem& sys, std::span<const double> x) {
  if (x.size() != sys.size()) throw DimensionError("solution length does not match the system");
  std::vector<double> tx(x.size());
  detail::apply_operator<double>(sys.diag, x, sys.bc, tx);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(tx[i] - sys.F[i]));
  return worst;
}

std::vector<double> solve_dense(const CorrectionSystem& sys) {
  const double floor = kDegeneracyRatio * sys.norm_inf();
  auto a = detail::assemble_dense<double>(sys.diag, sys.bc);
  auto res = detail::dense_solve<double>(std::move(a), sys.F, floor);
  if (!res.ok) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "linearised operator is near singular (smallest pivot %.3g, norm %.3g)",
                  res.min_pivot, sys.norm_inf());
    throw NearDegenerate(buf, res.min_pivot);
  }
  return std::move(res.x);
}

std::vector<double> solve_system(const CorrectionSystem& sys) {
  const std::size_t n = sys.size();
  if (sys.F.size() != n) throw DimensionError("diagonal and right-hand side differ in length");
  if (n == 0) return {};
  const double f_norm = max_abs(sys.F);
  if (f_norm == 0.0) {
    // Still reject a singular operator; the zero solution would hide it.
    solve_dense(sys);
    return std::vector<double>(n, 0.0);
  }
  const bool dense_only = n <= kDenseLimit;
  if (!dense_only) {
    const double floor = kDegeneracyRatio * sys.norm_inf();
    if (auto x = detail::banded_solve<double>(sys.diag, sys.F, sys.bc, floor)) {
      if (system_residual(sys, *x) <= kBackwardTolerance * f_norm) return std::move(*x);
    }
  }
  return solve_dense(sys);
}

double energy_correction(std::span<const double> p, std::span<const double> x, double E0, double c,
                         double eps_sum) {
  if (p.size() != x.size()) throw DimensionError("seed and correction differ in length");
  if (eps_sum < 0.0) eps_sum = default_sum_epsilon(p.size());
  double sp = 0.0, sx = 0.0, p3 = 0.0, p2x = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sp += p[i];
    sx += x[i];
    p3 += p[i] * p[i] * p[i];
    p2x += p[i] * p[i] * x[i];
  }
  const double denom = sp + sx;
  if (std::abs(denom) <= eps_sum)
    throw UndefinedDiagnostic("energy correction undefined: sum of p + x is " + std::to_string(denom));
  return (-c * p3 - 3.0 * c * p2x - E0 * sp - E0 * sx) / denom;
}

// ---------------------------------------------------------------------------
// Closed-form table

const A1Table& A1Table::standard() {
  // clang-format off
  static const A1Table table({{
    // empty centre, numerator k n over sqrt(n) (c - 2m - 4l)
    {0,  0,  0,   0,  0,  0, 1},
    {0,  1,  0,   1,  0,  0, 1},
    {0,  0, -1,  -1,  0,  0, 1},
    {0,  1,  1,   2,  0,  0, 1},
    {0,  1, -1,   0,  0,  0, 1},
    {0, -1, -1,  -2,  0,  0, 1},
    // centre +1/sqrt(n), denominator sqrt(n) (c + m + 2l)
    {1,  0,  0,   1, -1, -2, 1},
    {1,  1,  0,   1, -2, -4, 2},
    {1,  0, -1,   3, -2, -4, 2},
    {1,  1,  1,   0, -1, -2, 1},
    {1,  1, -1,   1, -1, -2, 1},
    {1, -1, -1,   2, -1, -2, 1},
    // centre -1/sqrt(n)
    {-1,  0,  0,  -1,  1,  2, 1},
    {-1,  1,  0,  -3,  2,  4, 2},
    {-1,  0, -1,  -1,  2,  4, 2},
    {-1,  1,  1,  -2,  1,  2, 1},
    {-1,  1, -1,  -1,  1,  2, 1},
    {-1, -1, -1,   0,  1,  2, 1},
  }});
  // clang-format on
  return table;
}

A1Table::A1Table(std::array<A1Entry, 18> entries) : entries_(entries) {}

const A1Entry& A1Table::lookup(int left, int centre, int right) const {
  const int hi = std::max(left, right);
  const int lo = std::min(left, right);
  for (const auto& e : entries_)
    if (e.centre == centre && e.first == hi && e.second == lo) return e;
  throw InvalidArgument("no closed-form case for neighbourhood (" + std::to_string(left) + ", " +
                        std::to_string(centre) + ", " + std::to_string(right) + ")");
}

double A1Table::evaluate(int left, int centre, int right, PatternCounts k, double c) const {
  const A1Entry& e = lookup(left, centre, right);
  const double D = centre == 0 ? c - 2.0 * k.m - 4.0 * k.l : c + k.m + 2.0 * k.l;
  if (!(D > 0.0)) throw OutOfDomain("coupling too small for the first-order closed forms");
  const double num = e.a_n * double(k.n) + e.a_m * double(k.m) + e.a_l * double(k.l);
  return num / (e.divisor * std::sqrt(double(k.n)) * D);
}

double a1_correction(double pL, double pC, double pR, int n, int m, int l, double c, const A1Table& table) {
  if (n < 1) throw InvalidArgument("occupied-site count must be at least 1");
  const double amp = 1.0 / std::sqrt(double(n));
  return table.evaluate(sign_of_amplitude(pL, amp), sign_of_amplitude(pC, amp), sign_of_amplitude(pR, amp),
                        {n, m, l}, c);
}

std::vector<double> a1_corrections(const SeedPattern& pattern, double c, const A1Table& table) {
  const auto layout = pattern.layout();
  const std::size_t n = layout.size();
  const bool periodic = pattern.bc() == Boundary::Periodic;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int left = i > 0 ? layout[i - 1] : periodic ? layout[n - 1] : 0;
    const int right = i + 1 < n ? layout[i + 1] : periodic ? layout[0] : 0;
    x[i] = table.evaluate(left, layout[i], right, pattern.counts(), c);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Two sites

std::vector<TwoSitePair> TwoSiteSolutions::all() const {
  std::vector<TwoSitePair> out{symmetric, antisymmetric};
  if (broken) out.push_back(*broken);
  return out;
}

double symmetry_breaking_alpha(double c) {
  if (!(c >= 4.0)) throw OutOfDomain("symmetry-breaking branch needs c >= 4");
  return std::sqrt(1.0 - 16.0 / (c * c));
}

std::pair<double, double> surd_exact(double c) {
  if (!(c > 4.0)) throw OutOfDomain("symmetry-breaking branch needs c > 4");
  const double alpha = symmetry_breaking_alpha(c);
  const double large = std::sqrt((1.0 + alpha) / 2.0);
  // sqrt((1 - alpha)/2) = (4/c) / sqrt(2 (1 + alpha)) since 1 - alpha^2 = 16/c^2.
  const double small = (4.0 / c) / std::sqrt(2.0 * (1.0 + alpha));
  return {large, small};
}

TwoSiteSolutions two_site_exact(double c) {
  if (!std::isfinite(c)) throw InvalidArgument("c must be finite");
  const double h = 1.0 / std::sqrt(2.0);
  TwoSiteSolutions out;
  out.symmetric = {-c / 2.0, {h, h}};
  out.antisymmetric = {(8.0 - c) / 2.0, {h, -h}};
  if (c > 4.0) {
    const auto [large, small] = surd_exact(c);
    out.alpha = symmetry_breaking_alpha(c);
    out.broken = TwoSitePair{2.0 - c, {large, small}};
  }
  return out;
}

std::pair<double, double> surd_series(double c, int terms) {
  if (!(c > 4.0)) throw OutOfDomain("expansion needs c > 4");
  if (terms < 1 || terms > 4) throw InvalidArgument("between 1 and 4 terms are available");
  static constexpr double large_coef[] = {1.0, -2.0, -10.0, -84.0};
  static constexpr double small_coef[] = {2.0, 4.0, 28.0, 264.0};
  const double u = 1.0 / c;
  const double u2 = u * u;
  double large = 0.0, small = 0.0, pw = 1.0;
  for (int k = 0; k < terms; ++k) {
    large += large_coef[k] * pw;
    small += small_coef[k] * pw * u;
    pw *= u2;
  }
  return {large, small};
}

}  // namespace dnls
