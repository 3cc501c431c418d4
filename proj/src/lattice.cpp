#include "dnls/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dnls/detail/kernels.hpp"
#include "dnls/error.hpp"

namespace dnls {

namespace {

void require_match(const LatticeWave& w, const ModelParams& p) {
  p.validate();
  if (w.size() != p.N)
    throw DimensionError("wave has " + std::to_string(w.size()) + " sites, parameters expect " +
                         std::to_string(p.N));
  if (w.bc() != p.bc) throw DimensionError("boundary condition of wave and parameters differ");
}

}  // namespace

std::string_view to_string(Boundary bc) { return bc == Boundary::Periodic ? "pbc" : "obc"; }

Boundary parse_boundary(std::string_view text) {
  if (text == "pbc" || text == "PBC" || text == "periodic") return Boundary::Periodic;
  if (text == "obc" || text == "OBC" || text == "open") return Boundary::Open;
  throw InvalidArgument("unknown boundary condition '" + std::string(text) + "'");
}

void ModelParams::validate() const {
  if (!std::isfinite(c) || !std::isfinite(E)) throw InvalidArgument("c and E must be finite");
  if (N < 1) throw InvalidArgument("lattice needs at least one site");
}

LatticeWave::LatticeWave(std::vector<double> values, Boundary bc) : values_(std::move(values)), bc_(bc) {
  if (values_.empty()) throw InvalidArgument("lattice needs at least one site");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidArgument("amplitudes must be finite");
}

LatticeWave LatticeWave::zeros(std::size_t n, Boundary bc) { return {std::vector<double>(n, 0.0), bc}; }

double LatticeWave::left(std::size_t i) const { return detail::left_of(values(), i, bc_); }
double LatticeWave::right(std::size_t i) const { return detail::right_of(values(), i, bc_); }

double LatticeWave::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

double LatticeWave::norm_squared() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

double LatticeWave::max_abs() const { return dnls::max_abs(values_); }

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double default_sum_epsilon(std::size_t n) { return 1e-8 * static_cast<double>(n); }

std::vector<double> residual(const LatticeWave& w, const ModelParams& p) {
  require_match(w, p);
  std::vector<double> r(w.size());
  detail::residual_into<double>(w.values(), w.bc(), p.c, p.E, r);
  return r;
}

double hamiltonian(const LatticeWave& w, const ModelParams& p) {
  require_match(w, p);
  const std::size_t n = w.size();
  double bonds = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = w[i] - w.right(i);
    bonds += d * d;
  }
  if (w.bc() == Boundary::Open) bonds += w[0] * w[0];  // bond to the vanishing site left of 0
  double quartic = 0.0;
  double quadratic = 0.0;
  for (double x : w.values()) {
    quartic += x * x * x * x;
    quadratic += x * x;
  }
  return bonds - 0.5 * p.c * quartic - p.E * quadratic;
}

std::vector<double> gradient(const LatticeWave& w, const ModelParams& p) {
  require_match(w, p);
  std::vector<double> g(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double x = w[i];
    // d/dpsi_i of the bond sum, written out from the two bonds touching i.
    const double bond = 2.0 * (x - w.left(i)) + 2.0 * (x - w.right(i));
    g[i] = bond - 2.0 * p.c * x * x * x - 2.0 * p.E * x;
  }
  return g;
}

std::pair<LatticeWave, double> stagger(const LatticeWave& w, double E) {
  std::vector<double> x(w.values().begin(), w.values().end());
  for (std::size_t i = 1; i < x.size(); i += 2) x[i] = -x[i];
  return {LatticeWave(std::move(x), w.bc()), 4.0 - E};
}

std::pair<LatticeWave, double> rescale(const LatticeWave& w, double c, double beta) {
  if (beta == 0.0 || !std::isfinite(beta)) throw InvalidScale("scale factor must be finite and nonzero");
  std::vector<double> x(w.values().begin(), w.values().end());
  for (double& v : x) v *= beta;
  return {LatticeWave(std::move(x), w.bc()), c / (beta * beta)};
}

NormalizedState normalize(const LatticeWave& w, double c) {
  const double s = w.norm_squared();
  if (!(s > 0.0)) throw CannotNormalize("zero state has no normalisation");
  const double inv = 1.0 / std::sqrt(s);
  std::vector<double> x(w.values().begin(), w.values().end());
  for (double& v : x) v *= inv;
  return {LatticeWave(std::move(x), w.bc()), c * s};
}

double limit_energy(int n, int m, int l, double c) {
  if (n < 1 || m < 0 || m > n || l < 0 || l > n)
    throw InvalidPattern("(n, m, l) = (" + std::to_string(n) + ", " + std::to_string(m) + ", " +
                         std::to_string(l) + ") violates 1 <= n, 0 <= m <= n, 0 <= l <= n");
  return (2.0 * m + 4.0 * l - c) / n;
}

double limit_hamiltonian(int n, double c) {
  if (n < 1) throw InvalidPattern("occupied-site count must be at least 1");
  return c / (2.0 * n);
}

double diagnostic_energy(const LatticeWave& w, double c, double eps_sum) {
  if (w.bc() != Boundary::Periodic)
    throw InvalidArgument("sum-weighted energy estimate requires periodic boundaries");
  if (eps_sum < 0.0) eps_sum = default_sum_epsilon(w.size());
  const double s = w.sum();
  if (std::abs(s) <= eps_sum)
    throw UndefinedDiagnostic("sum of amplitudes " + std::to_string(s) + " is below threshold");
  double cubes = 0.0;
  for (double x : w.values()) cubes += x * x * x;
  return -c * cubes / s;
}

TailDecay tail_decay(double E) {
  if (!(E < 0.0)) throw NoDecayingTail("decaying tails need E < 0");
  const double b = 2.0 - E;  // r + 1/r = b > 2
  // Smaller root of r^2 - b r + 1 = 0, written to avoid cancellation.
  const double r = 2.0 / (b + std::sqrt(b * b - 4.0));
  return {r, std::exp(-std::sqrt(-E))};
}

}  // namespace dnls
