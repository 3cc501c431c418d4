#pragma once

// Lattice states and the stationary discrete nonlinear Schrodinger equation
//
//   -psi[i-1] + 2 psi[i] - psi[i+1] - c psi[i]^3 = E psi[i]
//
// together with its energy functional, scaling symmetry, the staggering
// duality, and closed forms that hold in the strong-coupling limit.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dnls {

enum class Boundary { Periodic, Open };

std::string_view to_string(Boundary bc);
Boundary parse_boundary(std::string_view text);

struct ModelParams {
  double c = 0.0;
  double E = 0.0;
  std::size_t N = 1;
  Boundary bc = Boundary::Periodic;

  // Throws InvalidArgument unless c, E are finite and N >= 1.
  void validate() const;
};

// Real amplitudes on a finite chain.  Immutable once built.
class LatticeWave {
 public:
  LatticeWave(std::vector<double> values, Boundary bc);

  static LatticeWave zeros(std::size_t n, Boundary bc);

  std::size_t size() const noexcept { return values_.size(); }
  Boundary bc() const noexcept { return bc_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  // Neighbour amplitudes.  Periodic chains wrap; open chains see zeros past
  // either end.
  double left(std::size_t i) const;
  double right(std::size_t i) const;

  double sum() const;
  double norm_squared() const;
  double max_abs() const;

 private:
  std::vector<double> values_;
  Boundary bc_;
};

// (psi_i, Z_i) with Z_i = psi_{i+1} - psi_i.
struct PhasePoint {
  double psi = 0.0;
  double Z = 0.0;
};

struct NormalizedState {
  LatticeWave psi;
  double C;  // physical coupling c * sum(psi^2) before normalisation
};

struct TailDecay {
  double discrete;   // root in (0,1) of r + 1/r = 2 - E
  double continuum;  // exp(-sqrt(-E))
};

// Default threshold below which sum(psi) counts as zero.
double default_sum_epsilon(std::size_t n);

std::vector<double> residual(const LatticeWave& w, const ModelParams& p);

// sum over bonds (psi_i - psi_{i+1})^2 - (c/2) sum psi^4 - E sum psi^2.
// Open chains include the two bonds to the vanishing sites beyond the ends,
// which keeps gradient == 2 * residual for both boundary conditions.
double hamiltonian(const LatticeWave& w, const ModelParams& p);

std::vector<double> gradient(const LatticeWave& w, const ModelParams& p);

// x_n = (-1)^n psi_n, e = 4 - E.  A solution at coupling c maps to a solution
// at coupling -c (the oscillator-lattice form of the equation).
std::pair<LatticeWave, double> stagger(const LatticeWave& w, double E);

// psi -> beta psi, c -> c / beta^2.
std::pair<LatticeWave, double> rescale(const LatticeWave& w, double c, double beta);

NormalizedState normalize(const LatticeWave& w, double c);

// Eigenvalue of an (n, m, l) localisation pattern as c -> infinity.
double limit_energy(int n, int m, int l, double c);

// Energy functional of an n-site pattern in the same limit: c / (2n).
double limit_hamiltonian(int n, double c);

// E = -c sum(psi^3) / sum(psi), exact for any periodic solution.
// eps_sum < 0 selects default_sum_epsilon(N).
double diagnostic_energy(const LatticeWave& w, double c, double eps_sum = -1.0);

// Tail ratios for the linearised equation far from a localisation centre.
TailDecay tail_decay(double E);

double max_abs(std::span<const double> v);

}  // namespace dnls
