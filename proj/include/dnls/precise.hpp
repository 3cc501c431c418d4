#pragma once

// Shooting a lattice solution through the map amplifies any error in the
// starting data by the norm of the transfer-matrix product, which grows
// exponentially along localised states (1e20 or more on a hundred sites is
// common).  These checks therefore polish the solution with Newton in
// extended precision first, then shoot the map at that precision.

#include <cstddef>

#include "dnls/lattice.hpp"

namespace dnls {

// log10 of the largest running transfer-matrix product norm along the
// chain, i.e. the worst amplification of an error in (Z_0, psi_0).
double shooting_growth(const LatticeWave& w, const ModelParams& p);

struct ShootingCheck {
  int digits = 0;              // decimal digits used
  int newton_iterations = 0;   // extended-precision polishing steps
  double polished_residual = 0.0;
  double polish_shift = 0.0;   // max |polished - input|
  double shot_error = 0.0;     // max |map orbit - input| over sites 1..N-1
  double double_error = 0.0;   // same, shooting in plain double precision
  double growth_log10 = 0.0;
};

// Chooses 50, 100, 200 or 400 digits from shooting_growth.  Periodic or open
// chains; open chains start from the vanishing site left of 0.
ShootingCheck shooting_check(const LatticeWave& w, const ModelParams& p);

}  // namespace dnls
