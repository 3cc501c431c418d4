#pragma once

// Fixed-format CSV output.  Every real is printed with 17 significant digits
// so identical runs give byte-identical files and values round-trip exactly.

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include "dnls/classify.hpp"
#include "dnls/lattice.hpp"
#include "dnls/map.hpp"
#include "dnls/newton.hpp"

namespace dnls {

// "%.17g"; non-finite values print as nan, inf or -inf.
std::string format_real(double v);

void write_wave(std::ostream& os, const LatticeWave& w);                          // site,psi
void write_portrait(std::ostream& os, const PhasePortrait& portrait);             // psi,Z,cluster
void write_trace(std::ostream& os, const IterationTrace& trace);                  // iter,E_m,delta_inf,residual_inf
void write_orbit(std::ostream& os, const Orbit& orbit);                           // step,Z,psi
void write_correction(std::ostream& os, std::span<const double> p, std::span<const double> x);  // site,p,x

// Writes through a callback into path, creating parent directories.  Throws
// Error when the file cannot be written.
template <class Fn>
void write_file(const std::filesystem::path& path, Fn&& fn);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace dnls

#include <fstream>

#include "dnls/error.hpp"

namespace dnls {

template <class Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  fn(os);
  os.flush();
  if (!os) throw Error("failed writing " + path.string());
}

}  // namespace dnls
