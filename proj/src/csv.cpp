#include "dnls/csv.hpp"

#include <cmath>
#include <cstdio>

namespace dnls {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_wave(std::ostream& os, const LatticeWave& w) {
  os << "site,psi\n";
  for (std::size_t i = 0; i < w.size(); ++i) os << i << ',' << format_real(w[i]) << '\n';
}

void write_portrait(std::ostream& os, const PhasePortrait& portrait) {
  os << "psi,Z,cluster\n";
  const auto& labels = portrait.clustering.labels;
  for (std::size_t i = 0; i < portrait.points.size(); ++i) {
    os << format_real(portrait.points[i].psi) << ',' << format_real(portrait.points[i].Z) << ',';
    if (i < labels.size()) os << labels[i];
    os << '\n';
  }
}

void write_trace(std::ostream& os, const IterationTrace& trace) {
  os << "iter,E_m,delta_inf,residual_inf\n";
  for (const auto& r : trace.records)
    os << r.iter << ',' << (r.E_m ? format_real(*r.E_m) : std::string("nan")) << ',' << format_real(r.delta_inf)
       << ',' << format_real(r.residual_inf) << '\n';
}

void write_orbit(std::ostream& os, const Orbit& orbit) {
  os << "step,Z,psi\n";
  for (std::size_t k = 0; k < orbit.states.size(); ++k)
    os << k << ',' << format_real(orbit.states[k].Z) << ',' << format_real(orbit.states[k].psi) << '\n';
}

void write_correction(std::ostream& os, std::span<const double> p, std::span<const double> x) {
  os << "site,p,x\n";
  for (std::size_t i = 0; i < p.size() && i < x.size(); ++i)
    os << i << ',' << format_real(p[i]) << ',' << format_real(x[i]) << '\n';
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file(path, [&](std::ostream& os) { os << text; });
}

}  // namespace dnls
