#include "dnls/seed.hpp"

#include <cmath>
#include <string>

#include "dnls/error.hpp"

namespace dnls {

namespace {

std::string counts_text(PatternCounts c) {
  return "(n, m, l) = (" + std::to_string(c.n) + ", " + std::to_string(c.m) + ", " + std::to_string(c.l) + ")";
}

}  // namespace

PatternCounts count_pattern(std::span<const int> layout, Boundary bc) {
  const std::size_t size = layout.size();
  PatternCounts out;
  for (int v : layout)
    if (v != 0) ++out.n;
  if (size == 0 || out.n == 0) return out;

  const bool periodic = bc == Boundary::Periodic;
  if (periodic && static_cast<std::size_t>(out.n) == size) {
    out.m = 0;
  } else {
    for (std::size_t i = 0; i < size; ++i) {
      if (layout[i] == 0) continue;
      const bool starts_run = i == 0 ? !periodic || layout[size - 1] == 0 : layout[i - 1] == 0;
      if (starts_run) ++out.m;
    }
  }

  // Bonds i -> i+1; periodic rings include the closing bond.  A one-site ring
  // bonds to itself and never changes sign.
  const std::size_t bonds = periodic ? size : size - 1;
  for (std::size_t i = 0; i < bonds; ++i) {
    const int a = layout[i];
    const int b = layout[(i + 1) % size];
    if (a != 0 && b != 0 && a != b) ++out.l;
  }
  return out;
}

SeedPattern::SeedPattern(std::vector<int> layout, Boundary bc) : layout_(std::move(layout)), bc_(bc) {
  if (layout_.empty()) throw InvalidPattern("layout is empty");
  for (int v : layout_)
    if (v != 0 && v != 1 && v != -1) throw InvalidPattern("layout entries must be 0, +1 or -1");
  counts_ = count_pattern(layout_, bc_);
  if (counts_.n < 1) throw InvalidPattern("layout has no occupied site");
}

SeedPattern::SeedPattern(std::vector<int> layout, Boundary bc, PatternCounts declared)
    : SeedPattern(std::move(layout), bc) {
  if (declared != counts_)
    throw InvalidPattern("declared " + counts_text(declared) + " but layout gives " + counts_text(counts_));
}

SeedPattern SeedPattern::parse(std::string_view text, Boundary bc) {
  std::vector<int> layout;
  layout.reserve(text.size());
  for (char ch : text) {
    switch (ch) {
      case '+': layout.push_back(1); break;
      case '-': layout.push_back(-1); break;
      case '0':
      case '.': layout.push_back(0); break;
      case ' ':
      case '\t': break;
      default: throw InvalidPattern(std::string("unexpected layout character '") + ch + "'");
    }
  }
  return SeedPattern(std::move(layout), bc);
}

std::string SeedPattern::to_string() const {
  std::string s;
  s.reserve(layout_.size());
  for (int v : layout_) s.push_back(v > 0 ? '+' : v < 0 ? '-' : '0');
  return s;
}

double SeedPattern::limit_energy(double c) const { return dnls::limit_energy(counts_.n, counts_.m, counts_.l, c); }

LatticeWave build_seed(const SeedPattern& pattern, std::size_t N, Boundary bc) {
  if (pattern.size() != N)
    throw InvalidPattern("layout has " + std::to_string(pattern.size()) + " entries, lattice has " +
                         std::to_string(N));
  if (pattern.bc() != bc) throw InvalidPattern("layout was counted under a different boundary condition");
  const double amp = 1.0 / std::sqrt(static_cast<double>(pattern.n()));
  std::vector<double> values(N);
  for (std::size_t i = 0; i < N; ++i) values[i] = pattern.layout()[i] * amp;
  return {std::move(values), bc};
}

SeedPattern infer_pattern(const LatticeWave& w, double rel_threshold) {
  const double cut = rel_threshold * w.max_abs();
  if (!(cut > 0.0)) throw InvalidPattern("zero state has no localisation pattern");
  std::vector<int> layout(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (std::abs(w[i]) > cut) layout[i] = w[i] > 0 ? 1 : -1;
  }
  return SeedPattern(std::move(layout), w.bc());
}

std::vector<int> spot_layout(std::size_t N, std::size_t spots, std::size_t spot_size,
                             std::span<const std::size_t> gaps, std::span<const int> signs,
                             std::size_t offset) {
  if (spots == 0 || spot_size == 0) throw InvalidPattern("need at least one spot of at least one site");
  if (gaps.empty()) throw InvalidPattern("gap list is empty");
  std::size_t total = 0;
  for (std::size_t k = 0; k < spots; ++k) total += spot_size + gaps[k % gaps.size()];
  if (total != N)
    throw InvalidPattern("spots and gaps cover " + std::to_string(total) + " sites, lattice has " +
                         std::to_string(N));
  std::vector<int> layout(N, 0);
  std::size_t pos = offset % N;
  std::size_t occupied = 0;
  for (std::size_t k = 0; k < spots; ++k) {
    for (std::size_t j = 0; j < spot_size; ++j) {
      const int sign = signs.empty() ? 1 : signs[occupied % signs.size()];
      if (sign != 1 && sign != -1) throw InvalidPattern("signs must be +1 or -1");
      layout[pos] = sign;
      ++occupied;
      pos = (pos + 1) % N;
    }
    pos = (pos + gaps[k % gaps.size()]) % N;
  }
  return layout;
}

}  // namespace dnls
