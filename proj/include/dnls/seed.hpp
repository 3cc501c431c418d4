#pragma once

// Strong-coupling localisation patterns.  A layout entry is 0 (empty site),
// +1 or -1; occupied sites carry amplitude +-1/sqrt(n).  The counts (n, m, l)
// are always derived from the layout:
//   n  occupied sites
//   m  spots, i.e. maximal runs of occupied sites (0 for a fully occupied ring)
//   l  bonds joining two occupied sites of opposite sign

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dnls/lattice.hpp"

namespace dnls {

struct PatternCounts {
  int n = 0;
  int m = 0;
  int l = 0;
  friend bool operator==(const PatternCounts&, const PatternCounts&) = default;
};

PatternCounts count_pattern(std::span<const int> layout, Boundary bc);

class SeedPattern {
 public:
  // Throws InvalidPattern for entries outside {0, +1, -1} or an empty layout.
  SeedPattern(std::vector<int> layout, Boundary bc);

  // Like the two-argument form, but also checks declared counts against the
  // layout.
  SeedPattern(std::vector<int> layout, Boundary bc, PatternCounts declared);

  // "+000-+" style text; '.' is accepted for an empty site.
  static SeedPattern parse(std::string_view text, Boundary bc);

  int n() const noexcept { return counts_.n; }
  int m() const noexcept { return counts_.m; }
  int l() const noexcept { return counts_.l; }
  PatternCounts counts() const noexcept { return counts_; }
  std::span<const int> layout() const noexcept { return layout_; }
  std::size_t size() const noexcept { return layout_.size(); }
  Boundary bc() const noexcept { return bc_; }

  std::string to_string() const;

  // Limit eigenvalue (2m + 4l - c)/n of this pattern.
  double limit_energy(double c) const;

 private:
  std::vector<int> layout_;
  Boundary bc_;
  PatternCounts counts_;
};

LatticeWave build_seed(const SeedPattern& pattern, std::size_t N, Boundary bc);

// Sign layout of a state: sites with |psi| above rel_threshold * max|psi|
// count as occupied.
SeedPattern infer_pattern(const LatticeWave& w, double rel_threshold = 0.5);

// Spots of spot_size sites separated by gaps[k % gaps.size()] empty sites,
// starting at offset.  Signs are applied to occupied sites cyclically.
// Throws InvalidPattern unless the spots and gaps fill exactly N sites.
std::vector<int> spot_layout(std::size_t N, std::size_t spots, std::size_t spot_size,
                             std::span<const std::size_t> gaps, std::span<const int> signs,
                             std::size_t offset = 0);

}  // namespace dnls
