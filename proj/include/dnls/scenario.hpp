#pragma once

// Declarative run descriptions.  A scenario file holds one `key = value` per
// line; '#' starts a comment.  The seed is either an explicit layout string
// ("+000000+...") or generated from spots and gap lengths.  Declared n, m, l
// are optional and only ever checked against the layout.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dnls/classify.hpp"
#include "dnls/lattice.hpp"
#include "dnls/newton.hpp"
#include "dnls/seed.hpp"

namespace dnls {

struct SeedSpec {
  std::optional<std::string> layout;
  std::size_t spots = 0;
  std::size_t spot_size = 1;
  std::vector<std::size_t> gaps;
  std::vector<int> signs{1};
  std::size_t offset = 0;
  std::optional<int> n, m, l;  // declared counts
};

struct Scenario {
  std::string name = "scenario";
  std::size_t N = 0;
  Boundary bc = Boundary::Periodic;
  SeedSpec seed;
  std::vector<double> c;
  std::optional<double> E0;  // empty: limit formula
  SolveConfig solver;
  ClassifyConfig classify;
  bool map_check = true;
  std::string note;
  std::string output;  // empty: caller decides

  // Builds the layout and checks it against N and any declared counts.
  // ConfigError names the offending key.
  SeedPattern pattern() const;
  double energy(double c_value) const;
  void validate() const;

  // Canonical key = value text; parse_scenario(to_text()) reproduces it.
  std::string to_text() const;
};

// Sets one key.  Unknown keys and malformed values throw ConfigError.
void apply_setting(Scenario& s, std::string_view key, std::string_view value);

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

// "29, 31, 32" or "start:stop:step" (inclusive of stop within rounding).
std::vector<double> parse_c_list(std::string_view text);

const std::vector<std::string>& builtin_names();
std::string builtin_text(std::string_view name);
Scenario builtin_scenario(std::string_view name);

}  // namespace dnls
