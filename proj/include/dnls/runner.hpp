#pragma once

// Executes scenarios: seed, solve, portrait, classification, optional map
// cross-check, CSV output and a JSON report.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dnls/classify.hpp"
#include "dnls/map.hpp"
#include "dnls/newton.hpp"
#include "dnls/precise.hpp"
#include "dnls/scenario.hpp"

namespace dnls {

struct RunRecord {
  std::string scenario;
  std::size_t N = 0;
  std::string bc;
  std::string layout;
  PatternCounts counts;
  double c = 0.0;
  double E0 = 0.0;
  Outcome outcome = Outcome::MaxIter;
  int iterations = 0;
  std::optional<int> structure_change_at;
  std::string message;
  std::optional<double> E_diag;
  std::optional<double> C;
  std::optional<double> H;
  std::optional<double> residual_inf;
  std::size_t clusters = 0;
  std::string portrait_class;
  std::string class_reason;
  double gap_ratio = 0.0;
  std::optional<ShootingCheck> map_check;
  std::string note;
  std::vector<std::string> files;

  bool ok() const noexcept { return outcome == Outcome::Converged || outcome == Outcome::StructureChanged; }
};

struct RunReport {
  std::vector<RunRecord> records;
  std::string report_path;

  bool all_ok() const;
};

struct RunOptions {
  std::filesystem::path output_root = "out";
  bool write_files = true;
  unsigned threads = 0;  // 0: hardware concurrency
};

// One record per coupling in s.c, in list order.  Solver failures are
// recorded, never dropped.  Throws ConfigError for an invalid scenario.
RunReport run_scenario(const Scenario& s, const RunOptions& opt = {});

// Runs several scenarios and writes one combined report.json in the root.
RunReport run_all(const std::vector<Scenario>& scenarios, const RunOptions& opt = {});

struct MapRun {
  Orbit orbit;
  PhasePortrait portrait;
  PortraitClass portrait_class;
  std::vector<std::string> files;
};

MapRun run_map(MapState s0, const ModelParams& p, std::size_t steps, double bound, const ClassifyConfig& cfg,
               const std::optional<std::filesystem::path>& output_dir);

// File paths are written relative to `relative_to` when it is given.
std::string report_json(const RunReport& report, const std::filesystem::path& relative_to = {});

}  // namespace dnls
