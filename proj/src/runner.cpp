#include "dnls/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>

#include "dnls/csv.hpp"
#include "dnls/error.hpp"
#include "dnls/perturbation.hpp"
#include "json.hpp"

namespace dnls {

namespace {

using json = nlohmann::ordered_json;

std::string c_dir_name(double c) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "c_%.10g", c);
  return buf;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string summary_text(const RunRecord& r) {
  std::ostringstream os;
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string("undefined"); };
  os << "scenario = " << r.scenario << '\n'
     << "N = " << r.N << '\n'
     << "bc = " << r.bc << '\n'
     << "layout = " << r.layout << '\n'
     << "n = " << r.counts.n << '\n'
     << "m = " << r.counts.m << '\n'
     << "l = " << r.counts.l << '\n'
     << "c = " << format_real(r.c) << '\n'
     << "E0 = " << format_real(r.E0) << '\n'
     << "outcome = " << to_string(r.outcome) << '\n'
     << "iterations = " << r.iterations << '\n';
  if (r.structure_change_at) os << "structure_change_at = " << *r.structure_change_at << '\n';
  os << "E_diag = " << opt(r.E_diag) << '\n'
     << "C = " << opt(r.C) << '\n'
     << "H = " << opt(r.H) << '\n'
     << "residual_inf = " << opt(r.residual_inf) << '\n'
     << "clusters = " << r.clusters << '\n'
     << "class = " << r.portrait_class << '\n'
     << "class_reason = " << r.class_reason << '\n';
  if (r.map_check) {
    os << "map_digits = " << r.map_check->digits << '\n'
       << "map_error = " << format_real(r.map_check->shot_error) << '\n'
       << "map_error_double = " << format_real(r.map_check->double_error) << '\n';
  }
  if (!r.message.empty()) os << "message = " << r.message << '\n';
  if (!r.note.empty()) os << "note = " << r.note << '\n';
  return os.str();
}

RunRecord run_one(const Scenario& s, const SeedPattern& pattern, double c, const std::filesystem::path& dir,
                  bool write_files) {
  RunRecord r;
  r.scenario = s.name;
  r.N = s.N;
  r.bc = std::string(to_string(s.bc));
  r.layout = pattern.to_string();
  r.counts = pattern.counts();
  r.c = c;
  r.note = s.note;
  r.E0 = s.energy(c);

  const LatticeWave seed = build_seed(pattern, s.N, s.bc);
  const ModelParams p{c, r.E0, s.N, s.bc};
  const SolveResult res = solve(seed, p, s.solver);
  r.outcome = res.trace.outcome;
  r.iterations = static_cast<int>(res.trace.records.size());
  r.structure_change_at = res.trace.structure_change_at;
  r.message = res.trace.message;

  std::optional<PhasePortrait> portrait;
  std::optional<Orbit> orbit;
  if (res.state) {
    const ConvergedState& st = *res.state;
    r.E_diag = st.E_diag;
    r.C = st.C;
    r.H = st.H;
    r.residual_inf = max_abs(residual(st.psi, p));
    portrait = build_portrait(st.psi, r.E0, s.classify);
    const PortraitClass cls = classify(*portrait, s.classify);
    r.clusters = portrait->clustering.clusters.size();
    r.portrait_class = to_string(cls);
    r.class_reason = cls.reason;
    r.gap_ratio = cls.gap_ratio;
    if (s.map_check) {
      r.map_check = shooting_check(st.psi, p);
      orbit = shoot(st.psi, p);
    }
  } else {
    r.portrait_class = "Unsolved";
    r.class_reason = "no converged state";
  }

  std::optional<std::vector<double>> correction;
  try {
    correction = solve_system(build_system(seed, r.E0, c));
  } catch (const NearDegenerate&) {
    // The first-order system is singular at this seed; nothing to write.
  }

  if (!write_files) return r;
  auto emit = [&](const std::string& file, auto&& fn) {
    const auto path = dir / file;
    write_file(path, fn);
    r.files.push_back(path.string());
  };
  emit("wave.csv", [&](std::ostream& os) { write_wave(os, res.state ? res.state->psi : res.last); });
  emit("trace.csv", [&](std::ostream& os) { write_trace(os, res.trace); });
  if (portrait) emit("portrait.csv", [&](std::ostream& os) { write_portrait(os, *portrait); });
  if (correction) emit("correction.csv", [&](std::ostream& os) { write_correction(os, seed.values(), *correction); });
  if (orbit) emit("orbit.csv", [&](std::ostream& os) { write_orbit(os, *orbit); });
  const auto summary = dir / "summary.txt";
  r.files.push_back(summary.string());
  write_text(summary, summary_text(r));
  return r;
}

json record_json(const RunRecord& r, const std::filesystem::path& base) {
  json j;
  j["scenario"] = r.scenario;
  j["N"] = r.N;
  j["bc"] = r.bc;
  j["layout"] = r.layout;
  j["n"] = r.counts.n;
  j["m"] = r.counts.m;
  j["l"] = r.counts.l;
  j["c"] = r.c;
  j["E0"] = r.E0;
  j["outcome"] = std::string(to_string(r.outcome));
  j["iterations"] = r.iterations;
  j["structure_change_at"] = r.structure_change_at ? json(*r.structure_change_at) : json(nullptr);
  j["E_diag"] = optional_number(r.E_diag);
  j["C"] = optional_number(r.C);
  j["H"] = optional_number(r.H);
  j["residual_inf"] = optional_number(r.residual_inf);
  j["clusters"] = r.clusters;
  j["class"] = r.portrait_class;
  j["class_reason"] = r.class_reason;
  j["gap_ratio"] = r.gap_ratio;
  if (r.map_check) {
    j["map_check"] = {{"digits", r.map_check->digits},
                      {"max_error", r.map_check->shot_error},
                      {"max_error_double", r.map_check->double_error},
                      {"growth_log10", r.map_check->growth_log10}};
  } else {
    j["map_check"] = nullptr;
  }
  j["message"] = r.message;
  j["note"] = r.note;
  j["files"] = json::array();
  for (const auto& f : r.files)
    j["files"].push_back(base.empty() ? f : std::filesystem::path(f).lexically_relative(base).generic_string());
  return j;
}

void write_report(RunReport& report, const std::filesystem::path& path) {
  write_text(path, report_json(report, path.parent_path()));
  report.report_path = path.string();
}

}  // namespace

bool RunReport::all_ok() const {
  return std::all_of(records.begin(), records.end(), [](const RunRecord& r) { return r.ok(); });
}

std::string report_json(const RunReport& report, const std::filesystem::path& relative_to) {
  json j;
  j["all_ok"] = report.all_ok();
  j["runs"] = json::array();
  for (const auto& r : report.records) j["runs"].push_back(record_json(r, relative_to));
  return j.dump(2) + "\n";
}

RunReport run_scenario(const Scenario& s, const RunOptions& opt) {
  s.validate();
  const SeedPattern pattern = s.pattern();
  const std::filesystem::path base = opt.output_root / s.name;

  RunReport report;
  report.records.resize(s.c.size());
  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(s.c.size()));

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(s.c.size());
  auto worker = [&]() {
    for (std::size_t k; (k = next.fetch_add(1)) < s.c.size();) {
      try {
        report.records[k] = run_one(s, pattern, s.c[k], base / c_dir_name(s.c[k]), opt.write_files);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  if (opt.write_files) write_report(report, base / "report.json");
  return report;
}

RunReport run_all(const std::vector<Scenario>& scenarios, const RunOptions& opt) {
  RunReport all;
  for (const auto& s : scenarios) {
    RunReport one = run_scenario(s, opt);
    all.records.insert(all.records.end(), one.records.begin(), one.records.end());
  }
  if (opt.write_files) write_report(all, opt.output_root / "report.json");
  return all;
}

MapRun run_map(MapState s0, const ModelParams& p, std::size_t steps, double bound, const ClassifyConfig& cfg,
               const std::optional<std::filesystem::path>& output_dir) {
  MapRun out;
  out.orbit = iterate(s0, p, steps, bound);
  out.portrait = orbit_portrait(out.orbit, p.E, cfg);
  out.portrait_class = classify(out.portrait, cfg);
  if (output_dir) {
    const auto orbit_path = *output_dir / "orbit.csv";
    write_file(orbit_path, [&](std::ostream& os) { write_orbit(os, out.orbit); });
    out.files.push_back(orbit_path.string());
    const auto portrait_path = *output_dir / "portrait.csv";
    write_file(portrait_path, [&](std::ostream& os) { write_portrait(os, out.portrait); });
    out.files.push_back(portrait_path.string());

    json j;
    j["c"] = p.c;
    j["E"] = p.E;
    j["Z0"] = s0.Z;
    j["psi0"] = s0.psi;
    j["steps"] = steps;
    j["bound"] = bound;
    j["status"] = out.orbit.diverged() ? "diverged" : "completed";
    j["diverged_at"] = out.orbit.diverged() ? json(out.orbit.diverged_at) : json(nullptr);
    j["states"] = out.orbit.states.size();
    j["clusters"] = out.portrait.clustering.clusters.size();
    j["class"] = to_string(out.portrait_class);
    j["class_reason"] = out.portrait_class.reason;
    j["files"] = {"orbit.csv", "portrait.csv"};
    write_text(*output_dir / "report.json", j.dump(2) + "\n");
  }
  return out;
}

}  // namespace dnls
