// dnls: stationary states of the discrete nonlinear Schrodinger lattice.
//
//   dnls solve fig1                      built-in scenario
//   dnls solve my.scn --set c=12         scenario file with an override
//   dnls sweep fig4 --c 29,31,32,36,84   one run per coupling, in parallel
//   dnls figures                         all built-in scenarios
//   dnls map --c 1 --E -1 --psi0 1.01    iterate the map from one state
//   dnls verify                          cross-method consistency battery
//
// Exit status: 0 ok, 1 solver or check failures, 2 configuration error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dnls/csv.hpp"
#include "dnls/error.hpp"
#include "dnls/runner.hpp"
#include "dnls/scenario.hpp"
#include "dnls/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailures = 1;
constexpr int kConfig = 2;

std::string default_output() {
  if (const char* env = std::getenv("DNLS_OUTPUT_DIR"); env && *env) return env;
  return "dnls_out";
}

dnls::Scenario resolve_scenario(const std::string& what) {
  if (std::filesystem::is_regular_file(what)) return dnls::load_scenario(what);
  for (const auto& name : dnls::builtin_names())
    if (name == what) return dnls::builtin_scenario(name);
  throw dnls::ConfigError("scenario", "'" + what + "' is neither a file nor a built-in scenario");
}

void apply_overrides(dnls::Scenario& s, const std::vector<std::string>& sets, const std::string& c_list) {
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw dnls::ConfigError(kv, "overrides are written key=value");
    dnls::apply_setting(s, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!c_list.empty()) s.c = dnls::parse_c_list(c_list);
}

void print_record(const dnls::RunRecord& r) {
  std::cout << r.scenario << "  c=" << dnls::format_real(r.c) << "  E0=" << dnls::format_real(r.E0) << "  "
            << dnls::to_string(r.outcome) << " after " << r.iterations << " iterations";
  if (r.E_diag) std::cout << "  E_diag=" << dnls::format_real(*r.E_diag);
  if (r.ok()) std::cout << "  clusters=" << r.clusters << "  class=" << r.portrait_class;
  if (r.map_check) std::cout << "  map_error=" << dnls::format_real(r.map_check->shot_error);
  std::cout << '\n';
  if (!r.ok() && !r.message.empty()) std::cout << "    " << r.message << '\n';
  if (!r.note.empty()) std::cout << "    note: " << r.note << '\n';
}

int report_runs(const dnls::RunReport& rep) {
  for (const auto& r : rep.records) print_record(r);
  if (!rep.report_path.empty()) std::cout << "report: " << rep.report_path << '\n';
  return rep.all_ok() ? kOk : kFailures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary states of the discrete nonlinear Schrodinger lattice"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string output = default_output();
  unsigned threads = 0;
  app.add_option("-o,--output", output, "Output directory (default $DNLS_OUTPUT_DIR or ./dnls_out)");
  app.add_option("-j,--threads", threads, "Worker threads for sweeps (0: all cores)");

  std::string scenario_arg;
  std::vector<std::string> sets;
  std::string c_list;

  auto* solve = app.add_subcommand("solve", "Run one scenario (file or built-in name)");
  solve->add_option("scenario", scenario_arg, "Scenario file or built-in name")->required();
  solve->add_option("-s,--set", sets, "Override a scenario key, key=value");
  solve->add_option("--c", c_list, "Coupling list or start:stop:step range");

  auto* sweep = app.add_subcommand("sweep", "Run a scenario over a list of couplings");
  sweep->add_option("scenario", scenario_arg, "Scenario file or built-in name")->required();
  sweep->add_option("-s,--set", sets, "Override a scenario key, key=value");
  sweep->add_option("--c", c_list, "Coupling list or start:stop:step range")->required();

  auto* figures = app.add_subcommand("figures", "Run every built-in scenario");
  figures->add_option("-s,--set", sets, "Override a key in every scenario, key=value");

  double map_c = 1.0, map_E = -1.0, map_Z0 = 0.0, map_psi0 = 0.0, map_bound = 1e8;
  std::size_t map_steps = 1000;
  bool map_write = true;
  auto* map = app.add_subcommand("map", "Iterate the two-dimensional map");
  map->add_option("--c", map_c, "Coupling c")->required();
  map->add_option("--E", map_E, "Energy parameter E")->required();
  map->add_option("--Z0", map_Z0, "Initial Z")->capture_default_str();
  map->add_option("--psi0", map_psi0, "Initial psi")->capture_default_str();
  map->add_option("--steps", map_steps, "Number of steps")->capture_default_str();
  map->add_option("--bound", map_bound, "Divergence bound")->capture_default_str();
  map->add_flag("!--no-files", map_write, "Print the summary only, write no files");

  double two_site_tol = 1e-12;
  auto* verify = app.add_subcommand("verify", "Run the consistency battery");
  verify->add_option("--two-site-tol", two_site_tol, "Residual tolerance for the two-site solutions")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  dnls::RunOptions ro;
  ro.output_root = output;
  ro.threads = threads;

  try {
    if (*solve || *sweep) {
      dnls::Scenario s = resolve_scenario(scenario_arg);
      apply_overrides(s, sets, c_list);
      if (!s.output.empty()) ro.output_root = s.output;
      return report_runs(dnls::run_scenario(s, ro));
    }
    if (*figures) {
      std::vector<dnls::Scenario> all;
      for (const auto& name : dnls::builtin_names()) {
        all.push_back(dnls::builtin_scenario(name));
        apply_overrides(all.back(), sets, "");
      }
      return report_runs(dnls::run_all(all, ro));
    }
    if (*map) {
      const dnls::ModelParams p{map_c, map_E, 1, dnls::Boundary::Periodic};
      p.validate();
      std::optional<std::filesystem::path> dir;
      if (map_write) dir = std::filesystem::path(output) / "map";
      const auto run = dnls::run_map({map_Z0, map_psi0}, p, map_steps, map_bound, {}, dir);
      std::cout << "map c=" << dnls::format_real(map_c) << " E=" << dnls::format_real(map_E) << "  "
                << (run.orbit.diverged() ? "diverged at step " + std::to_string(run.orbit.diverged_at)
                                         : std::string("completed"))
                << "  states=" << run.orbit.states.size() << "  clusters=" << run.portrait.clustering.clusters.size()
                << "  class=" << dnls::to_string(run.portrait_class) << '\n';
      for (const auto& f : run.files) std::cout << "wrote " << f << '\n';
      return run.orbit.diverged() ? kFailures : kOk;
    }
    if (*verify) {
      dnls::VerifyOptions vo;
      vo.two_site_tol = two_site_tol;
      const auto results = dnls::verify_suite(vo);
      dnls::print_table(std::cout, results);
      return dnls::all_passed(results) ? kOk : kFailures;
    }
  } catch (const dnls::ConfigError& e) {
    std::cerr << "dnls: " << e.what() << '\n';
    return kConfig;
  } catch (const dnls::InvalidArgument& e) {
    std::cerr << "dnls: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "dnls: " << e.what() << '\n';
    return kFailures;
  }
  return kOk;
}
