#include "dnls/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "dnls/classify.hpp"
#include "dnls/detail/kernels.hpp"
#include "dnls/error.hpp"
#include "dnls/map.hpp"
#include "dnls/newton.hpp"
#include "dnls/precise.hpp"
#include "dnls/runner.hpp"
#include "dnls/scenario.hpp"
#include "dnls/seed.hpp"

namespace dnls {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Sign layouts on a ring with the first occupied site positive and every run
// of empty sites at least min_gap long (a fully occupied ring also counts).
std::vector<std::vector<int>> ring_layouts(std::size_t N, std::size_t min_gap) {
  std::vector<std::vector<int>> out;
  std::vector<int> v(N, 0);
  std::size_t total = 1;
  for (std::size_t i = 0; i < N; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t x = code;
    for (std::size_t i = 0; i < N; ++i, x /= 3) v[i] = static_cast<int>(x % 3) - 1;
    const auto first = std::find_if(v.begin(), v.end(), [](int s) { return s != 0; });
    if (first == v.end() || *first < 0) continue;
    const auto zeros = static_cast<std::size_t>(std::count(v.begin(), v.end(), 0));
    bool ok = true;
    if (zeros > 0) {
      // Walk the ring from an occupied site and measure every empty run.
      const std::size_t start = static_cast<std::size_t>(first - v.begin());
      std::size_t run = 0;
      for (std::size_t k = 1; k <= N && ok; ++k) {
        if (v[(start + k) % N] == 0) {
          ++run;
        } else {
          if (run > 0 && run < min_gap) ok = false;
          run = 0;
        }
      }
    }
    if (ok) out.push_back(v);
  }
  return out;
}

// E from multiplying the equation by psi and summing; defined for any
// non-zero state.
double rayleigh_energy(const LatticeWave& w, double c) {
  double bonds = 0.0, quartic = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    bonds += w[i] * (2.0 * w[i] - w.left(i) - w.right(i));
    quartic += w[i] * w[i] * w[i] * w[i];
  }
  return (bonds - c * quartic) / w.norm_squared();
}

// Gauss-Jordan elimination with full pivoting, kept apart from the library
// solvers so the comparison is between two different algorithms.
std::vector<double> gauss_jordan(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  std::vector<std::size_t> col(n);
  for (std::size_t i = 0; i < n; ++i) col[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pr = k, pc = k;
    for (std::size_t r = k; r < n; ++r)
      for (std::size_t c = k; c < n; ++c)
        if (std::abs(a[r][c]) > std::abs(a[pr][pc])) pr = r, pc = c;
    std::swap(a[k], a[pr]);
    std::swap(b[k], b[pr]);
    for (auto& row : a) std::swap(row[k], row[pc]);
    std::swap(col[k], col[pc]);
    const double piv = a[k][k];
    for (std::size_t c = 0; c < n; ++c) a[k][c] /= piv;
    b[k] /= piv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == k || a[r][k] == 0.0) continue;
      const double f = a[r][k];
      for (std::size_t c = 0; c < n; ++c) a[r][c] -= f * a[k][c];
      b[r] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[col[i]] = b[i];
  return x;
}

std::vector<std::vector<double>> dense_operator(const CorrectionSystem& sys) {
  const std::size_t n = sys.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] += sys.diag[i];
    if (i > 0) a[i][i - 1] -= 1.0;
    else if (sys.bc == Boundary::Periodic) a[i][n - 1] -= 1.0;
    if (i + 1 < n) a[i][i + 1] -= 1.0;
    else if (sys.bc == Boundary::Periodic) a[i][0] -= 1.0;
  }
  return a;
}

std::optional<LatticeWave> solve_ok(const LatticeWave& seed, const ModelParams& p) {
  const SolveResult r = solve(seed, p);
  if (!r.state) return std::nullopt;
  return r.state->psi;
}

CheckResult check_surds() {
  CheckResult r{2, "surd expansions at c = 100", true, ""};
  const double c = 100.0;
  const auto [large, small] = surd_exact(c);
  static constexpr double next_large[] = {-2.0, -10.0, -84.0, -858.0};
  static constexpr double next_small[] = {4.0, 28.0, 264.0, 2860.0};
  double worst = 0.0;
  for (int t = 1; t <= 4; ++t) {
    const auto [sl, ss] = surd_series(c, t);
    const double nl = std::abs(next_large[t - 1]) * std::pow(c, -2.0 * t);
    const double ns = std::abs(next_small[t - 1]) * std::pow(c, -2.0 * t - 1.0);
    const double el = std::abs(sl - large), es = std::abs(ss - small);
    worst = std::max({worst, el / nl, es / ns});
    if (el > 10.0 * nl || es > 10.0 * ns) r.pass = false;
  }
  r.detail = "worst error / next term = " + fmt("%.3g", worst) + " (limit 10)";
  return r;
}

CheckResult check_spectrum() {
  CheckResult r{3, "limit spectrum and energy functional, N = 6, 8, 12, c = 100", true, ""};
  const double c = 100.0;
  std::size_t count = 0, failures = 0, rayleigh_used = 0;
  double worst_E = 0.0, worst_H = 0.0;
  for (std::size_t N : {6u, 8u, 12u}) {
    for (const auto& layout : ring_layouts(N, 3)) {
      ++count;
      const SeedPattern pat(layout, Boundary::Periodic);
      const double E0 = pat.limit_energy(c);
      const ModelParams p{c, E0, N, Boundary::Periodic};
      const auto psi = solve_ok(build_seed(pat, N, Boundary::Periodic), p);
      if (!psi) {
        ++failures;
        continue;
      }
      double E;
      try {
        E = diagnostic_energy(*psi, c);
      } catch (const UndefinedDiagnostic&) {
        E = rayleigh_energy(*psi, c);
        ++rayleigh_used;
      }
      const double H0 = limit_hamiltonian(pat.n(), c);
      const double dE = std::abs(E - E0);
      const double dH = std::abs(hamiltonian(*psi, p) - H0) / H0;
      worst_E = std::max(worst_E, dE);
      worst_H = std::max(worst_H, dH * c);
      if (!(dE < 1e-8) || !(dH <= 5.0 / c)) ++failures;
    }
  }
  r.pass = failures == 0;
  r.detail = std::to_string(count) + " layouts, " + std::to_string(failures) + " failures; max |dE| " +
             fmt("%.2e", worst_E) + ", max c*dH/H " + fmt("%.3g", worst_H) + " (" + std::to_string(rayleigh_used) +
             " zero-sum states checked through the Rayleigh quotient)";
  return r;
}

CheckResult check_area_and_window(std::mt19937_64& rng) {
  CheckResult r{5, "area preservation and fixed-point stability window", true, ""};
  std::uniform_real_distribution<double> psi_d(-2.0, 2.0), E_d(-5.0, 5.0), c_d(-50.0, 50.0);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const ModelParams p{c_d(rng), E_d(rng), 1, Boundary::Periodic};
    const double psi = psi_d(rng);
    worst = std::max({worst, std::abs(step_jacobian(psi, p).det() - 1.0), std::abs(jacobian_at(psi, p).det() - 1.0)});
  }
  if (!(worst < 1e-12)) r.pass = false;

  // Nontrivial fixed point along E, with the sign of c chosen so it exists.
  std::size_t wrong = 0;
  auto nontrivial = [](double E) -> std::optional<FixedPoint> {
    const ModelParams p{E < 0 ? 1.0 : -1.0, E, 1, Boundary::Periodic};
    const auto fps = fixed_points(p);
    if (fps.size() < 2) return std::nullopt;
    return fps[1];
  };
  for (int k = -3000; k <= 1000; ++k) {
    const double E = k * 1e-3 + 1e-7;
    const auto fp = nontrivial(E);
    if (!fp) {
      ++wrong;
      continue;
    }
    const bool expect = std::abs(2.0 + 2.0 * E) - 2.0 < 0.0;
    if ((fp->stability == Stability::Stable) != expect) ++wrong;
  }
  for (double edge : {-2.0, 0.0}) {
    for (double d : {1e-9, 1e-6}) {
      const auto inside = nontrivial(edge == 0.0 ? -d : edge + d);
      const auto outside = nontrivial(edge == 0.0 ? d : edge - d);
      if (!inside || !outside || inside->stability != Stability::Stable ||
          outside->stability != Stability::Unstable)
        ++wrong;
    }
  }
  if (const auto m = nontrivial(-2.0); !m || m->stability != Stability::Marginal) ++wrong;
  if (wrong) r.pass = false;
  r.detail = "max |det - 1| = " + fmt("%.2e", worst) + " over 10^4 states; " + std::to_string(wrong) +
             " misclassified window points";
  return r;
}

CheckResult check_linear_solver(std::mt19937_64& rng, const A1Table& table) {
  CheckResult r{6, "linear solve against elimination, closed forms against linear solve", true, ""};
  std::uniform_int_distribution<int> size_d(1, 8), bc_d(0, 1), sign_d(0, 1);
  std::uniform_real_distribution<double> mag_d(2.5, 8.0), f_d(-1.0, 1.0);
  double worst = 0.0;
  for (int draw = 0; draw < 200; ++draw) {
    CorrectionSystem sys;
    const auto n = static_cast<std::size_t>(size_d(rng));
    sys.bc = bc_d(rng) ? Boundary::Periodic : Boundary::Open;
    for (std::size_t i = 0; i < n; ++i) {
      sys.diag.push_back(mag_d(rng) * (sign_d(rng) ? 1.0 : -1.0));
      sys.F.push_back(f_d(rng));
    }
    const auto x = solve_system(sys);
    const auto ref = gauss_jordan(dense_operator(sys), sys.F);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(x[i] - ref[i]));
    worst = std::max(worst, diff / max_abs(ref));
  }
  if (!(worst < 1e-10)) r.pass = false;
  const CheckResult a1 = verify_a1(table);
  if (!a1.pass) r.pass = false;
  r.detail = "200 draws, max relative error " + fmt("%.2e", worst) + "; " + a1.detail;
  return r;
}

CheckResult check_gradient_and_order(std::mt19937_64& rng) {
  CheckResult r{8, "finite-difference gradient order, Newton convergence order", true, ""};
  std::uniform_real_distribution<double> v_d(-1.0, 1.0);
  double worst_order = HUGE_VAL;
  for (Boundary bc : {Boundary::Periodic, Boundary::Open}) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> v(16);
      for (double& x : v) x = v_d(rng);
      const LatticeWave w(v, bc);
      const ModelParams p{3.0, -0.7, 16, bc};
      const auto g = gradient(w, p);
      auto fd_error = [&](double h) {
        double e = 0.0;
        for (std::size_t i = 0; i < 16; ++i) {
          auto up = v, dn = v;
          up[i] += h;
          dn[i] -= h;
          const double fd = (hamiltonian(LatticeWave(up, bc), p) - hamiltonian(LatticeWave(dn, bc), p)) / (2.0 * h);
          e = std::max(e, std::abs(fd - g[i]));
        }
        return e;
      };
      const double order = std::log2(fd_error(1e-2) / fd_error(5e-3));
      worst_order = std::min(worst_order, order);
    }
  }
  if (!(worst_order >= 1.9)) r.pass = false;

  const Scenario fig1 = builtin_scenario("fig1");
  const SeedPattern pat = fig1.pattern();
  const ModelParams p{fig1.c[0], fig1.energy(fig1.c[0]), fig1.N, fig1.bc};
  const SolveResult res = solve(build_seed(pat, fig1.N, fig1.bc), p);
  // Only steps well above rounding carry information about the order.
  const double floor = 1e3 * 2.220446049250313e-16 * std::max(1.0, res.last.max_abs());
  std::vector<double> deltas;
  for (const auto& rec : res.trace.records)
    if (rec.delta_inf > floor) deltas.push_back(rec.delta_inf);
  double newton_order = 0.0;
  if (deltas.size() >= 3) {
    const std::size_t k = deltas.size();
    newton_order = std::log(deltas[k - 1] / deltas[k - 2]) / std::log(deltas[k - 2] / deltas[k - 3]);
  }
  if (!res.ok() || !(newton_order >= 1.8)) r.pass = false;
  r.detail = "worst gradient order " + fmt("%.3f", worst_order) + " (need 1.9); Newton order " +
             fmt("%.3f", newton_order) + " (need 1.8)";
  return r;
}

LatticeWave stagger_wave(const LatticeWave& w) { return stagger(w, 0.0).first; }

CheckResult check_duality() {
  CheckResult r{9, "staggering commutes with solving", true, ""};
  std::vector<std::pair<LatticeWave, ModelParams>> cases;
  for (const char* name : {"fig1", "fig2", "fig4", "fig8"}) {
    const Scenario s = builtin_scenario(name);
    cases.push_back({build_seed(s.pattern(), s.N, s.bc), {s.c[0], s.energy(s.c[0]), s.N, s.bc}});
  }
  const double h = 1.0 / std::sqrt(2.0);
  cases.push_back({LatticeWave({h, 0.2}, Boundary::Periodic), {10.0, -8.0, 2, Boundary::Periodic}});
  cases.push_back({build_seed(SeedPattern::parse("+-000000", Boundary::Periodic), 8, Boundary::Periodic),
                   {20.0, SeedPattern::parse("+-000000", Boundary::Periodic).limit_energy(20.0), 8,
                    Boundary::Periodic}});
  double worst = 0.0;
  std::size_t failed = 0;
  for (const auto& [seed, p] : cases) {
    const auto direct = solve_ok(seed, p);
    const ModelParams dual{-p.c, 4.0 - p.E, p.N, p.bc};
    const auto via = solve_ok(stagger_wave(seed), dual);
    if (!direct || !via) {
      ++failed;
      continue;
    }
    const LatticeWave back = stagger_wave(*via);
    double d = 0.0;
    for (std::size_t i = 0; i < p.N; ++i) d = std::max(d, std::abs(back[i] - (*direct)[i]));
    worst = std::max(worst, d);
  }
  if (failed || !(worst < 1e-10)) r.pass = false;
  r.detail = std::to_string(cases.size()) + " cases, max difference " + fmt("%.2e", worst);
  return r;
}

CheckResult check_tail(const LatticeWave& psi, double E) {
  CheckResult r{10, "tail ratio of the c = 84, N = 100 state", false, ""};
  const double rd = tail_decay(E).discrete;
  // Longest run of consecutive sites whose successive ratios (read away from
  // the nearest peak, in either direction) match the discrete root.
  std::size_t best = 0;
  double best_err = HUGE_VAL;
  const std::size_t n = psi.size();
  for (int dir : {1, -1}) {
    std::size_t run = 0;
    double run_err = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = dir > 0 ? k : n - 1 - k;
      const std::size_t j = (i + n + static_cast<std::size_t>(dir)) % n;
      const double ratio = psi[i] != 0.0 ? psi[j] / psi[i] : 0.0;
      const double err = std::abs(ratio - rd) / rd;
      if (err < 0.01) {
        ++run;
        run_err = std::max(run_err, err);
        if (run > best || (run == best && run_err < best_err)) best = run, best_err = run_err;
      } else {
        run = 0;
        run_err = 0.0;
      }
    }
  }
  // best ratios span best + 1 sites.
  r.pass = best + 1 >= 3;
  r.detail = "r_discrete(" + fmt("%.4g", E) + ") = " + fmt("%.6f", rd) + "; longest matching stretch " +
             std::to_string(best + 1) + " sites, worst deviation " + fmt("%.3g%%", 100.0 * best_err);
  return r;
}

// Residual of the stored doubles evaluated in extended precision.  At c = 100
// the terms are of order 35 and cancel, so a double evaluation adds rounding
// noise of the same size as the quantity being measured.
double exact_residual(const TwoSitePair& pair, double c) {
  using Wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<40>,
                                             boost::multiprecision::et_off>;
  const std::array<Wide, 2> psi{Wide(pair.psi[0]), Wide(pair.psi[1])};
  std::array<Wide, 2> r;
  detail::residual_into<Wide>(psi, Boundary::Periodic, Wide(c), Wide(pair.E), r);
  return std::max(abs(r[0]), abs(r[1])).convert_to<double>();
}

}  // namespace

CheckResult verify_two_site(double tol) {
  CheckResult r{1, "two-site exact solutions", true, ""};
  double worst_res = 0.0, worst_alpha = 0.0;
  for (double c : {4.5, 5.0, 10.0, 100.0}) {
    const TwoSiteSolutions sol = two_site_exact(c);
    if (!sol.broken || !sol.alpha) r.pass = false;
    for (const auto& pair : sol.all()) worst_res = std::max(worst_res, exact_residual(pair, c));
    if (sol.broken) {
      // psi_0^2 - psi_1^2 equals alpha on this branch.
      const double a = sol.broken->psi[0] * sol.broken->psi[0] - sol.broken->psi[1] * sol.broken->psi[1];
      worst_alpha = std::max(worst_alpha, std::abs(a - std::sqrt(1.0 - 16.0 / (c * c))));
    }
  }
  for (double c : {-10.0, 1.0, 3.99, 4.0})
    if (two_site_exact(c).broken) r.pass = false;
  if (!(worst_res < tol) || !(worst_alpha < tol)) r.pass = false;
  r.detail = "max residual " + fmt("%.2e", worst_res) + ", max alpha error " + fmt("%.2e", worst_alpha) +
             " (tol " + fmt("%.0e", tol) + ")";
  return r;
}

CheckResult verify_a1(const A1Table& table) {
  CheckResult r{6, "closed-form corrections", true, ""};
  const std::vector<std::string> layouts = {
      "+0000000+0000000+0000000+0000000",
      "+000000+0000000+000000000",
      "+-0000+0000",
      "+++00000",
      "+0000-0000+000",
      "++0000-0000",
  };
  double worst = 0.0;
  for (double c : {1e3, 1e4}) {
    for (const auto& text : layouts) {
      const SeedPattern pat = SeedPattern::parse(text, Boundary::Periodic);
      const LatticeWave seed = build_seed(pat, pat.size(), Boundary::Periodic);
      const double E0 = pat.limit_energy(c);
      const auto x = solve_system(build_system(seed, E0, c));
      const auto a = a1_corrections(pat, c, table);
      double diff = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) diff = std::max(diff, std::abs(x[i] - a[i]));
      const double rel = diff / max_abs(a);
      worst = std::max(worst, rel * c);
      if (!(rel <= 50.0 / c)) r.pass = false;
    }
  }
  r.detail = "closed forms: max c * relative deviation " + fmt("%.3g", worst) + " (limit 50)";
  return r;
}

std::vector<CheckResult> verify_suite(const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  const A1Table& table = opt.a1_table ? *opt.a1_table : A1Table::standard();
  std::vector<CheckResult> out;
  out.push_back(verify_two_site(opt.two_site_tol));
  out.push_back(check_surds());
  out.push_back(check_spectrum());

  // Figure runs feed the map comparison, the point counts and the tail.
  std::vector<RunRecord> figs;
  RunOptions ro;
  ro.write_files = false;
  for (const auto& name : builtin_names()) {
    const RunReport rep = run_scenario(builtin_scenario(name), ro);
    figs.push_back(rep.records.front());
  }

  {
    CheckResult r{4, "map shooting reproduces converged states", true, ""};
    double worst = 0.0, worst_double = 0.0;
    std::size_t states = 0;
    for (const auto& rec : figs) {
      if (!rec.ok() || !rec.map_check) continue;
      ++states;
      worst = std::max(worst, rec.map_check->shot_error);
      worst_double = std::max(worst_double, rec.map_check->double_error);
    }
    for (const auto& layout : ring_layouts(8, 3)) {
      const SeedPattern pat(layout, Boundary::Periodic);
      const ModelParams p{100.0, pat.limit_energy(100.0), 8, Boundary::Periodic};
      const auto psi = solve_ok(build_seed(pat, 8, Boundary::Periodic), p);
      if (!psi) continue;
      ++states;
      const ShootingCheck sc = shooting_check(*psi, p);
      worst = std::max(worst, sc.shot_error);
      worst_double = std::max(worst_double, sc.double_error);
    }
    r.pass = states > 0 && worst < 1e-6;
    r.detail = std::to_string(states) + " states, max error " + fmt("%.2e", worst) +
               " in extended precision (plain double: " + fmt("%.2e", worst_double) + ")";
    out.push_back(r);
  }

  out.push_back(check_area_and_window(rng));
  out.push_back(check_linear_solver(rng, table));

  {
    CheckResult r{7, "figure point counts and classes", true, ""};
    std::ostringstream os;
    auto find = [&](const char* name) -> const RunRecord* {
      for (const auto& rec : figs)
        if (rec.scenario == name) return &rec;
      return nullptr;
    };
    auto expect_count = [&](const char* name, std::size_t k) {
      const RunRecord* rec = find(name);
      if (!rec || !rec->ok() || rec->clusters != k) r.pass = false;
      os << name << ' ' << (rec ? rec->clusters : 0) << "/" << k << ' ';
    };
    expect_count("fig1", 8);
    expect_count("fig2", 16);
    expect_count("fig4", 25);
    if (const RunRecord* f1 = find("fig1"); !f1 || f1->portrait_class != "Periodic(8)") r.pass = false;
    for (const char* name : {"fig5", "fig6"}) {
      const RunRecord* rec = find(name);
      if (!rec || (rec->portrait_class != "Quasiperiodic" && rec->portrait_class != "Chaotic")) r.pass = false;
    }
    if (const RunRecord* f8 = find("fig8");
        !f8 || (f8->portrait_class != "Quasiperiodic" && f8->portrait_class.rfind("Periodic(", 0) != 0))
      r.pass = false;
    os << "| classes:";
    for (const auto& rec : figs) os << ' ' << rec.scenario << '=' << rec.portrait_class;
    r.detail = os.str();
    out.push_back(r);
  }

  out.push_back(check_gradient_and_order(rng));
  out.push_back(check_duality());

  {
    const RunRecord* f8 = nullptr;
    for (const auto& rec : figs)
      if (rec.scenario == "fig8") f8 = &rec;
    const Scenario s = builtin_scenario("fig8");
    const ModelParams p{s.c[0], s.energy(s.c[0]), s.N, s.bc};
    const auto psi = solve_ok(build_seed(s.pattern(), s.N, s.bc), p);
    if (f8 && psi) {
      out.push_back(check_tail(*psi, p.E));
    } else {
      out.push_back({10, "tail ratio of the c = 84, N = 100 state", false, "fig8 did not converge"});
    }
  }
  return out;
}

void print_table(std::ostream& os, const std::vector<CheckResult>& results) {
  for (const auto& r : results) {
    char head[16];
    std::snprintf(head, sizeof head, "[%2d] ", r.id);
    os << head << (r.pass ? "PASS  " : "FAIL  ") << r.name << "\n       " << r.detail << '\n';
  }
  const auto passed = std::count_if(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
  os << passed << '/' << results.size() << " checks passed\n";
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
}

}  // namespace dnls
