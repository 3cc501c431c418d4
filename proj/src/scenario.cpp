#include "dnls/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dnls/csv.hpp"
#include "dnls/error.hpp"

namespace dnls {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_real(std::string_view key, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError(std::string(key), "expected a finite number, got '" + std::string(v) + "'");
  return out;
}

long long to_integer(std::string_view key, std::string_view v) {
  v = trim(v);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(std::string(key), "expected an integer, got '" + std::string(v) + "'");
  return out;
}

std::size_t to_count(std::string_view key, std::string_view v) {
  const long long x = to_integer(key, v);
  if (x < 0) throw ConfigError(std::string(key), "must be non-negative");
  return static_cast<std::size_t>(x);
}

bool to_bool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError(std::string(key), "expected true or false, got '" + std::string(v) + "'");
}

std::vector<int> to_signs(std::string_view key, std::string_view v) {
  std::vector<int> out;
  for (auto tok : split(v, ',')) {
    for (char ch : tok) {
      if (ch == '+') out.push_back(1);
      else if (ch == '-') out.push_back(-1);
      else if (ch != ' ') throw ConfigError(std::string(key), "signs are written as + and -");
    }
  }
  if (out.empty()) throw ConfigError(std::string(key), "sign list is empty");
  return out;
}

std::string join_counts(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s;
}

std::string join_reals(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_real(v[i]);
  return s;
}

// Figure set: single spots on rings of 32 and 100 sites.
const std::map<std::string, std::string, std::less<>>& builtins() {
  static const std::map<std::string, std::string, std::less<>> table = {
      {"fig1",
       "# Four equidistant single-site spots on a 32-site ring.\n"
       "name = fig1\nN = 32\nbc = pbc\nspots = 4\nspot_size = 1\ngaps = 7\nsigns = +\n"
       "n = 4\nm = 4\nl = 0\nc = 10\nE0 = limit\n"},
      {"fig2",
       "# Four single-site spots separated alternately by 5 and 9 empty sites.\n"
       "name = fig2\nN = 32\nbc = pbc\nspots = 4\nspot_size = 1\ngaps = 5, 9\nsigns = +\n"
       "n = 4\nm = 4\nl = 0\nc = 12\nE0 = limit\n"},
      {"fig3",
       "# One spot of ten adjacent sites on a 100-site ring.\n"
       "name = fig3\nN = 100\nbc = pbc\nspots = 1\nspot_size = 10\ngaps = 90\nsigns = +\n"
       "n = 10\nm = 1\nl = 0\nc = 4\nE0 = limit\n"},
      {"fig4",
       "# Twelve single-site spots, gaps cycling through 6, 7, 9.\n"
       "name = fig4\nN = 100\nbc = pbc\nspots = 12\nspot_size = 1\ngaps = 6, 7, 9\nsigns = +\n"
       "n = 12\nm = 12\nl = 0\nc = 29\nE0 = limit\n"},
      {"fig5",
       "name = fig5\nN = 100\nbc = pbc\nspots = 12\nspot_size = 1\ngaps = 6, 7, 9\nsigns = +\n"
       "n = 12\nm = 12\nl = 0\nc = 31\nE0 = limit\n"},
      {"fig6",
       "name = fig6\nN = 100\nbc = pbc\nspots = 12\nspot_size = 1\ngaps = 6, 7, 9\nsigns = +\n"
       "n = 12\nm = 12\nl = 0\nc = 32\nE0 = limit\n"
       "note = E0 is the limit-formula value -2/3; the rounded -0.6 quoted alongside this case is not used\n"},
      {"fig7",
       "name = fig7\nN = 100\nbc = pbc\nspots = 12\nspot_size = 1\ngaps = 6, 7, 9\nsigns = +\n"
       "n = 12\nm = 12\nl = 0\nc = 36\nE0 = limit\n"},
      {"fig8",
       "name = fig8\nN = 100\nbc = pbc\nspots = 12\nspot_size = 1\ngaps = 6, 7, 9\nsigns = +\n"
       "n = 12\nm = 12\nl = 0\nc = 84\nE0 = limit\n"},
  };
  return table;
}

}  // namespace

std::vector<double> parse_c_list(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ConfigError("c", "coupling list is empty");
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("c", "range is written start:stop:step");
    const double a = to_real("c", parts[0]), b = to_real("c", parts[1]), step = to_real("c", parts[2]);
    if (!(step > 0.0) || b < a) throw ConfigError("c", "range needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 100000) throw ConfigError("c", "range has too many entries");
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = a + static_cast<double>(k) * step;
    return out;
  }
  std::vector<double> out;
  for (auto tok : split(text, ',')) out.push_back(to_real("c", tok));
  return out;
}

void apply_setting(Scenario& s, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  const std::string k(key);
  if (key == "name") {
    if (value.empty() || value.find_first_of("/\\") != std::string_view::npos)
      throw ConfigError(k, "must be a non-empty name without path separators");
    s.name = value;
  } else if (key == "N") {
    s.N = to_count(key, value);
  } else if (key == "bc") {
    try {
      s.bc = parse_boundary(value);
    } catch (const InvalidArgument& e) {
      throw ConfigError(k, e.what());
    }
  } else if (key == "layout") {
    s.seed.layout = std::string(value);
  } else if (key == "spots") {
    s.seed.spots = to_count(key, value);
  } else if (key == "spot_size") {
    s.seed.spot_size = to_count(key, value);
  } else if (key == "gaps") {
    s.seed.gaps.clear();
    for (auto tok : split(value, ',')) s.seed.gaps.push_back(to_count(key, tok));
  } else if (key == "signs") {
    s.seed.signs = to_signs(key, value);
  } else if (key == "offset") {
    s.seed.offset = to_count(key, value);
  } else if (key == "n") {
    s.seed.n = static_cast<int>(to_integer(key, value));
  } else if (key == "m") {
    s.seed.m = static_cast<int>(to_integer(key, value));
  } else if (key == "l") {
    s.seed.l = static_cast<int>(to_integer(key, value));
  } else if (key == "c") {
    s.c = parse_c_list(value);
  } else if (key == "E0") {
    if (value == "limit") s.E0.reset();
    else s.E0 = to_real(key, value);
  } else if (key == "tol") {
    s.solver.tol = to_real(key, value);
  } else if (key == "max_iter") {
    s.solver.max_iter = static_cast<int>(to_integer(key, value));
  } else if (key == "e_jump") {
    s.solver.e_jump = to_real(key, value);
  } else if (key == "bound") {
    s.solver.bound = to_real(key, value);
  } else if (key == "step_halving") {
    s.solver.step_halving = to_bool(key, value);
  } else if (key == "max_halvings") {
    s.solver.max_halvings = static_cast<int>(to_integer(key, value));
  } else if (key == "cluster_tol") {
    s.classify.cluster_tol = to_real(key, value);
  } else if (key == "relative_tol") {
    s.classify.relative_tol = to_bool(key, value);
  } else if (key == "loop_gap_ratio") {
    s.classify.loop_gap_ratio = to_real(key, value);
  } else if (key == "condensed_ratio") {
    s.classify.condensed_ratio = to_real(key, value);
  } else if (key == "min_points") {
    s.classify.min_points = to_count(key, value);
  } else if (key == "max_period") {
    s.classify.max_period = to_count(key, value);
  } else if (key == "ellipse_tol") {
    s.classify.ellipse_tol = to_real(key, value);
  } else if (key == "map_check") {
    s.map_check = to_bool(key, value);
  } else if (key == "note") {
    s.note = value;
  } else if (key == "output") {
    s.output = value;
  } else {
    throw ConfigError(k, "unknown key");
  }
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++line_no;
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    const auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    // Notes are free text and may contain '#'.
    if (key != "note") {
      const auto hash = value.find('#');
      if (hash != std::string_view::npos) value = trim(value.substr(0, hash));
    }
    apply_setting(s, key, value);
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("scenario", "cannot read " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_scenario(ss.str());
}

SeedPattern Scenario::pattern() const {
  if (N < 1) throw ConfigError("N", "lattice needs at least one site");
  std::vector<int> layout;
  const char* field = "layout";
  try {
    if (seed.layout) {
      const SeedPattern parsed = SeedPattern::parse(*seed.layout, bc);
      layout.assign(parsed.layout().begin(), parsed.layout().end());
    } else if (seed.spots > 0) {
      field = "gaps";
      layout = spot_layout(N, seed.spots, seed.spot_size, seed.gaps, seed.signs, seed.offset);
    } else {
      throw ConfigError("layout", "no seed given; set layout or spots");
    }
  } catch (const InvalidPattern& e) {
    throw ConfigError(field, e.what());
  }
  if (layout.size() != N)
    throw ConfigError("layout", "has " + std::to_string(layout.size()) + " sites, N is " + std::to_string(N));
  SeedPattern pat(layout, bc);
  const auto k = pat.counts();
  auto check = [](const char* name, const std::optional<int>& declared, int actual) {
    if (declared && *declared != actual)
      throw ConfigError(name, "declared " + std::to_string(*declared) + " but the layout gives " +
                                  std::to_string(actual));
  };
  check("n", seed.n, k.n);
  check("m", seed.m, k.m);
  check("l", seed.l, k.l);
  return pat;
}

double Scenario::energy(double c_value) const {
  if (E0) return *E0;
  return pattern().limit_energy(c_value);
}

void Scenario::validate() const {
  if (name.empty()) throw ConfigError("name", "must not be empty");
  if (c.empty()) throw ConfigError("c", "coupling list is empty");
  for (double v : c)
    if (!std::isfinite(v)) throw ConfigError("c", "couplings must be finite");
  pattern();
  solver.validate();
  classify.validate();
}

std::string Scenario::to_text() const {
  std::ostringstream os;
  os << "name = " << name << '\n' << "N = " << N << '\n' << "bc = " << to_string(bc) << '\n';
  if (seed.layout) {
    os << "layout = " << *seed.layout << '\n';
  } else {
    os << "spots = " << seed.spots << '\n' << "spot_size = " << seed.spot_size << '\n';
    os << "gaps = " << join_counts(seed.gaps) << '\n';
    os << "signs = ";
    for (std::size_t i = 0; i < seed.signs.size(); ++i) os << (i ? ", " : "") << (seed.signs[i] > 0 ? '+' : '-');
    os << '\n' << "offset = " << seed.offset << '\n';
  }
  if (seed.n) os << "n = " << *seed.n << '\n';
  if (seed.m) os << "m = " << *seed.m << '\n';
  if (seed.l) os << "l = " << *seed.l << '\n';
  os << "c = " << join_reals(c) << '\n';
  os << "E0 = " << (E0 ? format_real(*E0) : std::string("limit")) << '\n';
  os << "tol = " << format_real(solver.tol) << '\n' << "max_iter = " << solver.max_iter << '\n';
  os << "e_jump = " << format_real(solver.e_jump) << '\n' << "bound = " << format_real(solver.bound) << '\n';
  os << "step_halving = " << (solver.step_halving ? "true" : "false") << '\n';
  os << "max_halvings = " << solver.max_halvings << '\n';
  os << "cluster_tol = " << format_real(classify.cluster_tol) << '\n';
  os << "relative_tol = " << (classify.relative_tol ? "true" : "false") << '\n';
  os << "loop_gap_ratio = " << format_real(classify.loop_gap_ratio) << '\n';
  os << "condensed_ratio = " << format_real(classify.condensed_ratio) << '\n';
  os << "min_points = " << classify.min_points << '\n' << "max_period = " << classify.max_period << '\n';
  os << "ellipse_tol = " << format_real(classify.ellipse_tol) << '\n';
  os << "map_check = " << (map_check ? "true" : "false") << '\n';
  if (!note.empty()) os << "note = " << note << '\n';
  if (!output.empty()) os << "output = " << output << '\n';
  return os.str();
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : builtins()) v.push_back(k);
    return v;
  }();
  return names;
}

std::string builtin_text(std::string_view name) {
  const auto it = builtins().find(name);
  if (it == builtins().end()) throw ConfigError("scenario", "no built-in scenario named '" + std::string(name) + "'");
  return it->second;
}

Scenario builtin_scenario(std::string_view name) { return parse_scenario(builtin_text(name)); }

}  // namespace dnls
