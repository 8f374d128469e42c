#include "sobtri/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sobtri/error.hpp"

namespace sobtri {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_number(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  // `a/b` is accepted so mesh sizes can be written as 1/32
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    double a = 0.0, b = 0.0;
    if (!parse_number(s.substr(0, slash), a) || !parse_number(s.substr(slash + 1), b) || b == 0.0) return false;
    out = a / b;
    return true;
  }
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& why) {
  throw ValidationError("config field '" + key + "' = '" + value + "': " + why);
}

}  // namespace

const std::map<std::string, std::string>& RunConfig::defaults() {
  static const std::map<std::string, std::string> d = {
      {"alpha", "1"},
      {"branch", "u"},
      {"cells", "8,16,32"},
      {"corner_refine_levels", "0"},
      {"depth", "1e-7"},
      {"epsilon", "0.05"},
      {"field", "slice"},
      {"grid_n", "40"},
      {"lambda", "0.2"},
      {"lambda1", "0.17"},
      {"lambda2", "0.23"},
      {"mesh", "aligned"},
      {"mesh_h", "1/16,1/32,1/64"},
      {"mesh_levels", "0,1,2,3"},
      {"nodes", "64,128,256"},
      {"output", "out"},
      {"quad_tol", "1e-7"},
      {"refine", "1"},
      {"residual", "hyperbolic"},
      {"seed", "20240611"},
      {"start", "B"},
      {"steps", "20"},
      {"t_list", "0,5,10"},
      {"tests", "20"},
      {"theta1", "const:1"},
      {"theta2", "zero"},
      {"window0_u", "window:0.05,0.45,smooth"},
      {"window0_v", "none"},
      {"window1_u", "none"},
      {"window1_v", "none"},
  };
  return d;
}

RunConfig::RunConfig() : values_(defaults()) {}

void RunConfig::assign(std::string key, std::string value, const std::string& where) {
  if (!defaults().count(key)) throw ValidationError(where + ": unknown key '" + key + "'");
  values_[key] = std::move(value);
  // validate eagerly so the message carries the location
  try {
    static const std::map<std::string, int> numeric = {
        {"alpha", 0}, {"depth", 0}, {"epsilon", 0}, {"lambda", 0}, {"lambda1", 0}, {"lambda2", 0},
        {"quad_tol", 0}, {"corner_refine_levels", 1}, {"grid_n", 1}, {"refine", 1}, {"steps", 1},
        {"tests", 1}, {"cells", 2}, {"mesh_levels", 2}, {"nodes", 2}, {"mesh_h", 3}, {"t_list", 3}};
    const auto& k = key;
    if (auto it = numeric.find(k); it != numeric.end()) {
      switch (it->second) {
        case 0: (void)real(k); break;
        case 1: (void)integer(k); break;
        case 2: (void)integers(k); break;
        default: (void)reals(k); break;
      }
    } else if (k == "seed") {
      (void)seed();
    } else if (k == "theta1" || k == "theta2") {
      (void)parse_profile(raw(k));
    } else if (k.rfind("window", 0) == 0) {
      if (raw(k) != "none") (void)parse_window(raw(k));
    } else if (k == "branch") {
      if (raw(k) != "u" && raw(k) != "v" && raw(k) != "both") bad(k, raw(k), "expected u, v or both");
    } else if (k == "start") {
      if (raw(k) != "A" && raw(k) != "B") bad(k, raw(k), "expected A or B");
    } else if (k == "mesh") {
      if (raw(k) != "aligned" && raw(k) != "unstructured" && raw(k) != "domain")
        bad(k, raw(k), "expected aligned, unstructured or domain");
    } else if (k == "field") {
      if (raw(k) != "slice" && raw(k) != "averaged") bad(k, raw(k), "expected slice or averaged");
    } else if (k == "residual") {
      if (raw(k) != "hyperbolic" && raw(k) != "evolution" && raw(k) != "differential")
        bad(k, raw(k), "expected hyperbolic, evolution or differential");
    } else if (k == "output") {
      if (raw(k).empty()) bad(k, raw(k), "empty path");
    }
  } catch (const Error& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

RunConfig RunConfig::parse(std::string_view text, std::string_view source) {
  RunConfig cfg;
  std::map<std::string, int> seen;
  int lineno = 0;
  for (auto line : split(text, '\n')) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ValidationError(where + ": expected key=value");
    std::string key(trim(line.substr(0, eq)));
    if (auto it = seen.find(key); it != seen.end())
      throw ValidationError(where + ": duplicate key '" + key + "' (first on line " + std::to_string(it->second) + ")");
    seen[key] = lineno;
    cfg.assign(key, std::string(trim(line.substr(eq + 1))), where);
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path + ": cannot read config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void RunConfig::set(std::string_view assignment, std::string_view source) {
  const std::string where = std::string(source) + " '" + std::string(assignment) + "'";
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ValidationError(where + ": expected key=value");
  assign(std::string(trim(assignment.substr(0, eq))), std::string(trim(assignment.substr(eq + 1))), where);
}

std::string RunConfig::serialize() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

const std::string& RunConfig::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("unknown config key '" + key + "'");
  return it->second;
}

double RunConfig::real(const std::string& key) const {
  double v = 0.0;
  if (!parse_number(raw(key), v)) bad(key, raw(key), "not a finite number");
  return v;
}

int RunConfig::integer(const std::string& key) const {
  const double v = real(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) bad(key, raw(key), "not an integer");
  return static_cast<int>(v);
}

std::uint64_t RunConfig::seed() const {
  const auto& s = raw("seed");
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) bad("seed", s, "not an unsigned integer");
  return v;
}

std::vector<double> RunConfig::reals(const std::string& key) const {
  std::vector<double> out;
  for (auto part : split(raw(key), ',')) {
    double v = 0.0;
    if (!parse_number(part, v)) bad(key, raw(key), "entry '" + std::string(part) + "' is not a finite number");
    out.push_back(v);
  }
  return out;
}

std::vector<int> RunConfig::integers(const std::string& key) const {
  std::vector<int> out;
  for (double v : reals(key)) {
    if (v != std::floor(v) || std::abs(v) > 1e9) bad(key, raw(key), "entries must be integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

TriangleDomain RunConfig::domain() const {
  try {
    return make_domain(real("alpha"));
  } catch (const DomainParameterError& e) {
    bad("alpha", raw("alpha"), e.what());
  }
}

BoundaryProfile RunConfig::theta1() const { return parse_profile(raw("theta1"), 1.0); }

BoundaryProfile RunConfig::theta2() const { return parse_profile(raw("theta2"), domain().leg()); }

std::vector<PacketComponent> RunConfig::components(int which) const {
  const auto d = domain();
  const auto& br = raw("branch");
  std::vector<PacketComponent> out;
  for (const char* b : {"u", "v"}) {
    if (br != "both" && br != b) continue;
    const std::string key = "window" + std::to_string(which) + "_" + b;
    if (raw(key) == "none") continue;
    const auto w = parse_window(raw(key));
    Branch got;
    try {
      got = w.branch(d);
    } catch (const Error& e) {
      bad(key, raw(key), e.what());
    }
    if ((got == Branch::U) != (b[0] == 'u')) bad(key, raw(key), "window lies on the other branch");
    out.push_back({w, theta1(), theta2()});
  }
  return out;
}

QuadraturePlan RunConfig::plan() const {
  QuadraturePlan p;
  const auto t = times();
  for (double x : t) p.t_max = std::max(p.t_max, x);
  p.depth = real("depth");
  p.refine = integer("refine");
  if (p.refine < 1) bad("refine", raw("refine"), "must be >= 1");
  return p;
}

GridOptions RunConfig::grid() const {
  GridOptions g;
  g.s_order = 12;
  g.eta_panels = 12;
  g.eta_order = 6;
  g.tip = real("depth");
  const int levels = integer("corner_refine_levels");
  if (levels < 0 || levels > 4) bad("corner_refine_levels", raw("corner_refine_levels"), "expected 0..4");
  return levels == 0 ? g : g.refined(1 << levels);
}

std::vector<double> RunConfig::times() const {
  auto t = reals("t_list");
  for (double x : t)
    if (x < 0.0) bad("t_list", raw("t_list"), "times must be non-negative");
  return t;
}

}  // namespace sobtri
