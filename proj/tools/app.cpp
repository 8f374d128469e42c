#include "app.hpp"

#include <Eigen/Core>
#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "sobtri/analysis.hpp"
#include "sobtri/error.hpp"
#include "sobtri/fem.hpp"
#include "svg.hpp"

#ifndef SOBTRI_VERSION
#define SOBTRI_VERSION "unknown"
#endif

namespace sobtri::cli {

namespace fs = std::filesystem;

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Collects the run's artifacts; nothing touches the disk until commit().
class Output {
 public:
  Output(const RunConfig& cfg, bool svg) : dir_(cfg.raw("output")), svg_(svg) {}

  void csv(const std::string& name, Table table) {
    std::string text;
    for (std::size_t c = 0; c < table.header.size(); ++c) text += (c ? "," : "") + table.header[c];
    text += "\n";
    for (const auto& r : table.rows) {
      for (std::size_t c = 0; c < r.size(); ++c) text += (c ? "," : "") + g17(r[c]);
      text += "\n";
    }
    add(name, std::move(text), true);
    if (svg_) {
      auto pic = render_svg(table, name);
      if (!pic.empty()) add(name.substr(0, name.size() - 4) + ".svg", std::move(pic), false);
    }
  }

  void text(const std::string& name, std::string body) { add(name, std::move(body), true); }

  void commit(const std::string& command, const RunConfig& cfg) {
    std::string m = "command=" + command + "\n";
    m += "version.sobtri=" SOBTRI_VERSION "\n";
    m += "version.eigen=" + std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
         std::to_string(EIGEN_MINOR_VERSION) + "\n";
#ifdef __VERSION__
    m += "version.compiler=" __VERSION__ "\n";
#endif
    for (const auto& [k, v] : cfg.values()) m += "config." + k + "=" + v + "\n";
    for (const auto& [name, body, checked] : files_)
      if (checked) m += "sha256." + name + "=" + sha256_hex(body) + "\n";
    files_.push_back({"manifest.txt", std::move(m), false});

    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory '" + dir_.string() + "': " + ec.message());
    for (const auto& [name, body, checked] : files_) {
      const auto path = dir_ / name;
      std::ofstream f(path, std::ios::binary | std::ios::trunc);
      f << body;
      f.close();
      if (!f) throw IoError("cannot write '" + path.string() + "'");
    }
  }

 private:
  struct File {
    std::string name;
    std::string body;
    bool checked;
  };
  void add(std::string name, std::string body, bool checked) {
    files_.push_back({std::move(name), std::move(body), checked});
  }

  fs::path dir_;
  bool svg_;
  std::vector<File> files_;
};

/// Lattice (L i / n, j / n), 0 <= j <= i <= n, without the vertices O and B
/// where the two branches accumulate.
std::vector<Point> lattice(const TriangleDomain& d, int n) {
  if (n < 2) throw ValidationError("config field 'grid_n': must be >= 2");
  std::vector<Point> pts;
  for (int i = 1; i <= n; ++i)
    for (int j = 0; j <= i; ++j) {
      if (i == n && j == n) continue;
      pts.push_back({d.leg() * i / n, static_cast<double>(j) / n});
    }
  return pts;
}

WavePacket make_packet(const RunConfig& cfg) {
  auto c0 = cfg.components(0), c1 = cfg.components(1);
  if (c0.empty() && c1.empty()) throw ValidationError("config: no packet windows selected by 'branch'");
  return WavePacket(cfg.domain(), std::move(c0), std::move(c1), cfg.plan());
}

double max_edge(const Mesh& m) {
  double h = 0.0;
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) {
      const auto& a = m.nodes[t[k]];
      const auto& b = m.nodes[t[(k + 1) % 3]];
      h = std::max(h, std::hypot(a.x - b.x, a.y - b.y));
    }
  return h;
}

void summary_orders(std::ostream& out, const std::vector<double>& r) {
  const auto o = observed_orders(r);
  out << "orders:";
  for (double v : o) out << " " << g17(v);
  out << "\n";
}

using Command = std::function<void(const RunConfig&, Output&, std::ostream&)>;

void cmd_billiard(const RunConfig& cfg, Output& o, std::ostream& out) {
  const auto d = cfg.domain();
  const auto sp = spectral_point(cfg.real("lambda"), d);
  const int steps = cfg.integer("steps");
  if (steps < 1) throw ValidationError("config field 'steps': must be >= 1");
  const auto start = cfg.raw("start") == "A" ? TraceStart::A : TraceStart::B;
  const auto trace = billiard_trace(d, sp, start, static_cast<std::size_t>(steps));
  Table t{{"step", "x", "y", "family"}, {}};
  for (std::size_t k = 0; k < trace.size(); ++k)
    t.rows.push_back({static_cast<double>(k), trace[k].point.x, trace[k].point.y,
                      static_cast<double>(trace[k].family)});
  o.csv("billiard.csv", std::move(t));
  out << "billiard: " << trace.size() << " vertices\n";
}

void cmd_field(const RunConfig& cfg, Output& o, std::ostream& out) {
  const auto d = cfg.domain();
  const auto pts = lattice(d, cfg.integer("grid_n"));
  std::function<double(double, double)> f;
  std::optional<InvariantPair> slice;
  std::optional<AveragedField> avg;
  if (cfg.raw("field") == "slice") {
    slice.emplace(w_slice(d, cfg.theta1(), cfg.theta2(), cfg.real("lambda")));
    f = [&](double x, double y) { return slice->value(x, y); };
  } else {
    const auto comps = cfg.components(0);
    if (comps.empty()) throw ValidationError("config: field=averaged needs a cosine window");
    avg.emplace(averaged_field(d, comps.front().window, cfg.theta1(), cfg.theta2(), cfg.real("lambda"),
                               cfg.real("quad_tol")));
    f = [&](double x, double y) { return avg->value(x, y); };
  }
  Table t{{"x", "y", "u"}, {}};
  for (const auto& p : pts) t.rows.push_back({p.x, p.y, f(p.x, p.y)});
  o.csv("field.csv", std::move(t));
  out << "field: " << pts.size() << " points\n";
}

void cmd_trace(const RunConfig& cfg, Output& o, std::ostream& out) {
  const auto d = cfg.domain();
  const auto slice = w_slice(d, cfg.theta1(), cfg.theta2(), cfg.real("lambda"));
  if (slice.branch() != Branch::U) throw BranchError("trace: lambda lies above the threshold");
  const TraceProfile tp(slice);
  const int n = cfg.integer("grid_n");
  if (n < 1) throw ValidationError("config field 'grid_n': must be >= 1");
  Table t{{"x", "phi"}, {}};
  for (int i = 1; i <= n; ++i) {
    const double x = d.leg() * i / n;
    t.rows.push_back({x, tp.phi(x)});
  }
  o.csv("trace.csv", std::move(t));
  out << "trace: " << n << " abscissae\n";
}

void cmd_evolve(const RunConfig& cfg, Output& o, std::ostream& out) {
  const auto packet = make_packet(cfg);
  const auto pts = lattice(cfg.domain(), cfg.integer("grid_n"));
  const auto times = cfg.times();
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto p = packet.evolve(times[k], pts);
    Table t{{"x", "y", "p"}, {}};
    for (std::size_t i = 0; i < pts.size(); ++i) t.rows.push_back({pts[i].x, pts[i].y, p[i]});
    o.csv("evolve_" + std::to_string(k) + ".csv", std::move(t));
    out << "evolve: t=" << g17(times[k]) << " -> evolve_" << k << ".csv\n";
  }
  out << "evolve: " << packet.nodes() << " spectral nodes\n";
}

void cmd_norms(const RunConfig& cfg, Output& o, std::ostream& out, bool decay) {
  const auto packet = make_packet(cfg);
  const auto times = cfg.times();
  Table t{{"t", "l2norm"}, {}};
  if (!decay) {
    const auto norms = l2_norms(packet, times, cfg.grid());
    for (std::size_t k = 0; k < times.size(); ++k) t.rows.push_back({times[k], norms[k]});
    o.csv("norms.csv", std::move(t));
    out << "norms: " << times.size() << " times\n";
    return;
  }
  const auto rep = decay_study(packet, times, cfg.grid());
  for (std::size_t k = 0; k < rep.t.size(); ++k) t.rows.push_back({rep.t[k], rep.l2norm[k]});
  o.csv("decay.csv", std::move(t));
  out << "decay: truncation bound " << g17(rep.truncation) << "\n";
  Table s{{"t0", "t1", "slope"}, {}};
  for (std::size_t k = 0; k < rep.slopes.size(); ++k) {
    s.rows.push_back({rep.t[k], rep.t[k + 1], rep.slopes[k]});
    out << "slope " << g17(rep.t[k]) << "->" << g17(rep.t[k + 1]) << ": " << g17(rep.slopes[k]) << "\n";
  }
  o.csv("decay_slopes.csv", std::move(s));
  for (int n = 0; n < 3; ++n)
    out << "sup t^" << n + 1 << "|p| = " << g17(rep.sup_tn[n]) << " at t=" << g17(rep.argmax_tn[n]) << "\n";
}

void cmd_energy(const RunConfig& cfg, Output& o, std::ostream& out) {
  const auto packet = make_packet(cfg);
  const auto times = cfg.times();
  const auto reps = energy(packet, times, cfg.real("epsilon"), cfg.grid());
  Table t{{"t", "E_total", "E_region", "eps"}, {}};
  Table c{{"t", "E_corner_O", "E_corner_B"}, {}};
  for (const auto& r : reps) {
    t.rows.push_back({r.t, r.E_total, r.E_region, r.eps});
    c.rows.push_back({r.t, r.E_corner_O, r.E_corner_B});
  }
  o.csv("energy.csv", std::move(t));
  o.csv("energy_corners.csv", std::move(c));
  if (!reps.empty()) {
    double lo = reps.front().E_total, hi = lo;
    for (const auto& r : reps) lo = std::min(lo, r.E_total), hi = std::max(hi, r.E_total);
    out << "energy: relative drift " << g17((hi - lo) / reps.front().E_total) << "\n";
  }
}

void cmd_eigencheck(const RunConfig& cfg, Output& o, std::ostream& out) {
  std::vector<Mesh> meshes;
  const auto& kind = cfg.raw("mesh");
  if (kind == "aligned") {
    for (int r : cfg.integers("mesh_levels")) {
      if (r < 0 || r > 7) throw ValidationError("config field 'mesh_levels': levels must be in 0..7");
      meshes.push_back(quadrangle_aligned_mesh(r));
    }
  } else if (kind == "unstructured") {
    for (double h : cfg.reals("mesh_h")) {
      if (!(h > 0.0)) throw ValidationError("config field 'mesh_h': sizes must be positive");
      meshes.push_back(quadrangle_unstructured_mesh(h, cfg.seed()));
    }
  } else {
    throw ValidationError("config field 'mesh': eigencheck needs aligned or unstructured");
  }
  Table t{{"h", "rayleigh", "residual"}, {}};
  for (const auto& m : meshes) {
    const DiscreteOperator op(m);
    const Vector u = op.interpolate(Quadrangle::eigenfunction);
    const double h = max_edge(m);
    const double r = rayleigh(op, u);
    const double e = eigen_residual(op, u, Quadrangle::lambda);
    t.rows.push_back({h, r, e});
    out << g17(h) << ", " << g17(r) << ", " << g17(e) << "\n";
  }
  o.csv("eigencheck.csv", std::move(t));
  std::ostringstream nodes, elems;
  meshes.back().write_nodes(nodes);
  meshes.back().write_elements(elems);
  o.text("mesh_nodes.csv", nodes.str());
  o.text("mesh_elements.csv", elems.str());
}

void cmd_residual(const RunConfig& cfg, Output& o, std::ostream& out) {
  const auto d = cfg.domain();
  const auto& kind = cfg.raw("residual");
  std::vector<double> maxima;
  if (kind == "differential") {
    const auto hs = cfg.reals("mesh_h");
    const auto nodes = cfg.integers("nodes");
    if (hs.size() != nodes.size()) throw ValidationError("config: 'mesh_h' and 'nodes' differ in length");
    const auto comps = cfg.components(0);
    if (comps.empty()) throw ValidationError("config: residual=differential needs a cosine window");
    Table t{{"test_id", "residual"}, {}};
    for (std::size_t k = 0; k < hs.size(); ++k) {
      const DiscreteOperator op(domain_mesh(d, hs[k]));
      const double r = differential_solution_residual(op, d, comps.front().window, cfg.theta1(), cfg.theta2(),
                                                      cfg.real("lambda1"), cfg.real("lambda2"), nodes[k]);
      t.rows.push_back({static_cast<double>(k), r});
      maxima.push_back(r);
      out << "h=" << g17(hs[k]) << " nodes=" << nodes[k] << ": " << g17(r) << "\n";
    }
    o.csv("residual.csv", std::move(t));
    summary_orders(out, maxima);
    return;
  }
  TestFamilyOptions fam;
  fam.seed = cfg.seed();
  fam.count = cfg.integer("tests");
  const auto tests = make_bump_tests(d, fam);
  std::optional<InvariantPair> slice;
  std::optional<WavePacket> packet;
  double t_eval = 0.0;
  if (kind == "hyperbolic") {
    slice.emplace(w_slice(d, cfg.theta1(), cfg.theta2(), cfg.real("lambda")));
  } else {
    packet.emplace(make_packet(cfg));
    for (double t : cfg.times()) t_eval = std::max(t_eval, t);
  }
  for (int cells : cfg.integers("cells")) {
    if (cells < 1) throw ValidationError("config field 'cells': entries must be >= 1");
    const auto suite = slice ? weak_residual_hyperbolic(*slice, cfg.real("lambda"), tests, cells)
                             : weak_residual_evolution(*packet, t_eval, tests, cells);
    Table t{{"test_id", "residual"}, {}};
    for (std::size_t k = 0; k < suite.residuals.size(); ++k)
      t.rows.push_back({static_cast<double>(k), suite.residuals[k]});
    o.csv("residual_" + std::to_string(cells) + ".csv", std::move(t));
    maxima.push_back(suite.max());
    out << "cells=" << cells << ": max " << g17(suite.max()) << "\n";
  }
  summary_orders(out, maxima);
}

const std::map<std::string, Command>& table() {
  static const std::map<std::string, Command> t = {
      {"billiard", cmd_billiard},
      {"field", cmd_field},
      {"trace", cmd_trace},
      {"evolve", cmd_evolve},
      {"norms", [](const RunConfig& c, Output& o, std::ostream& s) { cmd_norms(c, o, s, false); }},
      {"decay", [](const RunConfig& c, Output& o, std::ostream& s) { cmd_norms(c, o, s, true); }},
      {"energy", cmd_energy},
      {"eigencheck", cmd_eigencheck},
      {"residual", cmd_residual},
  };
  return t;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : table()) v.push_back(k);
    return v;
  }();
  return c;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw IoError("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned i = 0; i < len; ++i) s += hex[md[i] >> 4], s += hex[md[i] & 15];
  return s;
}

int run(const std::string& command, const RunConfig& config, bool svg, std::ostream& out, std::ostream& err) {
  const auto it = table().find(command);
  if (it == table().end()) {
    err << "error: unknown command '" << command << "'\n";
    return kExitConfig;
  }
  try {
    Output o(config, svg);
    it->second(config, o, out);
    o.commit(command, config);
    return kExitOk;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const BudgetError& e) {
    err << "budget error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const CornerSingularityError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace sobtri::cli
