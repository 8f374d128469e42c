#include "sobtri/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sobtri/error.hpp"
#include "sobtri/quadrature.hpp"

namespace sobtri {

GridOptions GridOptions::refined(int factor) const {
  GridOptions g = *this;
  g.ratio = std::pow(ratio, 1.0 / factor);
  g.eta_panels = eta_panels * factor;
  int extra = 0;
  for (int f = factor; f > 1; f /= 2) ++extra;
  g.middle_refine = middle_refine + extra;
  return g;
}

namespace {

double cross(Point u, Point v) { return u.x * v.y - u.y * v.x; }

}  // namespace

void QuadratureGrid::add_graded(Point apex, Point p1, Point p2, double s_begin, double s_end,
                                const GridOptions& opts) {
  if (!(opts.ratio > 0.0 && opts.ratio < 1.0)) throw ValidationError("grid ratio must lie in (0, 1)");
  if (!(s_begin >= 0.0 && s_end <= 1.0 && s_begin < s_end))
    throw ValidationError("graded piece needs 0 <= s_begin < s_end <= 1");
  const Point e1{p1.x - apex.x, p1.y - apex.y};
  const Point e2{p2.x - p1.x, p2.y - p1.y};
  const double jac = std::abs(cross(e1, e2));
  const double scale = std::max(std::hypot(e1.x, e1.y), std::hypot(p2.x - apex.x, p2.y - apex.y));
  const double s_tip = opts.tip / scale;
  const auto rs = gauss_legendre(opts.s_order);
  const auto re = gauss_panels(0.0, 1.0, opts.eta_panels, opts.eta_order);
  double b = s_end;
  while (b > s_begin) {
    double a = std::max(b * opts.ratio, s_begin);
    if (s_begin == 0.0 && b * opts.ratio < s_tip) {
      truncated_ += 0.5 * jac * b * b;
      break;
    }
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (const auto& qs : rs) {
      const double s = mid + half * qs.x;
      const double ws = half * qs.w * s * jac;
      for (const auto& qe : re) {
        points_.push_back({apex.x + s * (e1.x + qe.x * e2.x), apex.y + s * (e1.y + qe.x * e2.y)});
        weights_.push_back(ws * qe.w);
      }
    }
    b = a;
  }
}

void QuadratureGrid::add_triangle(Point a, Point b, Point c, int refine, int order) {
  if (refine > 0) {
    const Point ab{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    const Point bc{0.5 * (b.x + c.x), 0.5 * (b.y + c.y)};
    const Point ca{0.5 * (c.x + a.x), 0.5 * (c.y + a.y)};
    add_triangle(a, ab, ca, refine - 1, order);
    add_triangle(ab, b, bc, refine - 1, order);
    add_triangle(ca, bc, c, refine - 1, order);
    add_triangle(bc, ca, ab, refine - 1, order);
    return;
  }
  const auto r = gauss_panels(0.0, 1.0, 1, order);
  const Point e1{b.x - a.x, b.y - a.y};
  const Point e2{c.x - b.x, c.y - b.y};
  const double jac = std::abs(cross(e1, e2));
  for (const auto& qs : r)
    for (const auto& qe : r) {
      points_.push_back({a.x + qs.x * (e1.x + qe.x * e2.x), a.y + qs.x * (e1.y + qe.x * e2.y)});
      weights_.push_back(qs.w * qe.w * qs.x * jac);
    }
}

void QuadratureGrid::merge(const QuadratureGrid& other) {
  points_.insert(points_.end(), other.points_.begin(), other.points_.end());
  weights_.insert(weights_.end(), other.weights_.begin(), other.weights_.end());
  truncated_ += other.truncated_;
}

double QuadratureGrid::weight_sum() const { return pairwise_sum(weights_); }

namespace {

// D splits into a copy of D scaled toward O (x < xc), a copy scaled toward B
// (y > yc) and the pentagon between them.
constexpr double kSplitX = 0.5;  // xc as a fraction of the leg
constexpr double kSplitY = 0.75;

void add_middle(QuadratureGrid& g, const TriangleDomain& d, const GridOptions& opts) {
  const double L = d.leg(), al = d.alpha();
  const double xc = kSplitX * L, yc = kSplitY;
  const Point v[5] = {{xc, 0.0}, {L, 0.0}, {L, yc}, {yc / al, yc}, {xc, al * xc}};
  for (int i = 1; i + 1 < 5; ++i) g.add_triangle(v[0], v[i], v[i + 1], opts.middle_refine, opts.middle_order);
}

}  // namespace

QuadratureGrid make_grid(const TriangleDomain& d, const RegionSpec& region, const GridOptions& opts) {
  QuadratureGrid g(region);
  const double L = d.leg(), al = d.alpha();
  const double xc = kSplitX * L, yc = kSplitY;
  const Point O = d.O(), B = d.B();
  switch (region.kind) {
    case RegionSpec::Kind::Full:
      g.add_graded(O, {xc, 0.0}, {xc, al * xc}, 0.0, 1.0, opts);
      g.add_graded(B, {yc / al, yc}, {L, yc}, 0.0, 1.0, opts);
      add_middle(g, d, opts);
      break;
    case RegionSpec::Kind::CornerExcluded: {
      const double e = region.epsilon;
      if (!(e > 0.0 && e < xc && e < 1.0 - yc))
        throw ValidationError("corner-excluding epsilon must lie in (0, min(L/2, 1/4))");
      g.add_graded(O, {xc, 0.0}, {xc, al * xc}, e / xc, 1.0, opts);
      g.add_graded(B, {yc / al, yc}, {L, yc}, e / (1.0 - yc), 1.0, opts);
      add_middle(g, d, opts);
      break;
    }
    case RegionSpec::Kind::RiemannD2: {
      const double a = std::sqrt(region.lambda2 / (1.0 - region.lambda2));
      if (!(a * al < 1.0)) throw ValidationError("Riemann region needs a U-branch parameter");
      g.add_graded(O, {L - a, 0.0}, B, 0.0, 1.0, opts);
      break;
    }
    case RegionSpec::Kind::DyadicStrip: {
      if (!(region.l1 > 1.0) || region.strip < 0) throw ValidationError("dyadic strip needs l1 > 1, k >= 0");
      const double xh = L / std::pow(region.l1, region.strip);
      g.add_graded(O, {xh, 0.0}, {xh, al * xh}, 1.0 / region.l1, 1.0, opts);
      break;
    }
  }
  return g;
}

QuadratureGrid corner_grid(const TriangleDomain& d, Corner corner, double eps, const GridOptions& opts) {
  if (!(eps > 0.0 && eps < std::min(d.leg(), 1.0))) throw ValidationError("corner size out of range");
  QuadratureGrid g;
  const double al = d.alpha();
  if (corner == Corner::O) {
    g.add_graded(d.O(), {eps, 0.0}, {eps, al * eps}, 0.0, 1.0, opts);
  } else {
    g.add_graded(d.B(), {(1.0 - eps) / al, 1.0 - eps}, {d.leg(), 1.0 - eps}, 0.0, 1.0, opts);
  }
  return g;
}

namespace {

bool same_region(const RegionSpec& a, const RegionSpec& b) {
  return a.kind == b.kind && a.lambda2 == b.lambda2 && a.epsilon == b.epsilon && a.strip == b.strip &&
         a.l1 == b.l1;
}

}  // namespace

double l2_norm(const FieldSampler& field, const RegionSpec& region, const QuadratureGrid& grid) {
  if (!same_region(region, grid.region())) throw ValidationError("quadrature grid built for another region");
  const auto pts = grid.points();
  const auto w = grid.weights();
  std::vector<double> terms(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double v = field(pts[i].x, pts[i].y);
    terms[i] = w[i] * v * v;
  }
  return std::sqrt(pairwise_sum(terms));
}

double truncation_bound(const QuadratureGrid& grid, double sup) { return sup * sup * grid.truncated_area(); }

namespace {

// Energy integrals of every time sample over one grid.
std::vector<double> energy_on(const WavePacket& packet, const QuadratureGrid& g,
                              std::span<const double> times) {
  std::vector<std::vector<double>> terms(times.size(), std::vector<double>(g.size()));
  const auto pts = g.points();
  const auto w = g.weights();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto s = packet.sample(pts[i].x, pts[i].y, times);
    for (std::size_t k = 0; k < times.size(); ++k)
      terms[k][i] = w[i] * (s[k].py * s[k].py + s[k].pxt * s[k].pxt + s[k].pyt * s[k].pyt);
  }
  std::vector<double> out(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) out[k] = pairwise_sum(terms[k]);
  return out;
}

}  // namespace

std::vector<EnergyReport> energy(const WavePacket& packet, std::span<const double> times, double eps,
                                 const GridOptions& opts) {
  const auto& d = packet.domain();
  const auto region = make_grid(d, RegionSpec::corner_excluded(eps), opts);
  const auto co = corner_grid(d, Corner::O, eps, opts);
  const auto cb = corner_grid(d, Corner::B, eps, opts);
  const auto er = energy_on(packet, region, times);
  const auto eo = energy_on(packet, co, times);
  const auto eb = energy_on(packet, cb, times);
  std::vector<EnergyReport> out(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    out[k].t = times[k];
    out[k].eps = eps;
    out[k].E_region = er[k];
    out[k].E_corner_O = eo[k];
    out[k].E_corner_B = eb[k];
    out[k].E_total = er[k] + eo[k] + eb[k];
  }
  return out;
}

EnergyReport energy(const WavePacket& packet, double t, double eps, const GridOptions& opts) {
  return energy(packet, std::span<const double>(&t, 1), eps, opts).front();
}

std::vector<double> l2_norms(const WavePacket& packet, std::span<const double> times, const GridOptions& opts) {
  for (double t : times)
    if (!(t >= 0.0)) throw ValidationError("norm times must be non-negative");
  const auto grid = make_grid(packet.domain(), RegionSpec::full(), opts);
  const auto pts = grid.points();
  const auto w = grid.weights();
  std::vector<std::vector<double>> terms(times.size(), std::vector<double>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto s = packet.sample(pts[i].x, pts[i].y, times);
    for (std::size_t k = 0; k < times.size(); ++k) terms[k][i] = w[i] * s[k].p * s[k].p;
  }
  std::vector<double> out;
  for (auto& tk : terms) out.push_back(std::sqrt(pairwise_sum(tk)));
  return out;
}

DecayReport decay_study(const WavePacket& packet, std::span<const double> t_list, const GridOptions& opts) {
  if (t_list.size() < 2) throw ValidationError("decay study needs at least two times");
  for (std::size_t i = 1; i < t_list.size(); ++i)
    if (!(t_list[i] > t_list[i - 1])) throw ValidationError("decay times must increase");
  if (!(t_list.front() > 0.0)) throw ValidationError("decay times must be positive");
  DecayReport r;
  r.t.assign(t_list.begin(), t_list.end());
  r.l2norm = l2_norms(packet, t_list, opts);
  for (std::size_t k = 1; k < r.t.size(); ++k)
    r.slopes.push_back(std::log(r.l2norm[k] / r.l2norm[k - 1]) / std::log(r.t[k] / r.t[k - 1]));
  for (int n = 1; n <= 3; ++n) {
    double best = -1.0, at = 0.0;
    for (std::size_t k = 0; k < r.t.size(); ++k) {
      const double v = std::pow(r.t[k], n) * r.l2norm[k];
      if (v > best) {
        best = v;
        at = r.t[k];
      }
    }
    r.sup_tn[n - 1] = best;
    r.argmax_tn[n - 1] = at;
  }
  r.truncation = truncation_bound(make_grid(packet.domain(), RegionSpec::full(), opts), packet.bound());
  return r;
}

double ConcentrationReport::first_below(double delta) const {
  if (samples.empty()) return -1.0;
  const double e0 = samples.front().E_total;
  for (const auto& s : samples)
    if (s.E_region < delta * e0) return s.t;
  return -1.0;
}

ConcentrationReport concentration_study(const WavePacket& packet, double eps, std::span<const double> t_list,
                                        const GridOptions& opts) {
  ConcentrationReport r;
  std::vector<double> times{0.0};
  for (double t : t_list)
    if (t > 0.0) times.push_back(t);
  r.samples = energy(packet, times, eps, opts);
  return r;
}

std::vector<LipschitzSample> lipschitz_study(const TriangleDomain& domain, const SpectralWindow& window,
                                             const BoundaryProfile& theta1, const BoundaryProfile& theta2,
                                             double center, std::span<const double> widths, int panels,
                                             const GridOptions& opts) {
  const Branch branch = window.branch(domain);
  const double theta = (branch == Branch::U ? theta1 : theta2).l2_norm();
  if (!(theta > 0.0)) throw UndefinedQuotientError("zero boundary data");
  const auto grid = make_grid(domain, RegionSpec::full(), opts);
  const auto pts = grid.points();
  const auto w = grid.weights();
  std::vector<LipschitzSample> out;
  for (double width : widths) {
    LipschitzSample s;
    s.lambda1 = center - 0.5 * width;
    s.lambda2 = center + 0.5 * width;
    if (!(width > 0.0) || s.lambda1 < window.lo() || s.lambda2 > window.hi())
      throw ValidationError("Lipschitz interval must be non-empty and inside the window");
    const SpectralIntegral V(domain, window, theta1, theta2, s.lambda1, s.lambda2, panels);
    std::vector<double> terms(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto e = V.evaluate(pts[i].x, pts[i].y);
      terms[i] = w[i] * (e.ux * e.ux + e.uy * e.uy);
    }
    s.norm1 = std::sqrt(pairwise_sum(terms));
    s.M = s.norm1 / (width * theta);
    out.push_back(s);
  }
  return out;
}

namespace {

double bump_d0(double z) { return unit_bump(z); }

double bump_d1(double z) {
  if (!(z > -1.0 && z < 1.0)) return 0.0;
  const double q = 1.0 - z * z;
  return unit_bump(z) * (-2.0 * z / (q * q));
}

double bump_d2(double z) {
  if (!(z > -1.0 && z < 1.0)) return 0.0;
  const double q = 1.0 - z * z;
  return unit_bump(z) * (6.0 * z * z * z * z - 2.0) / (q * q * q * q);
}

}  // namespace

double BumpTest::value(double x, double y) const {
  return bump_d0((x - cx) / rx) * bump_d0((y - cy) / ry);
}
double BumpTest::dx(double x, double y) const {
  return bump_d1((x - cx) / rx) / rx * bump_d0((y - cy) / ry);
}
double BumpTest::dy(double x, double y) const {
  return bump_d0((x - cx) / rx) * bump_d1((y - cy) / ry) / ry;
}
double BumpTest::dxx(double x, double y) const {
  return bump_d2((x - cx) / rx) / (rx * rx) * bump_d0((y - cy) / ry);
}
double BumpTest::dyy(double x, double y) const {
  return bump_d0((x - cx) / rx) * bump_d2((y - cy) / ry) / (ry * ry);
}

std::vector<BumpTest> make_bump_tests(const TriangleDomain& d, const TestFamilyOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double L = d.leg(), al = d.alpha();
  std::vector<BumpTest> out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < o.count) {
    if (++attempts > 100000) throw ValidationError("could not place the requested bump tests");
    BumpTest b;
    b.rx = (o.r_min + (o.r_max - o.r_min) * U(rng)) * L;
    b.ry = o.r_min + (o.r_max - o.r_min) * U(rng);
    b.cx = L * U(rng);
    b.cy = U(rng) * al * b.cx;
    const double x0 = b.cx - b.rx, x1 = b.cx + b.rx, y0 = b.cy - b.ry, y1 = b.cy + b.ry;
    if (x0 < o.x_min * L || x1 > L - o.margin * L || y0 < o.margin || y1 > o.y_max - o.margin) continue;
    if (y1 > al * x0 - o.margin) continue;
    out.push_back(b);
  }
  return out;
}

double ResidualSuite::max() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

namespace {

template <class F>
void for_cells(const BumpTest& b, int cells, ResidualRule rule, F&& f) {
  const double x0 = b.cx - b.rx, y0 = b.cy - b.ry;
  const double hx = 2.0 * b.rx / cells, hy = 2.0 * b.ry / cells;
  static const auto gauss = gauss_legendre(6);
  for (int i = 0; i < cells; ++i)
    for (int j = 0; j < cells; ++j) {
      if (rule == ResidualRule::Midpoint) {
        f(x0 + (i + 0.5) * hx, y0 + (j + 0.5) * hy, hx * hy);
      } else {
        for (const auto& qx : gauss)
          for (const auto& qy : gauss)
            f(x0 + (i + 0.5 + 0.5 * qx.x) * hx, y0 + (j + 0.5 + 0.5 * qy.x) * hy, 0.25 * qx.w * qy.w * hx * hy);
      }
    }
}

}  // namespace

ResidualSuite weak_residual_hyperbolic(const InvariantPair& slice, double lambda,
                                       std::span<const BumpTest> tests, int cells, ResidualRule rule) {
  if (cells < 1) throw ValidationError("residual grid needs at least one cell");
  ResidualSuite out;
  for (const auto& b : tests) {
    double r = 0.0, scale = 0.0;
    for_cells(b, cells, rule, [&](double x, double y, double w) {
      const double u = slice.value(x, y);
      const double gyy = b.dyy(x, y);
      const double lap = b.dxx(x, y) + gyy;
      r += w * u * (gyy - lambda * lap);
      scale += w * std::abs(u) * (std::abs(gyy) + lambda * std::abs(lap));
    });
    out.raw.push_back(std::abs(r));
    out.residuals.push_back(scale > 0.0 ? std::abs(r) / scale : 0.0);
  }
  return out;
}

ResidualSuite weak_residual_evolution(const WavePacket& packet, double t, std::span<const BumpTest> tests,
                                      int cells, bool drop_py) {
  if (cells < 1) throw ValidationError("residual grid needs at least one cell");
  ResidualSuite out;
  for (const auto& b : tests) {
    double r = 0.0, scale = 0.0;
    for_cells(b, cells, ResidualRule::Midpoint, [&](double x, double y, double w) {
      const auto s = packet.sample(x, y, t);
      const double gx = b.dx(x, y), gy = b.dy(x, y);
      const double t1 = s.pttx * gx, t2 = s.ptty * gy, t3 = drop_py ? 0.0 : s.py * gy;
      r += w * (t1 + t2 + t3);
      scale += w * (std::abs(t1) + std::abs(t2) + std::abs(s.py * gy));
    });
    out.raw.push_back(std::abs(r));
    out.residuals.push_back(scale > 0.0 ? std::abs(r) / scale : 0.0);
  }
  return out;
}

std::vector<double> observed_orders(std::span<const double> residuals) {
  std::vector<double> out;
  for (std::size_t i = 1; i < residuals.size(); ++i) out.push_back(std::log2(residuals[i - 1] / residuals[i]));
  return out;
}

}  // namespace sobtri
