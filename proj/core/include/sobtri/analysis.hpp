#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sobtri/characteristic.hpp"
#include "sobtri/geometry.hpp"
#include "sobtri/packets.hpp"

namespace sobtri {

/// Resolution of a corner-graded grid. Pieces meeting a corner are cut into
/// geometric strips of ratio `ratio`; each strip carries a tensor Gauss rule
/// in the collapsed coordinates (s, eta), so every strip is resolved alike.
struct GridOptions {
  double ratio = 0.5;
  int s_order = 4;
  int eta_panels = 6;
  int eta_order = 4;
  int middle_refine = 3;
  int middle_order = 4;
  /// Corner tips closer than this to a corner (absolute, in x or y) are omitted.
  double tip = 1e-10;

  GridOptions refined(int factor = 2) const;
};

class QuadratureGrid {
 public:
  QuadratureGrid() = default;
  explicit QuadratureGrid(const RegionSpec& region) : region_(region) {}

  /// Triangle (apex, p1, p2) restricted to s in [s_begin, s_end], where
  /// X = apex + s ((p1 - apex) + eta (p2 - p1)); strips shrink toward the apex.
  void add_graded(Point apex, Point p1, Point p2, double s_begin, double s_end,
                  const GridOptions& opts);
  /// Triangle split into 4^refine congruent pieces, each with a collapsed
  /// Gauss rule of the given order.
  void add_triangle(Point a, Point b, Point c, int refine, int order);
  void merge(const QuadratureGrid& other);

  std::span<const Point> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return points_.size(); }
  double weight_sum() const;
  /// Area of the omitted corner tips.
  double truncated_area() const { return truncated_; }
  const RegionSpec& region() const { return region_; }

 private:
  RegionSpec region_;
  std::vector<Point> points_;
  std::vector<double> weights_;
  double truncated_ = 0.0;
};

/// Grid covering a region of D, graded toward O and B.
QuadratureGrid make_grid(const TriangleDomain& domain, const RegionSpec& region,
                         const GridOptions& opts = {});

enum class Corner { O, B };

/// D n {x < eps} (corner O) or D n {y > 1 - eps} (corner B).
QuadratureGrid corner_grid(const TriangleDomain& domain, Corner corner, double eps,
                           const GridOptions& opts = {});

using FieldSampler = std::function<double(double, double)>;

/// Quadrature L2 norm of a sampler over the grid's region.
double l2_norm(const FieldSampler& field, const RegionSpec& region, const QuadratureGrid& grid);
/// Bound on the squared-norm contribution of the omitted tips for |field| <= sup.
double truncation_bound(const QuadratureGrid& grid, double sup);

struct EnergyReport {
  double t = 0.0;
  double E_total = 0.0;
  double E_region = 0.0;  // over D_eps
  double eps = 0.0;
  double E_corner_O = 0.0;  // over D n {x < eps}
  double E_corner_B = 0.0;  // over D n {y > 1 - eps}
};

/// E(t, D) = int |p_y|^2 + |p_xt|^2 + |p_yt|^2 split into D_eps and the two
/// corner pieces, all times sampled in one pass over the grids.
std::vector<EnergyReport> energy(const WavePacket& packet, std::span<const double> times,
                                 double eps, const GridOptions& opts = {});
EnergyReport energy(const WavePacket& packet, double t, double eps, const GridOptions& opts = {});

struct DecayReport {
  std::vector<double> t;
  std::vector<double> l2norm;
  std::vector<double> slopes;  // log-log slope between consecutive samples
  std::array<double, 3> sup_tn{};  // sup_t t^n ||p|| for n = 1, 2, 3
  std::array<double, 3> argmax_tn{};
  double truncation = 0.0;  // bound on the omitted squared norm
};

/// ||p(t)||_{L2(D)} on the full graded grid, one pass for all times.
std::vector<double> l2_norms(const WavePacket& packet, std::span<const double> times,
                             const GridOptions& opts = {});

DecayReport decay_study(const WavePacket& packet, std::span<const double> t_list,
                        const GridOptions& opts = {});

struct ConcentrationReport {
  std::vector<EnergyReport> samples;
  /// First sampled t with E(t, D_eps) / E(0, D) < delta, or -1.
  double first_below(double delta) const;
};

ConcentrationReport concentration_study(const WavePacket& packet, double eps,
                                        std::span<const double> t_list,
                                        const GridOptions& opts = {});

struct LipschitzSample {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double norm1 = 0.0;  // ||U(lambda2) - U(lambda1)||_1
  double M = 0.0;      // norm1 / ((lambda2 - lambda1) ||theta||)
};

/// ||U(lambda2) - U(lambda1)||_1 = (int |grad V|^2)^(1/2) on the full graded
/// grid for intervals of the given widths centred at `center`; V uses
/// `panels` Gauss-Legendre panels of order 8.
std::vector<LipschitzSample> lipschitz_study(const TriangleDomain& domain, const SpectralWindow& window,
                                             const BoundaryProfile& theta1, const BoundaryProfile& theta2,
                                             double center, std::span<const double> widths, int panels,
                                             const GridOptions& opts = {});

/// Seeded product-bump test functions g(x, y) = b((x - cx)/rx) b((y - cy)/ry),
/// b(z) = exp(1 - 1/(1 - z^2)), with supports inside D.
struct BumpTest {
  double cx = 0.0, cy = 0.0, rx = 0.0, ry = 0.0;
  double value(double x, double y) const;
  double dx(double x, double y) const;
  double dy(double x, double y) const;
  double dxx(double x, double y) const;
  double dyy(double x, double y) const;
};

struct TestFamilyOptions {
  std::uint64_t seed = 20240611;
  int count = 20;
  double x_min = 0.1;   // fraction of the leg
  double y_max = 1.0;   // supports stay below this height
  double margin = 0.01;
  double r_min = 0.03;
  double r_max = 0.12;
};

std::vector<BumpTest> make_bump_tests(const TriangleDomain& domain, const TestFamilyOptions& opts);

enum class ResidualRule { Midpoint, Gauss };

struct ResidualSuite {
  std::vector<double> residuals;  // one per test, normalized
  std::vector<double> raw;        // unnormalized
  double max() const;
};

/// |int u g_yy - lambda int u Lap g| / (int |u g_yy| + lambda int |u Lap g|)
/// for each test, integrated on an n x n cell grid of the test support.
ResidualSuite weak_residual_hyperbolic(const InvariantPair& slice, double lambda,
                                       std::span<const BumpTest> tests, int cells,
                                       ResidualRule rule = ResidualRule::Midpoint);

/// |int p_ttx g_x + p_tty g_y + p_y g_y| normalized by the integral of the
/// absolute values of the three terms; `drop_py` removes the p_y term.
ResidualSuite weak_residual_evolution(const WavePacket& packet, double t,
                                      std::span<const BumpTest> tests, int cells,
                                      bool drop_py = false);

/// Observed orders log2(r_h / r_{h/2}) between consecutive levels.
std::vector<double> observed_orders(std::span<const double> residuals);

}  // namespace sobtri
