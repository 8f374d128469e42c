#pragma once

#include <cstddef>
#include <vector>

namespace sobtri {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Absolute snapping tolerance for reflection points and closure tests.
inline constexpr double kGeometryTolerance = 1e-12;
/// Half-width of the excluded band around the branch threshold in lambda.
inline constexpr double kThresholdGuard = 1e-10;
/// Billiard traces stop once the current vertex is this close to the corner.
inline constexpr double kTraceCornerCutoff = 1e-14;

/// Right triangle D = {0 < x < 1/alpha, 0 < y < alpha x} with vertices
/// O = (0,0), A = (1/alpha, 0), B = (1/alpha, 1).
class TriangleDomain {
 public:
  explicit TriangleDomain(double alpha);

  double alpha() const { return alpha_; }
  /// Length of the horizontal leg OA, 1/alpha.
  double leg() const { return 1.0 / alpha_; }
  Point O() const { return {0.0, 0.0}; }
  Point A() const { return {leg(), 0.0}; }
  Point B() const { return {leg(), 1.0}; }
  double area() const { return 0.5 / alpha_; }

  /// Strict interior test.
  bool contains(double x, double y) const;
  /// Closure test with an absolute slack.
  bool in_closure(double x, double y, double tol = kGeometryTolerance) const;

  /// lambda = 1/(1+alpha^2), where characteristics run parallel to OB.
  double threshold() const { return 1.0 / (1.0 + alpha_ * alpha_); }

 private:
  double alpha_;
};

TriangleDomain make_domain(double alpha);

enum class Branch { U, V };

/// Spectral parameter with derived characteristic slope a = sqrt(lambda/(1-lambda))
/// and per-bounce similarity ratio l.
struct SpectralPoint {
  double lambda = 0.0;
  double a = 0.0;
  Branch branch = Branch::U;
  double l = 1.0;
};

SpectralPoint spectral_point(double lambda, const TriangleDomain& domain);

/// Reflection ratio below the threshold, l(mu) = (sqrt(1-mu) + alpha sqrt(mu)) /
/// (sqrt(1-mu) - alpha sqrt(mu)).
double l_of_mu(double mu, double alpha);

/// Inverse of l_of_mu on the U-branch.
double mu_of_l(double l, double alpha);

/// Reflection ratio above the threshold, (a alpha + 1)/(a alpha - 1).
double l_tilde_of_mu(double mu, double alpha);
/// Inverse of l_tilde_of_mu on the V-branch.
double mu_of_l_tilde(double l, double alpha);

struct CharEndpoints {
  double p = 0.0;  // right angle abscissa on OB
  double q = 0.0;  // left angle abscissa on OB
};

/// Abscissae on OB of the characteristic triangle with apex (x, y).
CharEndpoints char_endpoints(double x, double y, double mu, double alpha);

/// Sub-regions of D used by the residual, energy and Lipschitz diagnostics.
struct RegionSpec {
  enum class Kind { Full, RiemannD2, CornerExcluded, DyadicStrip };

  Kind kind = Kind::Full;
  double lambda2 = 0.0;  // RiemannD2
  double epsilon = 0.0;  // CornerExcluded
  int strip = 0;         // DyadicStrip index k
  double l1 = 0.0;       // DyadicStrip ratio

  static RegionSpec full() { return {}; }
  static RegionSpec riemann(double lambda2);
  static RegionSpec corner_excluded(double epsilon);
  static RegionSpec dyadic_strip(int k, double l1);

  bool contains(const TriangleDomain& domain, double x, double y) const;
};

/// Vertex of the data side a billiard ray issues from. Below the threshold
/// the data side is AB; above it the data side is OA and `B` names O.
enum class TraceStart { A, B };

struct TraceVertex {
  Point point;
  int family = 1;  // family of the segment leaving this vertex
};

/// Reflection-law trajectory of the characteristic ray issued from `start`.
/// The first entry is the start vertex itself.
std::vector<TraceVertex> billiard_trace(const TriangleDomain& domain, const SpectralPoint& spectral,
                                        TraceStart start, std::size_t max_steps);

}  // namespace sobtri
