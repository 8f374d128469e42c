#pragma once

#include <span>
#include <vector>

#include "sobtri/boundary.hpp"
#include "sobtri/characteristic.hpp"
#include "sobtri/geometry.hpp"

namespace sobtri {

/// Gauss-Legendre rule in lambda carrying the slices at its nodes:
///   value(x, y) = sum_q W_q sigma(mu_q) w(x, y; mu_q) over [lo, hi].
class SpectralIntegral {
 public:
  SpectralIntegral(const TriangleDomain& domain, const SpectralWindow& window,
                   const BoundaryProfile& theta1, const BoundaryProfile& theta2, double lo,
                   double hi, int panels, int order = 8);

  double value(double x, double y) const;
  SliceValue evaluate(double x, double y) const;
  /// Same rule with the extra factor mu: sum_q W_q mu_q sigma(mu_q) w(x, y; mu_q).
  double moment(double x, double y) const;

  std::size_t nodes() const { return mu_.size(); }
  int panels() const { return panels_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool empty() const { return mu_.empty(); }

 private:
  double lo_;
  double hi_;
  int panels_;
  std::vector<double> mu_;
  std::vector<double> weight_;  // quadrature weight times sigma
  std::vector<InvariantPair> slices_;
};

/// U(x, y; lambda_cap) = integral of sigma(mu) w(x, y; mu) over mu < lambda_cap.
///
/// Zero for lambda_cap <= lambda_*, saturated for lambda_cap >= lambda_**.
/// The panel count is doubled until the values on a fixed probe set change by
/// less than quad_tol relative to their size.
class AveragedField {
 public:
  static constexpr int kMaxPanels = 8192;

  AveragedField(const TriangleDomain& domain, const SpectralWindow& window,
                const BoundaryProfile& theta1, const BoundaryProfile& theta2, double lambda_cap,
                double quad_tol);

  double value(double x, double y) const;
  SliceValue evaluate(double x, double y) const;
  double lambda_cap() const { return cap_; }
  int panels() const { return rule_.panels(); }
  std::size_t nodes() const { return rule_.nodes(); }
  bool is_zero() const { return rule_.empty(); }

 private:
  double cap_;
  SpectralIntegral rule_;
};

AveragedField averaged_field(const TriangleDomain& domain, const SpectralWindow& window,
                             const BoundaryProfile& theta1, const BoundaryProfile& theta2,
                             double lambda_cap, double quad_tol);

/// Panel Gauss-Legendre rule in nu = sqrt(lambda) for one window. The node
/// count is at least
///   ceil(nodes_per_period * max((nu_hi - nu_lo) t_max / (2 pi), folds)) + min_nodes,
/// times `refine`, where `folds` is the change across the window of the
/// number of reflections needed to reach distance `depth` (relative to the
/// leg) from the accumulation corner. Without the second term slices deep in
/// the corner are aliased in lambda.
struct QuadraturePlan {
  double t_max = 0.0;
  double depth = 0.0;
  int order = 8;
  double nodes_per_period = 10.0;
  int min_nodes = 32;
  int refine = 1;
  int max_nodes = 1 << 16;

  int required_nodes(const TriangleDomain& domain, const SpectralWindow& window) const;
  int panels(const TriangleDomain& domain, const SpectralWindow& window) const;
};

/// One sigma-weighted family of slices w(.; lambda) with its boundary data.
struct PacketComponent {
  SpectralWindow window;
  BoundaryProfile theta1;
  BoundaryProfile theta2;
};

struct PacketSample {
  double p = 0.0;
  double px = 0.0;
  double py = 0.0;
  double pt = 0.0;
  double pxt = 0.0;
  double pyt = 0.0;
  double ptt = 0.0;
  double pttx = 0.0;
  double ptty = 0.0;
};

struct EnergyDensity {
  double py = 0.0;
  double pxt = 0.0;
  double pyt = 0.0;
};

/// p(x, y; t) = int cos(nu t) 2 nu sigma_0(nu^2) w_0 dnu + int sin(nu t) 2 sigma_1(nu^2) w_1 dnu,
/// the lambda = nu^2 form of the cosine/sine superposition with initial data
/// p(0) = p_0, p_t(0) = p_1. Slices are built once at the quadrature nodes.
class WavePacket {
 public:
  WavePacket(const TriangleDomain& domain, std::vector<PacketComponent> cosine,
             std::vector<PacketComponent> sine, const QuadraturePlan& plan);

  const TriangleDomain& domain() const { return domain_; }
  const QuadraturePlan& plan() const { return plan_; }
  std::size_t nodes() const { return nu_.size(); }
  /// Branches present in the packet (decides the accumulation corners).
  bool has_u_branch() const { return has_u_; }
  bool has_v_branch() const { return has_v_; }
  /// Largest sup |w| bound over the node slices times the total weight.
  double bound() const { return bound_; }

  /// All time samples at one point; BudgetError for t beyond the plan.
  std::vector<PacketSample> sample(double x, double y, std::span<const double> times) const;
  PacketSample sample(double x, double y, double t) const;
  double value(double x, double y, double t) const { return sample(x, y, t).p; }

  std::vector<double> evolve(double t, std::span<const Point> points) const;
  std::vector<EnergyDensity> evolve_derivatives(double t, std::span<const Point> points) const;

 private:
  void check_time(double t) const;

  TriangleDomain domain_;
  QuadraturePlan plan_;
  std::vector<double> nu_;
  std::vector<double> weight_;  // includes sigma and the nu-Jacobian
  std::vector<char> sine_;
  std::vector<InvariantPair> slices_;
  bool has_u_ = false;
  bool has_v_ = false;
  double bound_ = 0.0;
};

}  // namespace sobtri
