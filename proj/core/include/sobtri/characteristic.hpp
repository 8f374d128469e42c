#pragma once

#include <vector>

#include "sobtri/boundary.hpp"
#include "sobtri/geometry.hpp"

namespace sobtri {

/// Evaluations closer than this (in units of the leg) to the accumulation
/// corner are refused.
inline constexpr double kCornerCutoff = 1e-13;

struct SliceValue {
  double u = 0.0;
  double ux = 0.0;
  double uy = 0.0;
};

/// One spectral slice u(x, y; lambda), written as f(x - a y) + g(x + a y).
///
/// The invariants live in a canonical frame where the rays accumulate at the
/// origin: below the threshold that is D itself, above it the congruent
/// triangle (x, y) -> (alpha (1 - y), 1 - alpha x) with slope 1/alpha and
/// parameter 1 - lambda. On the canonical frame with leg L, slope a and
/// ratio l:
///   - on [L - a, L] f is the integral of the data from the corner A,
///     on [L, L + a] g is (gauge f(L) = g(L) = 0);
///   - g(s) = -f(s) on (0, L)               (reflection on OA);
///   - f(s) = -g(l s) on (0, L - a)         (reflection on OB),
/// which folds to f(s) = f(l s) below L/l. Evaluation at distance x from the
/// corner takes at most ceil(log_l(L/x)) + 2 folds.
///
/// Immutable once built; safe to share across threads.
class InvariantPair {
 public:
  const TriangleDomain& domain() const { return domain_; }
  const SpectralPoint& spectral() const { return spectral_; }
  Branch branch() const { return spectral_.branch; }
  const BoundaryProfile& data() const { return data_; }

  /// u(x, y); RangeError outside the closed triangle, CornerSingularityError
  /// at the accumulation corner.
  double value(double x, double y) const;
  /// Value and gradient.
  SliceValue evaluate(double x, double y) const;

  /// Canonical-frame invariants and their derivatives.
  double f(double xi) const;
  double g(double eta) const;
  double df(double xi) const;
  double dg(double eta) const;
  /// Number of folds needed to evaluate f at xi.
  int depth(double xi) const;

  double canonical_alpha() const { return alpha_c_; }
  double canonical_leg() const { return leg_c_; }
  double canonical_a() const { return a_c_; }
  double ratio() const { return l_c_; }

  /// A bound on sup |u| from the range of the base invariants.
  double bound() const { return bound_; }

 private:
  friend InvariantPair u_slice(const TriangleDomain&, const BoundaryProfile&,
                               const SpectralPoint&);
  friend InvariantPair v_slice(const TriangleDomain&, const BoundaryProfile&,
                               const SpectralPoint&);

  InvariantPair(const TriangleDomain& domain, const BoundaryProfile& data,
                const SpectralPoint& spectral);

  // Canonical-frame data theta_c(s) on [0, 1] and its integral from 0.
  double data_value(double s) const;
  double data_integral(double s) const;

  // f and f' in one pass.
  void f_impl(double xi, double& value, double& deriv, int* depth) const;
  void g_impl(double eta, double& value, double& deriv) const;
  SliceValue evaluate_canonical(double xc, double yc) const;

  TriangleDomain domain_;
  BoundaryProfile data_;
  SpectralPoint spectral_;
  bool mirrored_ = false;
  double alpha_c_ = 1.0;
  double leg_c_ = 1.0;
  double a_c_ = 0.0;
  double l_c_ = 1.0;
  double data_total_ = 0.0;  // integral of theta_2 over OA, mirrored frame only
  double bound_ = 0.0;
};

/// Slice below the threshold from data theta_1 on AB: u = 0 on the boundary
/// and u_x = theta_1 on AB.
InvariantPair u_slice(const TriangleDomain& domain, const BoundaryProfile& theta1,
                      const SpectralPoint& spectral);

/// Slice above the threshold from data theta_2 on OA: v = 0 on the boundary
/// and v_y = theta_2 on OA.
InvariantPair v_slice(const TriangleDomain& domain, const BoundaryProfile& theta2,
                      const SpectralPoint& spectral);

/// Branch dispatch.
InvariantPair w_slice(const TriangleDomain& domain, const BoundaryProfile& theta1,
                      const BoundaryProfile& theta2, double lambda);

/// Free-function spelling of InvariantPair::value.
double eval_u(const InvariantPair& pair, double x, double y);

/// Traces of a U-branch slice on the hypotenuse and on OA.
///
/// phi(x) = (alpha u_x + u_y / a^2) on y = alpha x, phi0(x) = u_y(x, 0) / a^2,
/// Phi(x) = phi(x) (l - 1) / (2 alpha l). For piecewise-constant data Phi is
/// piecewise constant with values +-c_i l^k on the cells bounded by
///   x_{k,j} = (n + j) / (2 n alpha l^k) + (n - j) / (2 n alpha l^(k+1)),
/// j = -n..n, k = 0, 1, ...
class TraceProfile {
 public:
  explicit TraceProfile(const InvariantPair& pair);

  double phi(double x) const;
  double phi0(double x) const;
  /// Rescaled trace computed from the invariants.
  double Phi(double x) const;
  /// Cell-table evaluation of Phi; only for piecewise-constant data.
  double Phi_cells(double x) const;
  bool exact() const { return exact_; }

  /// Breakpoint x_{k,j}.
  double breakpoint(int k, int j) const;
  /// Cell [lo, hi) containing x and its Phi value (piecewise data only).
  struct Cell {
    double lo = 0.0;
    double hi = 0.0;
    double Phi = 0.0;
  };
  Cell cell(double x) const;

  /// Integral of phi from `from` to `to` (either order). Exact cell sums for
  /// piecewise data, adaptive Gauss-Kronrod otherwise.
  double integral(double from, double to) const;

  /// phi / Phi = 2 alpha l / (l - 1).
  double phi_scale() const { return scale_; }
  double ratio() const { return l_; }

 private:
  InvariantPair pair_;
  double alpha_;
  double a_;
  double l_;
  double scale_;
  bool exact_;
  int n_ = 0;
  std::vector<double> c_;
};

TraceProfile hypotenuse_trace(const InvariantPair& pair);

/// u(x, y) = (a / 2) * integral from P to Q of phi, with P >= Q the
/// characteristic endpoints on OB. Defined on the closure of
/// D2 = D n {a y > x + a - 1/alpha}; RegionError elsewhere.
double riemann_eval(const InvariantPair& pair, double x, double y);

}  // namespace sobtri
