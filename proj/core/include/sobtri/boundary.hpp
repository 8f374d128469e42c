#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sobtri/geometry.hpp"

namespace sobtri {

/// Boundary data theta_1 (on AB, length 1) or theta_2 (on OA, length 1/alpha).
///
/// Piecewise-constant profiles live on the uniform grid i/n of the profile
/// length and are right-continuous at breakpoints. Bumps are scaled copies of
/// exp(1 - 1/(1 - z^2)); their centre and width are given as fractions of the
/// profile length so a spec string means the same thing on either side.
class BoundaryProfile {
 public:
  enum class Kind { Zero, PiecewiseConstant, SmoothBump };

  static BoundaryProfile zero(double length = 1.0);
  static BoundaryProfile constant(double value, double length = 1.0);
  static BoundaryProfile piecewise(std::vector<double> values, double length = 1.0);
  static BoundaryProfile bump(double center, double width, double amplitude, double length = 1.0);

  Kind kind() const { return kind_; }
  double length() const { return length_; }
  std::span<const double> values() const { return values_; }
  double bump_center() const { return center_; }
  double bump_width() const { return width_; }
  double bump_amplitude() const { return amplitude_; }

  /// Value at arclength s in [0, length]; throws RangeError outside.
  double eval(double s) const;
  double operator()(double s) const { return eval(s); }

  /// Integral of the profile over [0, s], s in [0, length].
  double antiderivative(double s) const;

  double l2_norm() const;
  double sup_norm() const;

  BoundaryProfile scaled(double factor) const;
  BoundaryProfile with_length(double length) const;

  /// Canonical config string (`zero`, `const:...`, `pw:...`, `bump:...`).
  std::string spec() const;

 private:
  BoundaryProfile() = default;

  Kind kind_ = Kind::Zero;
  double length_ = 1.0;
  std::vector<double> values_;
  double center_ = 0.0;  // fractions of length_
  double width_ = 0.0;
  double amplitude_ = 0.0;
};

/// Parses `zero`, `const:c`, `pw:c1,c2,...` or `bump:center,width,amplitude`.
BoundaryProfile parse_profile(std::string_view spec, double length = 1.0);

/// Unit bump exp(1 - 1/(1 - z^2)) on (-1, 1) and its running integral from -1.
double unit_bump(double z);
double unit_bump_integral(double z);

/// Spectral window sigma supported on [lo, hi] with peak value `amplitude` at
/// the midpoint.
class SpectralWindow {
 public:
  enum class Shape { C1Taper, Smooth };

  SpectralWindow(double lo, double hi, Shape shape, double amplitude = 1.0);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  Shape shape() const { return shape_; }
  double amplitude() const { return amplitude_; }

  /// sigma(lambda); zero outside the support.
  double eval(double lambda) const;
  double operator()(double lambda) const { return eval(lambda); }

  /// Branch the support belongs to; ValidationError if it straddles the
  /// threshold or touches the guard band.
  Branch branch(const TriangleDomain& domain) const;
  void validate(const TriangleDomain& domain) const { (void)branch(domain); }

  double integral() const;
  SpectralWindow scaled(double factor) const;
  std::string spec() const;

 private:
  double lo_;
  double hi_;
  Shape shape_;
  double amplitude_;
};

/// Validated window for `domain`.
SpectralWindow make_window(double lo, double hi, SpectralWindow::Shape shape,
                           const TriangleDomain& domain, double amplitude = 1.0);

/// Parses `window:lo,hi,smooth|c1[,amplitude]`.
SpectralWindow parse_window(std::string_view spec);

}  // namespace sobtri
