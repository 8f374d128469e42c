#include "sobtri/boundary.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "sobtri/error.hpp"
#include "sobtri/quadrature.hpp"

namespace sobtri {

double unit_bump(double z) {
  if (!(z > -1.0 && z < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - z * z));
}

namespace {

// Running integral of unit_bump tabulated on equal panels; a partial panel
// is finished with the same 16-point rule, so every lookup costs 16 exp().
struct BumpTable {
  static constexpr int kPanels = 128;
  std::array<double, kPanels + 1> prefix{};
  std::vector<QuadNode> rule = gauss_legendre(16);

  BumpTable() {
    const double h = 2.0 / kPanels;
    prefix[0] = 0.0;
    for (int p = 0; p < kPanels; ++p) {
      prefix[p + 1] = prefix[p] + partial(-1.0 + p * h, -1.0 + (p + 1) * h);
    }
  }

  double partial(double a, double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (const auto& q : rule) s += q.w * unit_bump(mid + half * q.x);
    return s * half;
  }

  double integral(double z) const {
    if (z <= -1.0) return 0.0;
    if (z >= 1.0) return prefix[kPanels];
    const double h = 2.0 / kPanels;
    const int p = std::min(kPanels - 1, static_cast<int>((z + 1.0) / h));
    const double a = -1.0 + p * h;
    return prefix[p] + partial(a, z);
  }
};

const BumpTable& bump_table() {
  static const BumpTable table;
  return table;
}

// Integral of unit_bump(z)^2 over (-1, 1).
double bump_square_integral() {
  static const double value = [] {
    double s = 0.0;
    for (const auto& q : gauss_panels(-1.0, 1.0, 256, 16)) {
      const double b = unit_bump(q.x);
      s += q.w * b * b;
    }
    return s;
  }();
  return value;
}

std::vector<double> parse_numbers(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string token(text.substr(pos, comma - pos));
    // trim
    const auto first = token.find_first_not_of(" \t");
    const auto last = token.find_last_not_of(" \t");
    if (first == std::string::npos) {
      throw ValidationError("empty number in " + std::string(what) + " spec '" +
                            std::string(text) + "'");
    }
    token = token.substr(first, last - first + 1);
    double v = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size() || !std::isfinite(v)) {
      throw ValidationError("bad number '" + token + "' in " + std::string(what) + " spec");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double unit_bump_integral(double z) { return bump_table().integral(z); }

BoundaryProfile BoundaryProfile::zero(double length) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ValidationError("profile length must be positive");
  }
  BoundaryProfile p;
  p.kind_ = Kind::Zero;
  p.length_ = length;
  return p;
}

BoundaryProfile BoundaryProfile::constant(double value, double length) {
  return piecewise({value}, length);
}

BoundaryProfile BoundaryProfile::piecewise(std::vector<double> values, double length) {
  if (values.empty()) throw ValidationError("piecewise profile needs at least one cell");
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("piecewise profile values must be finite");
  }
  BoundaryProfile p = zero(length);
  p.kind_ = Kind::PiecewiseConstant;
  p.values_ = std::move(values);
  return p;
}

BoundaryProfile BoundaryProfile::bump(double center, double width, double amplitude,
                                      double length) {
  if (!std::isfinite(center) || !std::isfinite(width) || !std::isfinite(amplitude)) {
    throw ValidationError("bump parameters must be finite");
  }
  if (!(width > 0.0) || !(center - 0.5 * width > 0.0) || !(center + 0.5 * width < 1.0)) {
    throw ValidationError("bump support must lie strictly inside the profile interval");
  }
  BoundaryProfile p = zero(length);
  p.kind_ = Kind::SmoothBump;
  p.center_ = center;
  p.width_ = width;
  p.amplitude_ = amplitude;
  return p;
}

double BoundaryProfile::eval(double s) const {
  const double tol = 1e-12 * length_;
  if (!(s >= -tol && s <= length_ + tol)) {
    throw RangeError("profile coordinate " + std::to_string(s) + " outside [0, " +
                     std::to_string(length_) + "]");
  }
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::PiecewiseConstant: {
      const auto n = static_cast<long>(values_.size());
      long i = static_cast<long>(std::floor(s / length_ * static_cast<double>(n)));
      i = std::clamp(i, 0L, n - 1);
      return values_[static_cast<std::size_t>(i)];
    }
    case Kind::SmoothBump: {
      const double z = (s / length_ - center_) / (0.5 * width_);
      return amplitude_ * unit_bump(z);
    }
  }
  return 0.0;
}

double BoundaryProfile::antiderivative(double s) const {
  const double tol = 1e-12 * length_;
  if (!(s >= -tol && s <= length_ + tol)) {
    throw RangeError("profile coordinate " + std::to_string(s) + " outside [0, " +
                     std::to_string(length_) + "]");
  }
  s = std::clamp(s, 0.0, length_);
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::PiecewiseConstant: {
      const auto n = static_cast<long>(values_.size());
      const double cell = length_ / static_cast<double>(n);
      long full = static_cast<long>(std::floor(s / cell));
      full = std::clamp(full, 0L, n);
      double acc = 0.0;
      for (long i = 0; i < full; ++i) acc += values_[static_cast<std::size_t>(i)] * cell;
      if (full < n) acc += values_[static_cast<std::size_t>(full)] * (s - full * cell);
      return acc;
    }
    case Kind::SmoothBump: {
      const double half = 0.5 * width_ * length_;
      const double z = (s - center_ * length_) / half;
      return amplitude_ * half * unit_bump_integral(z);
    }
  }
  return 0.0;
}

double BoundaryProfile::l2_norm() const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::PiecewiseConstant: {
      double acc = 0.0;
      for (double v : values_) acc += v * v;
      return std::sqrt(acc * length_ / static_cast<double>(values_.size()));
    }
    case Kind::SmoothBump:
      return std::abs(amplitude_) * std::sqrt(0.5 * width_ * length_ * bump_square_integral());
  }
  return 0.0;
}

double BoundaryProfile::sup_norm() const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::PiecewiseConstant: {
      double m = 0.0;
      for (double v : values_) m = std::max(m, std::abs(v));
      return m;
    }
    case Kind::SmoothBump:
      return std::abs(amplitude_);
  }
  return 0.0;
}

BoundaryProfile BoundaryProfile::scaled(double factor) const {
  BoundaryProfile p = *this;
  for (double& v : p.values_) v *= factor;
  p.amplitude_ *= factor;
  return p;
}

BoundaryProfile BoundaryProfile::with_length(double length) const {
  BoundaryProfile p = *this;
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ValidationError("profile length must be positive");
  }
  p.length_ = length;
  return p;
}

std::string BoundaryProfile::spec() const {
  switch (kind_) {
    case Kind::Zero:
      return "zero";
    case Kind::PiecewiseConstant: {
      std::string s = values_.size() == 1 ? "const:" : "pw:";
      for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) s += ',';
        s += fmt17(values_[i]);
      }
      return s;
    }
    case Kind::SmoothBump:
      return "bump:" + fmt17(center_) + "," + fmt17(width_) + "," + fmt17(amplitude_);
  }
  return "zero";
}

BoundaryProfile parse_profile(std::string_view spec, double length) {
  if (spec == "zero" || spec == "0") return BoundaryProfile::zero(length);
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ValidationError("profile spec '" + std::string(spec) + "' has no kind prefix");
  }
  const auto kind = spec.substr(0, colon);
  const auto nums = parse_numbers(spec.substr(colon + 1), "profile");
  if (kind == "const") {
    if (nums.size() != 1) throw ValidationError("const profile takes exactly one value");
    return BoundaryProfile::constant(nums[0], length);
  }
  if (kind == "pw") return BoundaryProfile::piecewise(nums, length);
  if (kind == "bump") {
    if (nums.size() != 3) throw ValidationError("bump profile takes center,width,amplitude");
    return BoundaryProfile::bump(nums[0], nums[1], nums[2], length);
  }
  throw ValidationError("unknown profile kind '" + std::string(kind) + "'");
}

SpectralWindow::SpectralWindow(double lo, double hi, Shape shape, double amplitude)
    : lo_(lo), hi_(hi), shape_(shape), amplitude_(amplitude) {
  if (!(lo > 0.0 && hi < 1.0 && lo < hi) || !std::isfinite(amplitude)) {
    throw ValidationError("window support must satisfy 0 < lo < hi < 1");
  }
}

double SpectralWindow::eval(double lambda) const {
  if (!(lambda > lo_ && lambda < hi_)) return 0.0;
  const double z = (2.0 * lambda - lo_ - hi_) / (hi_ - lo_);
  if (shape_ == Shape::Smooth) return amplitude_ * unit_bump(z);
  const double q = 1.0 - z * z;
  return amplitude_ * q * q;
}

Branch SpectralWindow::branch(const TriangleDomain& domain) const {
  const double thr = domain.threshold();
  if (hi_ < thr - kThresholdGuard) return Branch::U;
  if (lo_ > thr + kThresholdGuard) return Branch::V;
  throw ValidationError("window [" + fmt17(lo_) + ", " + fmt17(hi_) +
                        "] straddles the branch threshold " + fmt17(thr));
}

double SpectralWindow::integral() const {
  const double half = 0.5 * (hi_ - lo_);
  if (shape_ == Shape::Smooth) return amplitude_ * half * unit_bump_integral(1.0);
  return amplitude_ * half * 16.0 / 15.0;
}

SpectralWindow SpectralWindow::scaled(double factor) const {
  return SpectralWindow(lo_, hi_, shape_, amplitude_ * factor);
}

std::string SpectralWindow::spec() const {
  std::string s = "window:" + fmt17(lo_) + "," + fmt17(hi_) + "," +
                  (shape_ == Shape::Smooth ? "smooth" : "c1");
  if (amplitude_ != 1.0) s += "," + fmt17(amplitude_);
  return s;
}

SpectralWindow make_window(double lo, double hi, SpectralWindow::Shape shape,
                           const TriangleDomain& domain, double amplitude) {
  SpectralWindow w(lo, hi, shape, amplitude);
  w.validate(domain);
  return w;
}

SpectralWindow parse_window(std::string_view spec) {
  constexpr std::string_view prefix = "window:";
  if (spec.substr(0, prefix.size()) != prefix) {
    throw ValidationError("window spec '" + std::string(spec) + "' must start with 'window:'");
  }
  auto body = spec.substr(prefix.size());
  // split off the shape token
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t comma = body.find(',', pos);
    if (comma == std::string_view::npos) comma = body.size();
    parts.emplace_back(body.substr(pos, comma - pos));
    pos = comma + 1;
  }
  if (parts.size() < 3 || parts.size() > 4) {
    throw ValidationError("window spec needs lo,hi,shape[,amplitude]");
  }
  const auto lohi = parse_numbers(parts[0] + "," + parts[1], "window");
  SpectralWindow::Shape shape;
  if (parts[2] == "smooth") {
    shape = SpectralWindow::Shape::Smooth;
  } else if (parts[2] == "c1" || parts[2] == "taper") {
    shape = SpectralWindow::Shape::C1Taper;
  } else {
    throw ValidationError("unknown window shape '" + parts[2] + "'");
  }
  double amplitude = 1.0;
  if (parts.size() == 4) amplitude = parse_numbers(parts[3], "window")[0];
  return SpectralWindow(lohi[0], lohi[1], shape, amplitude);
}

}  // namespace sobtri
