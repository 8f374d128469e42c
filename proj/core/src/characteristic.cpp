#include "sobtri/characteristic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sobtri/error.hpp"

namespace sobtri {

namespace {

constexpr int kMaxFolds = 4096;

double clamp01(double s) { return std::clamp(s, 0.0, 1.0); }

}  // namespace

InvariantPair::InvariantPair(const TriangleDomain& domain, const BoundaryProfile& data,
                             const SpectralPoint& spectral)
    : domain_(domain), data_(data), spectral_(spectral) {
  const double alpha = domain.alpha();
  if (spectral.branch == Branch::U) {
    mirrored_ = false;
    alpha_c_ = alpha;
    leg_c_ = 1.0 / alpha;
    a_c_ = spectral.a;
  } else {
    mirrored_ = true;
    alpha_c_ = 1.0 / alpha;
    leg_c_ = alpha;
    a_c_ = 1.0 / spectral.a;
    data_total_ = data_.antiderivative(data_.length());
  }
  l_c_ = spectral.l;

  // Theta_c is monotone between breakpoints (and on the whole bump support),
  // so its extremes sit on the breakpoint grid.
  std::vector<double> probes{0.0, 1.0};
  if (data_.kind() == BoundaryProfile::Kind::PiecewiseConstant) {
    const auto n = data_.values().size();
    for (std::size_t i = 1; i < n; ++i) probes.push_back(static_cast<double>(i) / n);
  }
  double m = 0.0;
  for (double s : probes) m = std::max(m, std::abs(data_integral(s)));
  bound_ = a_c_ * m;
}

double InvariantPair::data_value(double s) const {
  s = clamp01(s);
  if (!mirrored_) return data_.eval(s);
  const double len = data_.length();
  return -data_.eval(std::clamp(len * (1.0 - s), 0.0, len)) / domain_.alpha();
}

double InvariantPair::data_integral(double s) const {
  s = clamp01(s);
  if (!mirrored_) return data_.antiderivative(s);
  const double len = data_.length();
  return -(data_total_ - data_.antiderivative(std::clamp(len * (1.0 - s), 0.0, len)));
}

void InvariantPair::f_impl(double xi, double& value, double& deriv, int* depth) const {
  const double L = leg_c_;
  const double a = a_c_;
  const double l = l_c_;
  double factor = 1.0;
  int folds = 0;
  for (;;) {
    if (xi >= L - a) {
      const double s = clamp01((L - xi) / a);
      value = -0.5 * a * data_integral(s);
      deriv = factor * 0.5 * data_value(s);
      break;
    }
    const double eta = l * xi;
    ++folds;
    if (eta >= L) {
      // f(xi) = -g(l xi) with g on its base range
      const double s = clamp01((eta - L) / a);
      value = -0.5 * a * data_integral(s);
      deriv = -factor * l * 0.5 * data_value(s);
      break;
    }
    // f(xi) = -g(l xi) = f(l xi)
    xi = eta;
    factor *= l;
    if (folds > kMaxFolds) throw CornerSingularityError("fold recursion did not terminate");
  }
  if (depth) *depth = folds;
}

void InvariantPair::g_impl(double eta, double& value, double& deriv) const {
  const double L = leg_c_;
  if (eta >= L) {
    const double s = clamp01((eta - L) / a_c_);
    value = 0.5 * a_c_ * data_integral(s);
    deriv = 0.5 * data_value(s);
    return;
  }
  f_impl(eta, value, deriv, nullptr);
  value = -value;
  deriv = -deriv;
}

namespace {

void check_invariant_argument(double s, double leg, double a) {
  if (!(s > 0.0)) throw CornerSingularityError("invariant argument at the accumulation corner");
  if (s > leg + a + kGeometryTolerance) throw RangeError("invariant argument beyond the data range");
}

}  // namespace

double InvariantPair::f(double xi) const {
  check_invariant_argument(xi, leg_c_, 0.0);
  double v = 0.0, d = 0.0;
  f_impl(std::min(xi, leg_c_), v, d, nullptr);
  return v;
}

double InvariantPair::df(double xi) const {
  check_invariant_argument(xi, leg_c_, 0.0);
  double v = 0.0, d = 0.0;
  f_impl(std::min(xi, leg_c_), v, d, nullptr);
  return d;
}

double InvariantPair::g(double eta) const {
  check_invariant_argument(eta, leg_c_, a_c_);
  double v = 0.0, d = 0.0;
  g_impl(eta, v, d);
  return v;
}

double InvariantPair::dg(double eta) const {
  check_invariant_argument(eta, leg_c_, a_c_);
  double v = 0.0, d = 0.0;
  g_impl(eta, v, d);
  return d;
}

int InvariantPair::depth(double xi) const {
  check_invariant_argument(xi, leg_c_, 0.0);
  double v = 0.0, d = 0.0;
  int k = 0;
  f_impl(std::min(xi, leg_c_), v, d, &k);
  return k;
}

SliceValue InvariantPair::evaluate_canonical(double xc, double yc) const {
  const double L = leg_c_;
  xc = std::clamp(xc, 0.0, L);
  yc = std::clamp(yc, 0.0, alpha_c_ * xc);
  if (xc < kCornerCutoff * L)
    throw CornerSingularityError("evaluation within the corner cutoff of the accumulation vertex");
  const double xi = xc - a_c_ * yc;
  const double eta = xc + a_c_ * yc;
  double fv = 0.0, fd = 0.0, gv = 0.0, gd = 0.0;
  if (xi > 0.0) {
    f_impl(xi, fv, fd, nullptr);
  } else {
    throw CornerSingularityError("characteristic through the accumulation vertex");
  }
  g_impl(eta, gv, gd);
  return {fv + gv, fd + gd, a_c_ * (gd - fd)};
}

SliceValue InvariantPair::evaluate(double x, double y) const {
  if (!domain_.in_closure(x, y))
    throw RangeError("point (" + std::to_string(x) + ", " + std::to_string(y) +
                     ") outside the closed triangle");
  if (!mirrored_) return evaluate_canonical(x, y);
  const double alpha = domain_.alpha();
  const SliceValue r = evaluate_canonical(alpha * (1.0 - y), 1.0 - alpha * x);
  return {r.u, -alpha * r.uy, -alpha * r.ux};
}

double InvariantPair::value(double x, double y) const { return evaluate(x, y).u; }

namespace {

void check_length(const BoundaryProfile& p, double expected, const char* what) {
  if (std::abs(p.length() - expected) > 1e-12 * std::max(1.0, expected))
    throw ValidationError(std::string(what) + " has length " + std::to_string(p.length()) +
                          ", expected " + std::to_string(expected));
}

}  // namespace

InvariantPair u_slice(const TriangleDomain& domain, const BoundaryProfile& theta1,
                      const SpectralPoint& spectral) {
  if (spectral.branch != Branch::U) throw BranchError("u_slice needs a U-branch parameter");
  check_length(theta1, 1.0, "theta_1");
  return InvariantPair(domain, theta1, spectral);
}

InvariantPair v_slice(const TriangleDomain& domain, const BoundaryProfile& theta2,
                      const SpectralPoint& spectral) {
  if (spectral.branch != Branch::V) throw BranchError("v_slice needs a V-branch parameter");
  check_length(theta2, domain.leg(), "theta_2");
  return InvariantPair(domain, theta2, spectral);
}

InvariantPair w_slice(const TriangleDomain& domain, const BoundaryProfile& theta1,
                      const BoundaryProfile& theta2, double lambda) {
  const SpectralPoint sp = spectral_point(lambda, domain);
  return sp.branch == Branch::U ? u_slice(domain, theta1, sp) : v_slice(domain, theta2, sp);
}

double eval_u(const InvariantPair& pair, double x, double y) { return pair.value(x, y); }

TraceProfile::TraceProfile(const InvariantPair& pair) : pair_(pair) {
  if (pair.branch() != Branch::U) throw BranchError("hypotenuse trace needs a U-branch slice");
  alpha_ = pair.domain().alpha();
  a_ = pair.spectral().a;
  l_ = pair.spectral().l;
  scale_ = 2.0 * alpha_ * l_ / (l_ - 1.0);
  exact_ = pair.data().kind() != BoundaryProfile::Kind::SmoothBump;
  if (pair.data().kind() == BoundaryProfile::Kind::PiecewiseConstant) {
    c_.assign(pair.data().values().begin(), pair.data().values().end());
  } else if (pair.data().kind() == BoundaryProfile::Kind::Zero) {
    c_.assign(1, 0.0);
  }
  n_ = static_cast<int>(c_.size());
}

double TraceProfile::phi(double x) const {
  const SliceValue v = pair_.evaluate(x, alpha_ * x);
  return alpha_ * v.ux + v.uy / (a_ * a_);
}

double TraceProfile::phi0(double x) const { return pair_.evaluate(x, 0.0).uy / (a_ * a_); }

double TraceProfile::Phi(double x) const { return phi(x) / scale_; }

double TraceProfile::breakpoint(int k, int j) const {
  const double lk = std::pow(l_, k);
  return (n_ + j) / (2.0 * n_ * alpha_ * lk) + (n_ - j) / (2.0 * n_ * alpha_ * lk * l_);
}

TraceProfile::Cell TraceProfile::cell(double x) const {
  if (!exact_) throw ValidationError("cell table needs piecewise-constant data");
  const double leg = 1.0 / alpha_;
  if (!(x > 0.0) || x > leg * (1.0 + 1e-12)) throw RangeError("trace abscissa outside (0, 1/alpha]");
  int k = std::max(0, static_cast<int>(std::ceil(std::log(leg / x) / std::log(l_))) - 1);
  while (x < breakpoint(k, -n_)) ++k;
  while (k > 0 && x >= breakpoint(k, n_)) --k;
  const double lk = std::pow(l_, k);
  const double t = (alpha_ * lk * x - 1.0 / l_) / (1.0 - 1.0 / l_);
  int j = static_cast<int>(std::floor(2.0 * n_ * t)) - n_;
  j = std::clamp(j, -n_, n_ - 1);
  while (j > -n_ && x < breakpoint(k, j)) --j;
  while (j < n_ - 1 && x >= breakpoint(k, j + 1)) ++j;
  Cell c;
  c.lo = breakpoint(k, j);
  c.hi = breakpoint(k, j + 1);
  const double v = j >= 0 ? c_[static_cast<std::size_t>(j)] : -c_[static_cast<std::size_t>(-j - 1)];
  c.Phi = v * lk;
  return c;
}

double TraceProfile::Phi_cells(double x) const { return cell(x).Phi; }

double TraceProfile::integral(double from, double to) const {
  if (from == to) return 0.0;
  if (from > to) return -integral(to, from);
  if (exact_) {
    double acc = 0.0;
    double x = from;
    while (x < to) {
      const Cell c = cell(x);
      double hi = std::min(c.hi, to);
      if (!(hi > x)) hi = std::min(std::nextafter(x, std::numeric_limits<double>::infinity()), to);
      acc += c.Phi * (hi - x);
      x = hi;
    }
    return scale_ * acc;
  }
  // Split at the strip boundaries 1/(alpha l^k) where phi changes scale.
  std::vector<double> cuts{from};
  for (double b = 1.0 / alpha_; b > from; b /= l_)
    if (b < to) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(to);
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    acc += GK::integrate([this](double s) { return phi(s); }, cuts[i], cuts[i + 1], 20, 1e-13);
  }
  return acc;
}

TraceProfile hypotenuse_trace(const InvariantPair& pair) { return TraceProfile(pair); }

double riemann_eval(const InvariantPair& pair, double x, double y) {
  if (pair.branch() != Branch::U) throw BranchError("Riemann formula needs a U-branch slice");
  const TriangleDomain& d = pair.domain();
  if (!d.in_closure(x, y)) throw RangeError("point outside the closed triangle");
  const double a = pair.spectral().a;
  if (a * y < x + a - d.leg() - kGeometryTolerance)
    throw RegionError("point outside the Riemann region D2");
  const CharEndpoints pq = char_endpoints(x, y, pair.spectral().lambda, d.alpha());
  const TraceProfile trace(pair);
  return 0.5 * a * trace.integral(pq.p, pq.q);
}

}  // namespace sobtri
