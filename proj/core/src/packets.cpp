#include "sobtri/packets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sobtri/error.hpp"
#include "sobtri/quadrature.hpp"

namespace sobtri {

SpectralIntegral::SpectralIntegral(const TriangleDomain& domain, const SpectralWindow& window,
                                   const BoundaryProfile& theta1, const BoundaryProfile& theta2,
                                   double lo, double hi, int panels, int order)
    : lo_(std::max(lo, window.lo())), hi_(std::min(hi, window.hi())), panels_(panels) {
  window.validate(domain);
  if (!(hi_ > lo_)) {
    panels_ = 0;
    return;
  }
  for (const auto& q : gauss_panels(lo_, hi_, panels, order)) {
    const double s = window.eval(q.x);
    if (s == 0.0) continue;
    mu_.push_back(q.x);
    weight_.push_back(q.w * s);
    slices_.push_back(w_slice(domain, theta1, theta2, q.x));
  }
}

double SpectralIntegral::value(double x, double y) const {
  double s = 0.0;
  for (std::size_t q = 0; q < slices_.size(); ++q) s += weight_[q] * slices_[q].value(x, y);
  return s;
}

SliceValue SpectralIntegral::evaluate(double x, double y) const {
  SliceValue out;
  for (std::size_t q = 0; q < slices_.size(); ++q) {
    const SliceValue v = slices_[q].evaluate(x, y);
    out.u += weight_[q] * v.u;
    out.ux += weight_[q] * v.ux;
    out.uy += weight_[q] * v.uy;
  }
  return out;
}

double SpectralIntegral::moment(double x, double y) const {
  double s = 0.0;
  for (std::size_t q = 0; q < slices_.size(); ++q)
    s += weight_[q] * mu_[q] * slices_[q].value(x, y);
  return s;
}

namespace {

SpectralIntegral adapt_rule(const TriangleDomain& domain, const SpectralWindow& window,
                            const BoundaryProfile& theta1, const BoundaryProfile& theta2,
                            double cap, double tol) {
  if (!(tol > 0.0)) throw ValidationError("quadrature tolerance must be positive");
  const double leg = domain.leg();
  std::vector<Point> probes;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const double x = leg * (0.25 + 0.7 * i / 4.0);
      probes.push_back({x, domain.alpha() * x * (0.1 + 0.8 * j / 4.0)});
    }
  auto sample = [&](const SpectralIntegral& r) {
    std::vector<double> v;
    for (const auto& p : probes) v.push_back(r.value(p.x, p.y));
    return v;
  };
  int panels = 4;
  SpectralIntegral prev(domain, window, theta1, theta2, window.lo(), cap, panels);
  if (prev.empty()) return prev;
  auto pv = sample(prev);
  while (panels < AveragedField::kMaxPanels) {
    panels *= 2;
    SpectralIntegral next(domain, window, theta1, theta2, window.lo(), cap, panels);
    const auto nv = sample(next);
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < nv.size(); ++i) {
      diff = std::max(diff, std::abs(nv[i] - pv[i]));
      scale = std::max(scale, std::abs(nv[i]));
    }
    if (diff <= tol * scale || scale == 0.0) return next;
    prev = std::move(next);
    pv = nv;
  }
  throw BudgetError("averaged field did not reach tolerance " + std::to_string(tol) + " within " +
                    std::to_string(AveragedField::kMaxPanels) + " panels");
}

}  // namespace

AveragedField::AveragedField(const TriangleDomain& domain, const SpectralWindow& window,
                             const BoundaryProfile& theta1, const BoundaryProfile& theta2,
                             double lambda_cap, double quad_tol)
    : cap_(lambda_cap), rule_(adapt_rule(domain, window, theta1, theta2, lambda_cap, quad_tol)) {
  if (!(lambda_cap >= 0.0 && lambda_cap <= 1.0))
    throw RangeError("lambda_cap must lie in [0, 1]");
}

double AveragedField::value(double x, double y) const { return rule_.value(x, y); }

SliceValue AveragedField::evaluate(double x, double y) const { return rule_.evaluate(x, y); }

AveragedField averaged_field(const TriangleDomain& domain, const SpectralWindow& window,
                             const BoundaryProfile& theta1, const BoundaryProfile& theta2,
                             double lambda_cap, double quad_tol) {
  return AveragedField(domain, window, theta1, theta2, lambda_cap, quad_tol);
}

int QuadraturePlan::required_nodes(const TriangleDomain& domain, const SpectralWindow& window) const {
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw ValidationError("t_max must be finite and >= 0");
  if (!(depth >= 0.0 && depth < 1.0)) throw ValidationError("plan depth must lie in [0, 1)");
  const double nu_lo = std::sqrt(window.lo());
  const double nu_hi = std::sqrt(window.hi());
  const double periods = (nu_hi - nu_lo) * t_max / (2.0 * std::numbers::pi);
  double folds = 0.0;
  if (depth > 0.0) {
    const double alpha = domain.alpha();
    const bool u = window.branch(domain) == Branch::U;
    auto ratio = [&](double mu) { return u ? l_of_mu(mu, alpha) : l_tilde_of_mu(mu, alpha); };
    folds = std::log(1.0 / depth) *
            std::abs(1.0 / std::log(ratio(window.lo())) - 1.0 / std::log(ratio(window.hi())));
  }
  return static_cast<int>(std::ceil(nodes_per_period * std::max(periods, folds))) + min_nodes;
}

int QuadraturePlan::panels(const TriangleDomain& domain, const SpectralWindow& window) const {
  if (order < 1 || refine < 1) throw ValidationError("quadrature order and refinement must be >= 1");
  const long need = static_cast<long>(required_nodes(domain, window)) * refine;
  if (need > max_nodes)
    throw BudgetError("packet quadrature needs " + std::to_string(need) +
                      " nodes, budget is " + std::to_string(max_nodes));
  return static_cast<int>((need + order - 1) / order);
}

WavePacket::WavePacket(const TriangleDomain& domain, std::vector<PacketComponent> cosine,
                       std::vector<PacketComponent> sine, const QuadraturePlan& plan)
    : domain_(domain), plan_(plan) {
  auto add = [&](const PacketComponent& c, bool is_sine) {
    const Branch b = c.window.branch(domain);
    (b == Branch::U ? has_u_ : has_v_) = true;
    const double nlo = std::sqrt(c.window.lo());
    const double nhi = std::sqrt(c.window.hi());
    for (const auto& q : gauss_panels(nlo, nhi, plan.panels(domain, c.window), plan.order)) {
      const double lam = q.x * q.x;
      const double s = c.window.eval(lam);
      if (s == 0.0) continue;
      const double w = is_sine ? 2.0 * s * q.w : 2.0 * q.x * s * q.w;
      nu_.push_back(q.x);
      weight_.push_back(w);
      sine_.push_back(is_sine ? 1 : 0);
      slices_.push_back(w_slice(domain, c.theta1, c.theta2, lam));
      bound_ += std::abs(w) * slices_.back().bound();
    }
  };
  for (const auto& c : cosine) add(c, false);
  for (const auto& c : sine) add(c, true);
}

void WavePacket::check_time(double t) const {
  if (!(t >= 0.0)) throw ValidationError("time must be >= 0");
  if (t > plan_.t_max * (1.0 + 1e-12))
    throw BudgetError("time " + std::to_string(t) + " beyond the quadrature plan horizon " +
                      std::to_string(plan_.t_max));
}

std::vector<PacketSample> WavePacket::sample(double x, double y,
                                             std::span<const double> times) const {
  for (double t : times) check_time(t);
  std::vector<SliceValue> v(slices_.size());
  for (std::size_t q = 0; q < slices_.size(); ++q) v[q] = slices_[q].evaluate(x, y);
  std::vector<PacketSample> out(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    PacketSample s;
    for (std::size_t q = 0; q < v.size(); ++q) {
      const double nu = nu_[q];
      const double c = std::cos(nu * t);
      const double sn = std::sin(nu * t);
      double T, Tt;
      if (sine_[q]) {
        T = sn;
        Tt = nu * c;
      } else {
        T = c;
        Tt = -nu * sn;
      }
      const double Ttt = -nu * nu * T;
      const double w = weight_[q];
      s.p += w * T * v[q].u;
      s.px += w * T * v[q].ux;
      s.py += w * T * v[q].uy;
      s.pt += w * Tt * v[q].u;
      s.pxt += w * Tt * v[q].ux;
      s.pyt += w * Tt * v[q].uy;
      s.ptt += w * Ttt * v[q].u;
      s.pttx += w * Ttt * v[q].ux;
      s.ptty += w * Ttt * v[q].uy;
    }
    out[k] = s;
  }
  return out;
}

PacketSample WavePacket::sample(double x, double y, double t) const {
  return sample(x, y, std::span<const double>(&t, 1)).front();
}

std::vector<double> WavePacket::evolve(double t, std::span<const Point> points) const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(sample(p.x, p.y, t).p);
  return out;
}

std::vector<EnergyDensity> WavePacket::evolve_derivatives(double t,
                                                          std::span<const Point> points) const {
  std::vector<EnergyDensity> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const auto s = sample(p.x, p.y, t);
    out.push_back({s.py, s.pxt, s.pyt});
  }
  return out;
}

}  // namespace sobtri
