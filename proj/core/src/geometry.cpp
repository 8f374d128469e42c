#include "sobtri/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sobtri/error.hpp"

namespace sobtri {

TriangleDomain::TriangleDomain(double alpha) : alpha_(alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0) {
    throw DomainParameterError("triangle slope alpha must be finite and positive, got " +
                               std::to_string(alpha));
  }
}

bool TriangleDomain::contains(double x, double y) const {
  return x > 0.0 && x < leg() && y > 0.0 && y < alpha_ * x;
}

bool TriangleDomain::in_closure(double x, double y, double tol) const {
  return x >= -tol && x <= leg() + tol && y >= -tol && y <= alpha_ * x + tol;
}

TriangleDomain make_domain(double alpha) { return TriangleDomain(alpha); }

namespace {

void check_threshold(double lambda, double threshold) {
  if (std::abs(lambda - threshold) < kThresholdGuard) {
    throw DegenerateParameterError("lambda = " + std::to_string(lambda) +
                                   " lies on the branch threshold 1/(1+alpha^2) = " +
                                   std::to_string(threshold));
  }
}

}  // namespace

SpectralPoint spectral_point(double lambda, const TriangleDomain& domain) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw RangeError("spectral parameter must lie in (0,1), got " + std::to_string(lambda));
  }
  const double threshold = domain.threshold();
  check_threshold(lambda, threshold);

  SpectralPoint sp;
  sp.lambda = lambda;
  sp.a = std::sqrt(lambda / (1.0 - lambda));
  if (lambda < threshold) {
    sp.branch = Branch::U;
    sp.l = l_of_mu(lambda, domain.alpha());
  } else {
    sp.branch = Branch::V;
    sp.l = l_tilde_of_mu(lambda, domain.alpha());
  }
  return sp;
}

double l_of_mu(double mu, double alpha) {
  const double threshold = 1.0 / (1.0 + alpha * alpha);
  if (!(mu > 0.0 && mu < threshold)) {
    throw RangeError("l(mu) needs mu in (0, 1/(1+alpha^2)), got " + std::to_string(mu));
  }
  check_threshold(mu, threshold);
  // (c + alpha s)/(c - alpha s) with the denominator rationalised; c^2 - alpha^2 s^2
  // is evaluated as 1 - mu(1+alpha^2) to avoid cancellation near the threshold.
  const double num = std::sqrt(1.0 - mu) + alpha * std::sqrt(mu);
  return num * num / (1.0 - mu * (1.0 + alpha * alpha));
}

double mu_of_l(double l, double alpha) {
  if (!(l > 1.0) || !std::isfinite(l)) {
    throw RangeError("mu(l) needs a finite l > 1, got " + std::to_string(l));
  }
  const double lm = l - 1.0;
  const double lp = l + 1.0;
  return lm * lm / (alpha * alpha * lp * lp + lm * lm);
}

double l_tilde_of_mu(double mu, double alpha) {
  const double threshold = 1.0 / (1.0 + alpha * alpha);
  if (!(mu > threshold && mu < 1.0)) {
    throw RangeError("l~(mu) needs mu in (1/(1+alpha^2), 1), got " + std::to_string(mu));
  }
  check_threshold(mu, threshold);
  const double num = alpha * std::sqrt(mu) + std::sqrt(1.0 - mu);
  return num * num / (mu * (1.0 + alpha * alpha) - 1.0);
}

double mu_of_l_tilde(double l, double alpha) {
  if (!(l > 1.0) || !std::isfinite(l)) {
    throw RangeError("mu(l~) needs a finite l > 1, got " + std::to_string(l));
  }
  const double lm = l - 1.0;
  const double lp = l + 1.0;
  return lp * lp / (alpha * alpha * lm * lm + lp * lp);
}

CharEndpoints char_endpoints(double x, double y, double mu, double alpha) {
  const TriangleDomain domain(alpha);
  if (mu >= domain.threshold() - kThresholdGuard) {
    if (std::abs(mu - domain.threshold()) < kThresholdGuard) {
      throw DegenerateParameterError("characteristic endpoints undefined on the threshold");
    }
    throw BranchError("characteristic endpoints on OB need a U-branch parameter");
  }
  if (!domain.in_closure(x, y)) {
    throw RangeError("characteristic apex outside the closed triangle");
  }
  const double l = l_of_mu(mu, alpha);
  const double lower = (alpha * x - y) / (2.0 * alpha);
  const double upper = (alpha * x + y) / (2.0 * alpha);
  return {lower * l + upper, upper + lower / l};
}

RegionSpec RegionSpec::riemann(double lambda2) {
  RegionSpec r;
  r.kind = Kind::RiemannD2;
  r.lambda2 = lambda2;
  return r;
}

RegionSpec RegionSpec::corner_excluded(double epsilon) {
  RegionSpec r;
  r.kind = Kind::CornerExcluded;
  r.epsilon = epsilon;
  return r;
}

RegionSpec RegionSpec::dyadic_strip(int k, double l1) {
  RegionSpec r;
  r.kind = Kind::DyadicStrip;
  r.strip = k;
  r.l1 = l1;
  return r;
}

bool RegionSpec::contains(const TriangleDomain& domain, double x, double y) const {
  if (!domain.contains(x, y)) return false;
  const double leg = domain.leg();
  switch (kind) {
    case Kind::Full:
      return true;
    case Kind::RiemannD2: {
      const double a2 = std::sqrt(lambda2 / (1.0 - lambda2));
      return a2 * y > x + a2 - leg;
    }
    case Kind::CornerExcluded:
      return x > epsilon && y < 1.0 - epsilon;
    case Kind::DyadicStrip:
      return x > leg / std::pow(l1, strip + 1) && x < leg / std::pow(l1, strip);
  }
  return false;
}

namespace {

// Trace in a triangle of the canonical form with slope `alpha` and
// characteristic slope `a` (a * alpha < 1).
std::vector<TraceVertex> trace_canonical(double alpha, double a, Point start, int family,
                                         std::size_t max_steps) {
  std::vector<TraceVertex> out;
  if (max_steps == 0) return out;

  const TriangleDomain tri(alpha);
  const double leg = tri.leg();
  const Point vertex_a = tri.A();
  const Point vertex_b = tri.B();

  Point p = start;
  out.push_back({p, family});
  for (std::size_t step = 1; step < max_steps; ++step) {
    const double scale = std::hypot(p.x, p.y);
    if (scale < kTraceCornerCutoff) break;

    Point d = family == 1 ? Point{a, 1.0} : Point{-a, 1.0};
    const double probe = 1e-6 * scale / std::hypot(d.x, d.y);
    if (!tri.contains(p.x + probe * d.x, p.y + probe * d.y)) {
      d = {-d.x, -d.y};
    }

    const double s_min = 1e-9 * scale / std::hypot(d.x, d.y);
    double best = std::numeric_limits<double>::infinity();
    Point hit{};
    auto consider = [&](double s, Point q) {
      if (s > s_min && s < best) {
        best = s;
        hit = q;
      }
    };
    const double tol = kGeometryTolerance;
    if (d.y != 0.0) {  // OA, y = 0
      const double s = -p.y / d.y;
      const double x = p.x + s * d.x;
      if (x >= -tol && x <= leg + tol) consider(s, {x, 0.0});
    }
    if (d.x != 0.0) {  // AB, x = leg
      const double s = (leg - p.x) / d.x;
      const double y = p.y + s * d.y;
      if (y >= -tol && y <= 1.0 + tol) consider(s, {leg, y});
    }
    {  // OB, y = alpha x
      const double den = d.y - alpha * d.x;
      if (den != 0.0) {
        const double s = (alpha * p.x - p.y) / den;
        const double x = p.x + s * d.x;
        if (x >= -tol && x <= leg + tol) consider(s, {x, alpha * x});
      }
    }
    if (!std::isfinite(best)) break;

    auto near = [&](Point v) { return std::hypot(hit.x - v.x, hit.y - v.y) < tol; };
    if (near(vertex_a) || near(vertex_b)) {
      throw DegenerateParameterError(
          "billiard ray lands on a vertex of the triangle; continuation is undefined");
    }
    p = hit;
    family = family == 1 ? 2 : 1;
    out.push_back({p, family});
  }
  return out;
}

}  // namespace

std::vector<TraceVertex> billiard_trace(const TriangleDomain& domain, const SpectralPoint& spectral,
                                        TraceStart start, std::size_t max_steps) {
  if (std::abs(spectral.lambda - domain.threshold()) < kThresholdGuard) {
    throw BranchError("billiard trace undefined on the branch threshold");
  }
  const SpectralPoint sp = spectral_point(spectral.lambda, domain);
  if (sp.branch == Branch::U) {
    const Point origin = start == TraceStart::B ? domain.B() : domain.A();
    return trace_canonical(domain.alpha(), sp.a, origin, start == TraceStart::B ? 1 : 2,
                           max_steps);
  }

  // Above the threshold, trace in the congruent triangle obtained by
  // (x, y) -> (alpha (1 - y), 1 - alpha x) where the parameter becomes 1 - lambda
  // and the slope 1/alpha, then map the vertices back.
  const double alpha_r = 1.0 / domain.alpha();
  const TriangleDomain reduced(alpha_r);
  const Point origin = start == TraceStart::B ? reduced.B() : reduced.A();
  auto path = trace_canonical(alpha_r, 1.0 / sp.a, origin, start == TraceStart::B ? 1 : 2,
                              max_steps);
  for (auto& v : path) {
    const Point q = v.point;
    v.point = {(1.0 - q.y) / domain.alpha(), 1.0 - q.x / domain.alpha()};
  }
  return path;
}

}  // namespace sobtri
