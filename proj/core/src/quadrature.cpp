#include "sobtri/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "sobtri/error.hpp"

namespace sobtri {

std::vector<QuadNode> gauss_legendre(int n) {
  if (n < 1) throw ValidationError("Gauss-Legendre rule needs at least one point");
  std::vector<QuadNode> rule(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration from the Tricomi initial guess.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule[static_cast<std::size_t>(i)] = {-z, w};
    rule[static_cast<std::size_t>(n - 1 - i)] = {z, w};
  }
  if (n % 2 == 1) rule[static_cast<std::size_t>(n / 2)].x = 0.0;
  return rule;
}

std::vector<QuadNode> gauss_panels(double a, double b, int panels, int order) {
  if (panels < 1) throw ValidationError("composite rule needs at least one panel");
  const auto base = gauss_legendre(order);
  std::vector<QuadNode> out;
  out.reserve(static_cast<std::size_t>(panels) * base.size());
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (const auto& q : base) out.push_back({mid + 0.5 * h * q.x, 0.5 * h * q.w});
  }
  return out;
}

double pairwise_sum(std::span<const double> terms) {
  if (terms.size() <= 8) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
  }
  const std::size_t mid = terms.size() / 2;
  return pairwise_sum(terms.first(mid)) + pairwise_sum(terms.subspan(mid));
}

}  // namespace sobtri
