#pragma once

#include <span>
#include <vector>

namespace sobtri {

struct QuadNode {
  double x = 0.0;
  double w = 0.0;
};

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
std::vector<QuadNode> gauss_legendre(int n);

/// Composite Gauss-Legendre rule on [a, b] with `panels` equal panels of
/// `order` points each.
std::vector<QuadNode> gauss_panels(double a, double b, int panels, int order);

/// Pairwise (cascade) summation; fixes the reduction order so results do not
/// depend on how callers chunk their loops.
double pairwise_sum(std::span<const double> terms);

template <class F>
double integrate(const std::vector<QuadNode>& rule, F&& f) {
  double s = 0.0;
  for (const auto& q : rule) s += q.w * f(q.x);
  return s;
}

}  // namespace sobtri
