#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sobtri/characteristic.hpp"
#include "sobtri/error.hpp"

using namespace sobtri;

namespace {

InvariantPair fixture(const BoundaryProfile& theta = BoundaryProfile::constant(1.0)) {
  const auto d = make_domain(1.0);
  return u_slice(d, theta, spectral_point(0.2, d));
}

// Characteristic-lattice marcher: u(xi, eta) on the grid (i h, j h) built from
// the Cauchy data on AB alone (first cell) and the zero boundary values,
// using the diamond identity u(i,j) + u(i+1,j+1) = u(i+1,j) + u(i,j+1).
// Exact at lattice nodes for any solution of the form F(xi) + G(eta).
// Domain: alpha = 1, a = 1/2, so OB is eta = 3 xi and AB is xi + eta = 2.
struct UMarcher {
  int N;
  double h;
  std::vector<double> u;  // (2N+1)^2, index i*(2N+1)+j

  UMarcher(const BoundaryProfile& theta, int n) : N(n), h(1.0 / n), u((2 * n + 1) * (2 * n + 1), 0.0) {
    const double a = 0.5;
    auto F = [&](double xi) { return -0.5 * a * theta.antiderivative(std::clamp((1.0 - xi) / a, 0.0, 1.0)); };
    auto G = [&](double eta) { return 0.5 * a * theta.antiderivative(std::clamp((eta - 1.0) / a, 0.0, 1.0)); };
    for (int s = 2 * N; s >= 0; --s) {
      for (int i = 0; i <= s; ++i) {
        const int j = s - i;
        if (j < i || j > 3 * i || i > 2 * N || j > 2 * N) continue;
        double& v = at(i, j);
        if (j == i || j == 3 * i || s == 2 * N) {
          v = 0.0;
        } else if (s == 2 * N - 1) {
          v = F(i * h) + G(j * h);
        } else {
          v = at(i + 1, j) + at(i, j + 1) - at(i + 1, j + 1);
        }
      }
    }
  }
  double& at(int i, int j) { return u[i * (2 * N + 1) + j]; }
};

}  // namespace

TEST(USlice, HandValues) {
  const auto p = fixture();
  EXPECT_NEAR(p.f(0.7), -0.15, 1e-15);
  EXPECT_NEAR(p.g(0.9), 0.05, 1e-15);
  EXPECT_NEAR(p.value(0.8, 0.2), -0.10, 1e-15);
  EXPECT_NEAR(p.f(0.2), -0.2, 1e-15);
  EXPECT_NEAR(p.f(0.6), -0.2, 1e-15);
  EXPECT_NEAR(p.g(0.4), 0.1, 1e-15);
  EXPECT_NEAR(eval_u(p, 0.3, 0.2), -0.10, 1e-15);
  EXPECT_NEAR(p.f(1.0), 0.0, 0.0);
  EXPECT_NEAR(p.g(1.0), 0.0, 0.0);
  EXPECT_EQ(p.value(1.0, 0.0), 0.0);
}

TEST(USlice, BranchAndRangeErrors) {
  const auto d = make_domain(1.0);
  EXPECT_THROW(u_slice(d, BoundaryProfile::constant(1.0), spectral_point(0.8, d)), BranchError);
  const auto p = fixture();
  EXPECT_THROW(p.value(0.5, 0.6), RangeError);
  EXPECT_THROW(p.value(1.1, 0.1), RangeError);
  EXPECT_THROW(p.value(0.0, 0.0), CornerSingularityError);
  EXPECT_THROW(p.value(1e-14, 0.0), CornerSingularityError);
  EXPECT_THROW(u_slice(d, BoundaryProfile::constant(1.0, 2.0), spectral_point(0.2, d)), ValidationError);
}

TEST(USlice, AgreesWithLatticeMarcher) {
  const std::vector<BoundaryProfile> data{
      BoundaryProfile::constant(1.0), BoundaryProfile::piecewise({1.0, -2.0, 0.5}),
      BoundaryProfile::bump(0.45, 0.6, 1.0)};
  for (const auto& theta : data) {
    const int N = 360;
    UMarcher m(theta, N);
    const auto p = fixture(theta);
    double worst = 0.0;
    for (int i = 1; i <= 2 * N; ++i) {
      for (int j = i; j <= std::min(3 * i, 2 * N - i); ++j) {
        const double xi = i * m.h, eta = j * m.h;
        const double x = 0.5 * (xi + eta);
        const double y = eta - xi;  // (eta - xi) / (2a)
        if (x < 1e-3) continue;
        worst = std::max(worst, std::abs(p.value(x, std::min(y, x)) - m.at(i, j)));
      }
    }
    EXPECT_LT(worst, 1e-12) << theta.spec();
  }
}

TEST(USlice, VanishesOnBoundary) {
  for (const auto& theta : {BoundaryProfile::constant(1.0), BoundaryProfile::piecewise({2.0, -1.0, 0.3, 4.0})}) {
    const auto p = fixture(theta);
    double sup = 0.0;
    for (int i = 1; i < 200; ++i)
      for (int j = 1; j < i; ++j) sup = std::max(sup, std::abs(p.value(i / 200.0, j / 200.0)));
    double worst = 0.0;
    for (int k = 1; k <= 333; ++k) {
      const double s = k / 334.0;
      worst = std::max(worst, std::abs(p.value(s, 0.0)));
      worst = std::max(worst, std::abs(p.value(s, s)));
      worst = std::max(worst, std::abs(p.value(1.0, s)));
    }
    EXPECT_LE(worst, 1e-12 * sup) << theta.spec();
  }
}

TEST(USlice, NormalDerivativeOnAB) {
  const auto theta = BoundaryProfile::bump(0.5, 0.6, 1.0);
  const auto p = fixture(theta);
  for (double y : {0.3, 0.5, 0.62}) {
    double prev = 1e300;
    for (double h : {1e-2, 5e-3, 2.5e-3}) {
      const double fd = (p.value(1.0, y) - p.value(1.0 - h, y)) / h;
      const double err = std::abs(fd - theta.eval(y));
      EXPECT_LT(err, prev);
      prev = err;
    }
    EXPECT_LT(prev, 1e-2);
    EXPECT_NEAR(p.evaluate(1.0, y).ux, theta.eval(y), 1e-14);
  }
}

TEST(USlice, SupBound) {
  const auto p = fixture();
  double sup = 0.0;
  for (int i = 1; i <= 200; ++i)
    for (int j = 1; j <= 200; ++j) {
      const double x = i / 201.0;
      const double y = x * j / 201.0;
      sup = std::max(sup, std::abs(p.value(x, y)));
    }
  EXPECT_LE(sup, 0.25 + 1e-15);
  EXPECT_NEAR(p.bound(), 0.5, 1e-15);  // a * max|Theta| = 0.5 * 1
  for (double xi = 0.001; xi < 1.0; xi += 0.001) {
    EXPECT_LE(p.f(xi), 1e-15);
    EXPECT_GE(p.f(xi), -0.25 - 1e-15);
    EXPECT_LE(std::abs(p.f(xi)), 0.5 * 0.5 * 1.0 + 1e-15);
  }
}

TEST(USlice, DepthBound) {
  const auto p = fixture();
  EXPECT_LE(p.depth(1e-9), 21);
  for (double x = 0.9; x > 1e-12; x /= 1.7) {
    const int bound = static_cast<int>(std::ceil(std::log(1.0 / x) / std::log(3.0))) + 2;
    EXPECT_LE(p.depth(x), bound) << x;
  }
  EXPECT_NO_THROW(p.value(1e-9, 0.5e-9));
}

TEST(USlice, SelfSimilarExtension) {
  std::mt19937_64 rng(11);
  const auto p = fixture(BoundaryProfile::piecewise({1.0, -0.5, 2.0}));
  std::uniform_real_distribution<double> U(1e-6, 1.0 / 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double xi = U(rng);
    EXPECT_NEAR(p.f(xi), p.f(3.0 * xi), 1e-15);
  }
}

TEST(USlice, LambdaContinuity) {
  const auto d = make_domain(1.0);
  const auto theta = BoundaryProfile::bump(0.5, 0.6, 1.0);
  std::vector<double> vals;
  const double h = 1e-4;
  for (double lam = 0.15; lam <= 0.25; lam += h) vals.push_back(u_slice(d, theta, spectral_point(lam, d)).value(0.55, 0.3));
  // slope estimate from a coarse grid
  double slope = 0.0;
  for (std::size_t i = 100; i < vals.size(); i += 100) slope = std::max(slope, std::abs(vals[i] - vals[i - 100]) / (100 * h));
  for (std::size_t i = 1; i < vals.size(); ++i) EXPECT_LE(std::abs(vals[i] - vals[i - 1]), 4.0 * h * (slope + 1.0));
}

TEST(Trace, FixtureCells) {
  const auto t = hypotenuse_trace(fixture());
  ASSERT_TRUE(t.exact());
  EXPECT_NEAR(t.phi_scale(), 3.0, 1e-15);
  const std::map<double, double> expected{{0.8, 3.0}, {0.5, -3.0}, {0.3, 9.0}, {0.15, -9.0}, {0.1, 27.0}, {0.05, -27.0}};
  for (auto [x, v] : expected) {
    EXPECT_NEAR(t.phi(x), v, 1e-12) << x;
    EXPECT_NEAR(t.Phi_cells(x), v / 3.0, 1e-12) << x;
  }
  EXPECT_NEAR(t.breakpoint(0, 0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(t.breakpoint(0, 1), 1.0, 1e-15);
  EXPECT_NEAR(t.breakpoint(0, -1), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(t.breakpoint(1, 0), 2.0 / 9.0, 1e-15);
}

TEST(Trace, CellsMatchInvariants) {
  for (const auto& theta : {BoundaryProfile::constant(1.0), BoundaryProfile::piecewise({1.0, -2.0, 0.5, 3.0})}) {
    const auto t = hypotenuse_trace(fixture(theta));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-9.0, 0.0);
    for (int i = 0; i < 1000; ++i) {
      const double x = std::pow(3.0, U(rng));
      const double ref = t.Phi_cells(x);
      EXPECT_NEAR(t.Phi(x), ref, 1e-12 * std::max(1.0, std::abs(ref))) << x;
    }
  }
}

TEST(Trace, SelfSimilarAndGrowth) {
  const auto theta = BoundaryProfile::piecewise({1.0, -2.0, 0.5});
  const auto t = hypotenuse_trace(fixture(theta));
  for (int i = 1; i < 200; ++i) {
    const double x = 1.0 / 3.0 + (2.0 / 3.0) * i / 200.0;
    EXPECT_NEAR(t.Phi(x / 3.0), 3.0 * t.Phi(x), 1e-12 * std::abs(t.Phi(x / 3.0)));
  }
  for (int k = 0; k < 8; ++k) {
    double m = 0.0;
    for (int i = 0; i < 600; ++i) {
      const double x = (1.0 / std::pow(3.0, k + 1)) * (1.0 + 2.0 * (i + 0.5) / 600.0);
      m = std::max(m, std::abs(t.Phi(x)));
    }
    EXPECT_NEAR(m / (std::pow(3.0, k) * 2.0), 1.0, 1e-12) << k;
  }
}

TEST(Trace, AgreesWithFiniteDifferences) {
  const auto p = fixture(BoundaryProfile::bump(0.5, 0.6, 1.0));
  const auto t = hypotenuse_trace(p);
  const double a = 0.5;
  for (double x : {0.3, 0.55, 0.8}) {
    const double h = 1e-6;
    const double ux = (p.value(x, x - h) - p.value(x - h, x - h)) / h;
    const double uy = (p.value(x, x) - p.value(x, x - h)) / h;
    EXPECT_NEAR(t.phi(x), ux + uy / (a * a), 1e-3 * (1.0 + std::abs(t.phi(x))));
    const double uy0 = p.value(x, h) / h;
    EXPECT_NEAR(t.phi0(x), uy0 / (a * a), 1e-3 * (1.0 + std::abs(t.phi0(x))));
  }
}

TEST(Trace, L2NormLinearInData) {
  auto norm = [](const TraceProfile& t, double eps) {
    double s = 0.0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
      const double x = eps + (1.0 - eps) * (i + 0.5) / n;
      s += t.phi(x) * t.phi(x);
    }
    return std::sqrt(s * (1.0 - eps) / n);
  };
  for (double eps : {0.1, 0.05}) {
    const double base = norm(hypotenuse_trace(fixture(BoundaryProfile::constant(1.0))), eps);
    EXPECT_TRUE(std::isfinite(base));
    for (double c : {2.0, -3.0}) {
      const double n = norm(hypotenuse_trace(fixture(BoundaryProfile::constant(c))), eps);
      EXPECT_NEAR(n, std::abs(c) * base, 1e-12 * n);
    }
  }
}

TEST(Riemann, HandValue) {
  const auto p = fixture();
  const auto t = hypotenuse_trace(p);
  EXPECT_NEAR(t.integral(0.4, 0.25 + 0.1 / 6.0), -0.4, 1e-14);
  EXPECT_NEAR(riemann_eval(p, 0.3, 0.2), -0.10, 1e-14);
  EXPECT_EQ(riemann_eval(p, 0.4, 0.4), 0.0);
  EXPECT_THROW(riemann_eval(p, 0.9, 0.1), RegionError);
}

TEST(Riemann, AdaptiveOracle) {
  const auto t = hypotenuse_trace(fixture(BoundaryProfile::piecewise({1.0, -1.0})));
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  double ref = 0.0;
  std::vector<double> cuts{0.1};
  for (int k = 0; k < 4; ++k)
    for (int j = -2; j <= 2; ++j) {
      const double b = t.breakpoint(k, j);
      if (b > 0.1 && b < 0.9) cuts.push_back(b);
    }
  cuts.push_back(0.9);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    ref += GK::integrate([&](double s) { return t.phi(s); }, cuts[i], cuts[i + 1], 10, 1e-14);
  EXPECT_NEAR(t.integral(0.1, 0.9), ref, 1e-12);
  EXPECT_NEAR(t.integral(0.9, 0.1), -ref, 1e-12);
}

TEST(Riemann, AgreesWithInvariantsOnD2) {
  const auto p = fixture();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int n = 0;
  while (n < 100) {
    const double x = U(rng), y = U(rng) * x;
    if (!(0.5 * y > x - 0.5) || x < 1e-3) continue;
    EXPECT_NEAR(riemann_eval(p, x, y), p.value(x, y), 1e-12) << x << " " << y;
    ++n;
  }
}

TEST(Riemann, SmoothDataWithinQuadratureTolerance) {
  const auto p = fixture(BoundaryProfile::bump(0.5, 0.6, 1.0));
  for (auto [x, y] : {std::pair{0.3, 0.2}, std::pair{0.4, 0.35}, std::pair{0.2, 0.05}}) {
    EXPECT_NEAR(riemann_eval(p, x, y), p.value(x, y), 1e-10) << x << " " << y;
  }
}

TEST(VSlice, BoundaryAndData) {
  const auto d = make_domain(1.0);
  const auto theta2 = BoundaryProfile::bump(0.5, 0.6, 1.0);
  const auto v = v_slice(d, theta2, spectral_point(0.8, d));
  EXPECT_THROW(v_slice(d, theta2, spectral_point(0.2, d)), BranchError);
  double sup = 0.0;
  for (int i = 1; i < 100; ++i)
    for (int j = 1; j < i; ++j) sup = std::max(sup, std::abs(v.value(i / 100.0, j / 100.0)));
  ASSERT_GT(sup, 0.0);
  for (int k = 0; k <= 300; ++k) {
    const double s = k / 300.0;
    if (s < 0.999999) {
      EXPECT_LE(std::abs(v.value(s, 0.0)), 1e-12 * sup);
      EXPECT_LE(std::abs(v.value(1.0, s)), 1e-12 * sup);
      EXPECT_LE(std::abs(v.value(s, s)), 1e-12 * sup);
    }
  }
  for (double x : {0.3, 0.5, 0.7}) {
    EXPECT_NEAR(v.evaluate(x, 0.0).uy, theta2.eval(x), 1e-14);
    std::vector<double> errs;
    for (double h : {4e-3, 2e-3, 1e-3}) errs.push_back(std::abs(v.value(x, h) / h - theta2.eval(x)));
    EXPECT_GE(std::log2(errs[0] / errs[2]) / 2.0, 0.9);
  }
  EXPECT_THROW(v.value(1.0, 1.0), CornerSingularityError);
}

TEST(VSlice, AgreesWithLatticeMarcher) {
  // alpha = 1, lambda = 0.8: a = 2, OB is xi = -eta/3, data on OA.
  const auto d = make_domain(1.0);
  const auto theta2 = BoundaryProfile::piecewise({1.0, -0.5, 2.0});
  const auto v = v_slice(d, theta2, spectral_point(0.8, d));
  const int N = 240;
  const double h = 1.0 / N, a = 2.0;
  auto G = [&](double s) { return theta2.antiderivative(std::clamp(s, 0.0, 1.0)) / (2.0 * a); };
  std::map<std::pair<int, int>, double> u;
  auto inside = [&](int i, int j) { return j >= i && 3 * i >= -j && i + j <= 2 * N; };
  double worst = 0.0;
  for (int dlt = 0; dlt <= 2 * N; ++dlt) {
    for (int i = -N; i <= 2 * N; ++i) {
      const int j = i + dlt;
      if (!inside(i, j)) continue;
      double val;
      if (dlt == 0 || 3 * i == -j || i + j == 2 * N) val = 0.0;
      else if (dlt == 1) val = G(j * h) - G(i * h);
      else val = u.at({i, j - 1}) + u.at({i + 1, j}) - u.at({i + 1, j - 1});
      u[{i, j}] = val;
      const double x = 0.5 * (i + j) * h, y = (j - i) * h / (2.0 * a);
      if (std::hypot(1.0 - x, 1.0 - y) > 1e-3) worst = std::max(worst, std::abs(v.value(x, std::min(y, x)) - val));
    }
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(WSlice, Dispatch) {
  const auto d = make_domain(1.0);
  const auto t1 = BoundaryProfile::constant(1.0);
  const auto t2 = BoundaryProfile::constant(1.0);
  EXPECT_EQ(w_slice(d, t1, t2, 0.2).branch(), Branch::U);
  EXPECT_EQ(w_slice(d, t1, t2, 0.8).branch(), Branch::V);
  EXPECT_THROW(w_slice(d, t1, t2, 0.5), DegenerateParameterError);
}
