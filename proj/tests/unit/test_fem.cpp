#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "sobtri/error.hpp"
#include "sobtri/fem.hpp"

using namespace sobtri;

namespace {

Vector random_field(const DiscreteOperator& op, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(op.dofs()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = N(rng);
  return v;
}

double tri_area(Point a, Point b, Point c) {
  return 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

}  // namespace

TEST(Quadrangle, EigenfunctionPiecesAndContinuity) {
  using Q = Quadrangle;
  EXPECT_DOUBLE_EQ(Q::eigenfunction(0.05, 0.5), 0.05);
  EXPECT_DOUBLE_EQ(Q::eigenfunction(0.2, 0.9), 0.05);
  EXPECT_DOUBLE_EQ(Q::eigenfunction(0.3, 0.4), 0.1);
  EXPECT_NEAR(Q::eigenfunction(0.35, 0.6), 0.1, 1e-15);
  // vanishes on every side
  for (double s : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(Q::eigenfunction(Q::A.x * s, Q::A.y * s), 0.0, 1e-15);
    EXPECT_NEAR(Q::eigenfunction(0.0, s), 0.0, 1e-15);
    EXPECT_NEAR(Q::eigenfunction(0.5 * s, 1.0), 0.0, 1e-15);
    EXPECT_NEAR(Q::eigenfunction(Q::A.x + s * (Q::B.x - Q::A.x), Q::A.y + s * (Q::B.y - Q::A.y)), 0.0, 1e-15);
  }
  EXPECT_DOUBLE_EQ(Q::eigenfunction(Q::M.x, Q::M.y), 0.25);
}

TEST(Quadrangle, HandIntegralsOnCoarseMesh) {
  // Independent oracle: piecewise gradients of the four pieces times the
  // triangle areas.
  using Q = Quadrangle;
  const double a1 = tri_area(Q::O, Q::M, Q::C), a2 = tri_area(Q::C, Q::M, Q::B);
  const double a3 = tri_area(Q::O, Q::M, Q::A), a4 = tri_area(Q::A, Q::M, Q::B);
  const double uy2 = a2 * 0.25 + a3 * 1.0 + a4 * 0.25;
  const double grad2 = a1 * 1.0 + a2 * 0.25 + a3 * 2.0 + a4 * 4.25;
  EXPECT_NEAR(uy2, 1.0 / 12.0, 1e-15);
  EXPECT_NEAR(grad2, 5.0 / 12.0, 1e-15);

  const DiscreteOperator op(quadrangle_aligned_mesh(0));
  ASSERT_EQ(op.dofs(), 1u);
  const Vector u = op.interpolate(Q::eigenfunction);
  EXPECT_NEAR(u.dot(op.B() * u), uy2, 1e-15);
  EXPECT_NEAR(op.inner1(u, u), grad2, 1e-15);
}

TEST(Quadrangle, AlignedRayleighIsOneFifth) {
  for (int r = 0; r <= 4; ++r) {
    const DiscreteOperator op(quadrangle_aligned_mesh(r));
    const Vector u = op.interpolate(Quadrangle::eigenfunction);
    EXPECT_NEAR(rayleigh(op, u), 0.2, 1e-10) << r;
    EXPECT_LE(eigen_residual(op, u, 0.2), 1e-10) << r;
    EXPECT_GT(eigen_residual(op, u, 0.25), 1e-3);
    for (double t : {0.0, 1.0, 2.5, 7.0}) EXPECT_NEAR(harmonic_energy(op, u, 0.2, t), 1.0 / 12.0, 1e-12);
  }
}

TEST(Quadrangle, UnstructuredMeshApproximates) {
  const DiscreteOperator op(quadrangle_unstructured_mesh(1.0 / 64, 7));
  const Vector u = op.interpolate(Quadrangle::eigenfunction);
  EXPECT_NEAR(rayleigh(op, u), 0.2, 5e-3);
  EXPECT_GT(op.mesh().min_angle(), 5.0);
}

TEST(Quadrangle, MeshAreaAndLevels) {
  // shoelace area of OABC
  const double area = 0.5 * std::abs((1.0 / 3.0) * 1.0 - 0.5 * (1.0 / 3.0) + 0.5 * 1.0 - 0.0);
  for (int r = 0; r <= 3; ++r) {
    const auto m = quadrangle_aligned_mesh(r);
    EXPECT_NEAR(m.area(), area, 1e-15);
    EXPECT_EQ(m.triangles.size(), 4u << (2 * r));
    EXPECT_EQ(m.level, r);
  }
  EXPECT_NEAR(quadrangle_unstructured_mesh(1.0 / 16, 3).area(), area, 1e-14);
}

TEST(DomainMesh, CountsAndBoundary) {
  const auto d = make_domain(1.0);
  const auto m32 = domain_mesh(d, 1.0 / 32);
  const auto m64 = domain_mesh(d, 1.0 / 64);
  EXPECT_EQ(m32.size(), 33u * 34u / 2u);
  EXPECT_NEAR(static_cast<double>(m64.size()) / m32.size(), 4.0, 0.2);
  EXPECT_NEAR(m32.area(), 0.5, 1e-14);
  for (std::size_t i = 0; i < m32.size(); ++i) {
    const auto& p = m32.nodes[i];
    const bool on = std::abs(p.y) < 1e-14 || std::abs(p.x - 1.0) < 1e-14 || std::abs(p.y - p.x) < 1e-14;
    EXPECT_EQ(static_cast<bool>(m32.boundary[i]), on);
  }
  for (double alpha : {0.5, 2.0}) {
    const auto dd = make_domain(alpha);
    const auto m = domain_mesh(dd, 0.05, 1.5);
    EXPECT_NEAR(m.area(), dd.area(), 1e-13);
    for (const auto& p : m.nodes) EXPECT_TRUE(dd.in_closure(p.x, p.y));
  }
  EXPECT_THROW(domain_mesh(d, 0.0), ValidationError);
  EXPECT_THROW(domain_mesh(d, 0.1, 0.5), ValidationError);
}

TEST(DomainMesh, ValidationRejectsSlivers) {
  Mesh m;
  m.nodes = {{0, 0}, {1, 0}, {0.5, 0.01}};
  m.triangles = {{0, 1, 2}};
  m.boundary = {1, 1, 1};
  EXPECT_THROW(m.validate(), MeshError);
  m.nodes[2] = {0.5, 0.5};
  m.triangles = {{0, 2, 1}};
  EXPECT_THROW(m.validate(), MeshError);
  m.triangles = {{0, 1, 5}};
  EXPECT_THROW(m.validate(), MeshError);
}

TEST(DomainMesh, CsvExport) {
  const auto m = quadrangle_aligned_mesh(0);
  std::ostringstream n, e;
  m.write_nodes(n);
  m.write_elements(e);
  EXPECT_EQ(n.str().substr(0, 16), "id,x,y,boundary\n");
  EXPECT_EQ(e.str(), "id,n0,n1,n2\n0,0,1,4\n1,1,2,4\n2,2,3,4\n3,3,0,4\n");
}

TEST(DiscreteOperator, SymmetricAndBounded) {
  const auto d = make_domain(1.0);
  const DiscreteOperator op(domain_mesh(d, 1.0 / 16));
  const SparseMatrix Kt = op.K().transpose();
  const SparseMatrix Bt = op.B().transpose();
  EXPECT_EQ((op.K() - Kt).norm(), 0.0);
  EXPECT_EQ((op.B() - Bt).norm(), 0.0);
  for (unsigned s = 0; s < 100; ++s) {
    const double r = rayleigh(op, random_field(op, s));
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
  }
}

TEST(DiscreteOperator, RayleighScalingAndZero) {
  const DiscreteOperator op(quadrangle_unstructured_mesh(1.0 / 16, 1));
  const Vector u = random_field(op, 9);
  for (double c : {2.0, -3.0}) EXPECT_NEAR(rayleigh(op, c * u), rayleigh(op, u), 1e-14);
  const Vector zero = Vector::Zero(static_cast<Eigen::Index>(op.dofs()));
  EXPECT_THROW(rayleigh(op, zero), UndefinedQuotientError);
  EXPECT_THROW(eigen_residual(op, zero, 0.2), UndefinedQuotientError);
  EXPECT_EQ(op.apply_A(zero).norm(), 0.0);
}

TEST(DiscreteOperator, ApplyASolvesToTolerance) {
  const auto d = make_domain(1.0);
  const DiscreteOperator op(domain_mesh(d, 1.0 / 32));
  const Vector h = random_field(op, 4);
  const Vector Ah = op.apply_A(h);
  const Vector rhs = op.B() * h;
  EXPECT_LE((op.K() * Ah - rhs).norm(), 1e-12 * rhs.norm());
  // A is K-selfadjoint: (A u, v)_1 = (B u, v) = (u, A v)_1
  const Vector v = random_field(op, 5);
  EXPECT_NEAR(op.inner1(op.apply_A(h), v), op.inner1(h, op.apply_A(v)), 1e-10);
}

TEST(DiscreteOperator, RandomFieldIsNotEigen) {
  const DiscreteOperator op(quadrangle_aligned_mesh(2));
  const Vector u = random_field(op, 3);
  EXPECT_GT(eigen_residual(op, u, rayleigh(op, u)), 1e-3);
}

TEST(DiscreteOperator, ExpandPutsZerosOnBoundary) {
  const DiscreteOperator op(quadrangle_aligned_mesh(1));
  const Vector u = op.interpolate(Quadrangle::eigenfunction);
  const auto full = op.expand(u);
  for (std::size_t i = 0; i < full.size(); ++i) {
    const auto& p = op.mesh().nodes[i];
    EXPECT_NEAR(full[i], Quadrangle::eigenfunction(p.x, p.y), 1e-15);
    if (op.mesh().boundary[i]) EXPECT_EQ(full[i], 0.0);
  }
}

TEST(DifferentialResidual, TrivialAndHomogeneous) {
  const auto d = make_domain(1.0);
  const SpectralWindow w(0.15, 0.25, SpectralWindow::Shape::Smooth);
  const DiscreteOperator op(domain_mesh(d, 1.0 / 16));
  const auto th = BoundaryProfile::constant(1.0);
  const auto z = BoundaryProfile::zero();
  EXPECT_EQ(differential_solution_residual(op, d, w, th, z, 0.2, 0.2, 64), 0.0);
  const double r1 = differential_solution_residual(op, d, w, th, z, 0.17, 0.23, 64);
  const double r3 = differential_solution_residual(op, d, w, th.scaled(-3.0), z, 0.17, 0.23, 64);
  EXPECT_GT(r1, 0.0);
  EXPECT_NEAR(r3, r1, 1e-10 * r1);
  EXPECT_THROW(differential_solution_residual(op, d, w, th, z, 0.1, 0.2, 64), ValidationError);
  EXPECT_THROW(differential_solution_residual(op, d, w, z, z, 0.17, 0.23, 64), UndefinedQuotientError);
}
