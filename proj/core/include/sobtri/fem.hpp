#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "sobtri/boundary.hpp"
#include "sobtri/geometry.hpp"

namespace sobtri {

/// Conforming linear-element triangulation with flagged boundary nodes.
struct Mesh {
  std::vector<Point> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<char> boundary;
  int level = 0;

  std::size_t size() const { return nodes.size(); }
  /// Smallest interior angle over all triangles, in degrees.
  double min_angle() const;
  double area() const;
  /// MeshError on degenerate or badly shaped triangles (min angle <= 5 deg),
  /// negative orientation, or dangling indices.
  void validate() const;
  /// CSV node and element lists (`id,x,y,boundary` / `id,n0,n1,n2`).
  void write_nodes(std::ostream& os) const;
  void write_elements(std::ostream& os) const;
};

/// Lattice mesh of D with n = ceil(leg / h) columns. `grading` > 1 pulls the
/// nodes toward O along rays (r -> r^grading); 1 leaves the lattice uniform.
Mesh domain_mesh(const TriangleDomain& domain, double h, double grading = 1.0);

/// Quadrangle O(0,0), A(1/3,1/3), B(1/2,1), C(0,1) and the crossing point
/// M(1/4,1/2) of its two characteristic diagonals for lambda = 1/5.
struct Quadrangle {
  static constexpr Point O{0.0, 0.0};
  static constexpr Point A{1.0 / 3.0, 1.0 / 3.0};
  static constexpr Point B{0.5, 1.0};
  static constexpr Point C{0.0, 1.0};
  static constexpr Point M{0.25, 0.5};
  static constexpr double lambda = 0.2;
  /// Piecewise-linear eigenfunction: x on OMC, (1-y)/2 on CMB, y-x on OMA,
  /// (y+1)/2 - 2x on AMB.
  static double eigenfunction(double x, double y);
};

/// The four characteristic triangles, red-refined `refine` times.
Mesh quadrangle_aligned_mesh(int refine);

/// Bilinear image of an n x n square lattice (n = ceil(1/h)) with seeded
/// interior jitter of `jitter` cells, each cell split along its better-shaped
/// diagonal. Edges do not follow the characteristics.
Mesh quadrangle_unstructured_mesh(double h, std::uint64_t seed, double jitter = 0.15);

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Stiffness K (int grad phi_i . grad phi_j) and B (int d_y phi_i d_y phi_j)
/// on the interior nodes; A h solves K (A h) = B h.
///
/// Immutable after construction; the factorization is shared and read-only.
class DiscreteOperator {
 public:
  explicit DiscreteOperator(Mesh mesh);

  const Mesh& mesh() const { return mesh_; }
  const SparseMatrix& K() const { return K_; }
  const SparseMatrix& B() const { return B_; }
  std::size_t dofs() const { return dof_node_.size(); }
  /// Mesh node of each unknown.
  const std::vector<int>& dof_nodes() const { return dof_node_; }

  /// Nodal interpolant on the interior nodes.
  Vector interpolate(const std::function<double(double, double)>& f) const;
  /// Full nodal vector (zeros on the boundary).
  std::vector<double> expand(const Vector& v) const;

  /// K^{-1} B h, direct solve refined until the residual is below 1e-12 relative.
  Vector apply_A(const Vector& h) const;
  /// K^{-1} r.
  Vector solve(const Vector& rhs) const;

  double inner1(const Vector& u, const Vector& v) const { return u.dot(K_ * v); }
  double norm1(const Vector& u) const;

 private:
  Mesh mesh_;
  std::vector<int> dof_node_;
  std::vector<int> node_dof_;
  SparseMatrix K_;
  SparseMatrix B_;
  std::shared_ptr<const Eigen::SimplicialLDLT<SparseMatrix>> ldlt_;
};

DiscreteOperator assemble(Mesh mesh);

/// (B u, u) / (K u, u); UndefinedQuotientError for the zero field.
double rayleigh(const DiscreteOperator& op, const Vector& u);

/// ||A u - lambda u||_1 / ||u||_1 in the K-norm.
double eigen_residual(const DiscreteOperator& op, const Vector& u, double lambda);

/// E(t) = cos^2(sqrt(lambda) t) (B u, u) + lambda sin^2(sqrt(lambda) t) (K u, u) for
/// the harmonic p = cos(sqrt(lambda) t) u.
double harmonic_energy(const DiscreteOperator& op, const Vector& u, double lambda, double t);

/// ||A (U(lambda2) - U(lambda1)) - int lambda dU||_1 / ||theta||_{L2}, both fields
/// interpolated on the mesh. The lambda integrals use `nodes` Gauss-Legendre
/// nodes (panels of 8) over [lambda1, lambda2].
double differential_solution_residual(const DiscreteOperator& op, const TriangleDomain& domain,
                                      const SpectralWindow& window, const BoundaryProfile& theta1,
                                      const BoundaryProfile& theta2, double lambda1, double lambda2,
                                      int nodes);

}  // namespace sobtri
