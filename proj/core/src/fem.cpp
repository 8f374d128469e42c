#include "sobtri/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "sobtri/error.hpp"
#include "sobtri/packets.hpp"

namespace sobtri {

namespace {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double angle_at(const Point& p, const Point& q, const Point& r) {
  const double ux = q.x - p.x, uy = q.y - p.y, vx = r.x - p.x, vy = r.y - p.y;
  return std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy) * 180.0 / std::numbers::pi;
}

// Boundary flags from edges that belong to a single triangle.
void flag_boundary(Mesh& m) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : m.triangles)
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  m.boundary.assign(m.nodes.size(), 0);
  for (const auto& [edge, c] : count)
    if (c == 1) m.boundary[edge.first] = m.boundary[edge.second] = 1;
}

// Red refinement: every triangle into four through its edge midpoints.
Mesh red_refine(const Mesh& in) {
  Mesh out;
  out.nodes = in.nodes;
  out.level = in.level + 1;
  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int a, int b) {
    const auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    const int id = static_cast<int>(out.nodes.size());
    out.nodes.push_back({0.5 * (in.nodes[a].x + in.nodes[b].x), 0.5 * (in.nodes[a].y + in.nodes[b].y)});
    mid.emplace(key, id);
    return id;
  };
  for (const auto& t : in.triangles) {
    const int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
    out.triangles.push_back({t[0], ab, ca});
    out.triangles.push_back({ab, t[1], bc});
    out.triangles.push_back({ca, bc, t[2]});
    out.triangles.push_back({ab, bc, ca});
  }
  flag_boundary(out);
  return out;
}

}  // namespace

double Mesh::min_angle() const {
  double m = 180.0;
  for (const auto& t : triangles) {
    const auto &a = nodes[t[0]], &b = nodes[t[1]], &c = nodes[t[2]];
    m = std::min({m, angle_at(a, b, c), angle_at(b, c, a), angle_at(c, a, b)});
  }
  return m;
}

double Mesh::area() const {
  double s = 0.0;
  for (const auto& t : triangles) s += signed_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
  return s;
}

void Mesh::validate() const {
  if (triangles.empty()) throw MeshError("mesh has no triangles");
  if (boundary.size() != nodes.size()) throw MeshError("boundary flags do not match the node count");
  const int n = static_cast<int>(nodes.size());
  for (std::size_t k = 0; k < triangles.size(); ++k) {
    const auto& t = triangles[k];
    for (int i : t)
      if (i < 0 || i >= n) throw MeshError("triangle " + std::to_string(k) + " has a dangling node index");
    const double a = signed_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
    if (!(a > 0.0)) throw MeshError("triangle " + std::to_string(k) + " is degenerate or clockwise");
  }
  const double ang = min_angle();
  if (!(ang > 5.0)) throw MeshError("minimum angle " + std::to_string(ang) + " deg is not above 5 deg");
}

void Mesh::write_nodes(std::ostream& os) const {
  os << "id,x,y,boundary\n";
  char buf[96];
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%d\n", i, nodes[i].x, nodes[i].y, int(boundary[i]));
    os << buf;
  }
}

void Mesh::write_elements(std::ostream& os) const {
  os << "id,n0,n1,n2\n";
  for (std::size_t i = 0; i < triangles.size(); ++i)
    os << i << ',' << triangles[i][0] << ',' << triangles[i][1] << ',' << triangles[i][2] << '\n';
}

Mesh domain_mesh(const TriangleDomain& domain, double h, double grading) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("mesh size must be positive");
  if (!(grading >= 1.0)) throw ValidationError("mesh grading must be >= 1");
  const double L = domain.leg();
  const int n = std::max(1, static_cast<int>(std::ceil(L / h - 1e-9)));
  Mesh m;
  std::vector<int> row(n + 2);  // first node id of column i
  for (int i = 0; i <= n; ++i) {
    row[i] = static_cast<int>(m.nodes.size());
    for (int j = 0; j <= i; ++j) {
      Point p{L * i / n, static_cast<double>(j) / n};
      if (grading != 1.0 && i > 0) {
        const double s = std::pow(static_cast<double>(i) / n, grading - 1.0);
        p = {p.x * s, p.y * s};
      }
      m.nodes.push_back(p);
      m.boundary.push_back(i == n || j == 0 || j == i);
    }
  }
  auto id = [&](int i, int j) { return row[i] + j; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      if (j < i) m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  m.validate();
  return m;
}

double Quadrangle::eigenfunction(double x, double y) {
  // the two characteristic diagonals y = 2x (O-M-B) and y = 1 - 2x (C-M-A)
  const bool left_of_OB = y > 2.0 * x;
  const bool above_CA = y > 1.0 - 2.0 * x;
  if (left_of_OB && !above_CA) return x;
  if (left_of_OB && above_CA) return 0.5 * (1.0 - y);
  if (!left_of_OB && !above_CA) return y - x;
  return 0.5 * (y + 1.0) - 2.0 * x;
}

Mesh quadrangle_aligned_mesh(int refine) {
  if (refine < 0) throw ValidationError("refinement level must be >= 0");
  Mesh m;
  m.nodes = {Quadrangle::O, Quadrangle::A, Quadrangle::B, Quadrangle::C, Quadrangle::M};
  m.triangles = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
  flag_boundary(m);
  for (int k = 0; k < refine; ++k) m = red_refine(m);
  m.validate();
  return m;
}

Mesh quadrangle_unstructured_mesh(double h, std::uint64_t seed, double jitter) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("mesh size must be positive");
  if (!(jitter >= 0.0 && jitter < 0.5)) throw ValidationError("jitter must lie in [0, 0.5)");
  const int n = std::max(2, static_cast<int>(std::ceil(1.0 / h - 1e-9)));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const Point O = Quadrangle::O, A = Quadrangle::A, B = Quadrangle::B, C = Quadrangle::C;
  Mesh m;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      double s = static_cast<double>(i) / n, t = static_cast<double>(j) / n;
      if (i > 0 && i < n && j > 0 && j < n) {
        s += jitter * U(rng) / n;
        t += jitter * U(rng) / n;
      }
      m.nodes.push_back({(1 - s) * (1 - t) * O.x + s * (1 - t) * A.x + s * t * B.x + (1 - s) * t * C.x,
                         (1 - s) * (1 - t) * O.y + s * (1 - t) * A.y + s * t * B.y + (1 - s) * t * C.y});
    }
  auto id = [&](int i, int j) { return i * (n + 1) + j; };
  auto worst = [&](int p, int q, int r) {
    const auto &P = m.nodes[p], &Q = m.nodes[q], &R = m.nodes[r];
    return std::min({angle_at(P, Q, R), angle_at(Q, R, P), angle_at(R, P, Q)});
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      // diagonal with the better minimum angle
      if (std::min(worst(a, b, c), worst(a, c, d)) >= std::min(worst(a, b, d), worst(b, c, d))) {
        m.triangles.push_back({a, b, c});
        m.triangles.push_back({a, c, d});
      } else {
        m.triangles.push_back({a, b, d});
        m.triangles.push_back({b, c, d});
      }
    }
  flag_boundary(m);
  m.validate();
  return m;
}

DiscreteOperator::DiscreteOperator(Mesh mesh) : mesh_(std::move(mesh)) {
  mesh_.validate();
  node_dof_.assign(mesh_.size(), -1);
  for (std::size_t i = 0; i < mesh_.size(); ++i)
    if (!mesh_.boundary[i]) {
      node_dof_[i] = static_cast<int>(dof_node_.size());
      dof_node_.push_back(static_cast<int>(i));
    }
  if (dof_node_.empty()) throw MeshError("mesh has no interior nodes");
  std::vector<Eigen::Triplet<double>> tk, tb;
  for (const auto& t : mesh_.triangles) {
    const Point& p0 = mesh_.nodes[t[0]];
    const Point& p1 = mesh_.nodes[t[1]];
    const Point& p2 = mesh_.nodes[t[2]];
    const double area = signed_area(p0, p1, p2);
    // gradients of the barycentric coordinates
    const double gx[3] = {(p1.y - p2.y) / (2 * area), (p2.y - p0.y) / (2 * area), (p0.y - p1.y) / (2 * area)};
    const double gy[3] = {(p2.x - p1.x) / (2 * area), (p0.x - p2.x) / (2 * area), (p1.x - p0.x) / (2 * area)};
    for (int i = 0; i < 3; ++i) {
      const int di = node_dof_[t[i]];
      if (di < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int dj = node_dof_[t[j]];
        if (dj < 0) continue;
        tk.emplace_back(di, dj, area * (gx[i] * gx[j] + gy[i] * gy[j]));
        tb.emplace_back(di, dj, area * gy[i] * gy[j]);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(dof_node_.size());
  K_.resize(n, n);
  B_.resize(n, n);
  K_.setFromTriplets(tk.begin(), tk.end());
  B_.setFromTriplets(tb.begin(), tb.end());
  auto f = std::make_shared<Eigen::SimplicialLDLT<SparseMatrix>>(K_);
  if (f->info() != Eigen::Success) throw MeshError("stiffness factorization failed");
  ldlt_ = std::move(f);
}

Vector DiscreteOperator::interpolate(const std::function<double(double, double)>& f) const {
  Vector v(static_cast<Eigen::Index>(dofs()));
  for (std::size_t i = 0; i < dof_node_.size(); ++i) {
    const Point& p = mesh_.nodes[dof_node_[i]];
    v[static_cast<Eigen::Index>(i)] = f(p.x, p.y);
  }
  return v;
}

std::vector<double> DiscreteOperator::expand(const Vector& v) const {
  std::vector<double> out(mesh_.size(), 0.0);
  for (std::size_t i = 0; i < dof_node_.size(); ++i) out[dof_node_[i]] = v[static_cast<Eigen::Index>(i)];
  return out;
}

Vector DiscreteOperator::solve(const Vector& rhs) const {
  Vector x = ldlt_->solve(rhs);
  const double scale = rhs.norm();
  if (scale == 0.0) return x;
  for (int it = 0; it < 5; ++it) {
    const Vector r = rhs - K_ * x;
    if (r.norm() <= 1e-12 * scale) break;
    x += ldlt_->solve(r);
  }
  return x;
}

Vector DiscreteOperator::apply_A(const Vector& h) const { return solve(B_ * h); }

double DiscreteOperator::norm1(const Vector& u) const { return std::sqrt(std::max(0.0, inner1(u, u))); }

DiscreteOperator assemble(Mesh mesh) { return DiscreteOperator(std::move(mesh)); }

double rayleigh(const DiscreteOperator& op, const Vector& u) {
  const double k = op.inner1(u, u);
  if (!(k > 0.0)) throw UndefinedQuotientError("Rayleigh quotient of the zero field");
  return u.dot(op.B() * u) / k;
}

double eigen_residual(const DiscreteOperator& op, const Vector& u, double lambda) {
  const double n = op.norm1(u);
  if (!(n > 0.0)) throw UndefinedQuotientError("eigen-residual of the zero field");
  return op.norm1(op.apply_A(u) - lambda * u) / n;
}

double harmonic_energy(const DiscreteOperator& op, const Vector& u, double lambda, double t) {
  const double c = std::cos(std::sqrt(lambda) * t), s = std::sin(std::sqrt(lambda) * t);
  return c * c * u.dot(op.B() * u) + lambda * s * s * op.inner1(u, u);
}

double differential_solution_residual(const DiscreteOperator& op, const TriangleDomain& domain,
                                      const SpectralWindow& window, const BoundaryProfile& theta1,
                                      const BoundaryProfile& theta2, double lambda1, double lambda2,
                                      int nodes) {
  if (!(lambda1 <= lambda2)) throw ValidationError("differential residual needs lambda1 <= lambda2");
  if (lambda1 < window.lo() || lambda2 > window.hi())
    throw ValidationError("[lambda1, lambda2] must lie inside the window support");
  if (nodes < 8) throw ValidationError("differential residual needs at least 8 nodes");
  const Branch branch = window.branch(domain);
  const double theta = (branch == Branch::U ? theta1 : theta2).l2_norm();
  if (!(theta > 0.0)) throw UndefinedQuotientError("zero boundary data");
  if (lambda1 == lambda2) return 0.0;
  const SpectralIntegral rule(domain, window, theta1, theta2, lambda1, lambda2, (nodes + 7) / 8, 8);
  const Vector V = op.interpolate([&](double x, double y) { return rule.value(x, y); });
  const Vector W = op.interpolate([&](double x, double y) { return rule.moment(x, y); });
  return op.norm1(op.apply_A(V) - W) / theta;
}

}  // namespace sobtri
