#include "biot/elements.hpp"

#include "biot/quadrature.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace biot {

namespace {

constexpr int num_monomials = 10;
// Exponents (a, b) of xi^a eta^b, graded order up to degree 3.
constexpr std::array<std::array<int, 2>, num_monomials> exponents = {{
    {0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3},
}};

constexpr int monomial_index(int a, int b) {
  const int d = a + b;
  return d * (d + 1) / 2 + b;
}

using Mono = Eigen::Matrix<double, num_monomials, 1>;

struct MonomialValues {
  Mono value, d_xi, d_eta;
};

MonomialValues eval_monomials(double xi, double eta) {
  std::array<double, 4> px{1.0, xi, xi * xi, xi * xi * xi};
  std::array<double, 4> py{1.0, eta, eta * eta, eta * eta * eta};
  MonomialValues m;
  for (int k = 0; k < num_monomials; ++k) {
    const auto [a, b] = exponents[k];
    m.value[k] = px[a] * py[b];
    m.d_xi[k] = a > 0 ? a * px[a - 1] * py[b] : 0.0;
    m.d_eta[k] = b > 0 ? b * px[a] * py[b - 1] : 0.0;
  }
  return m;
}

struct LocalFrame {
  Point center;
  double scale;
  Mono monomials_at(const Point& x) const {
    return eval_monomials((x.x() - center.x()) / scale, (x.y() - center.y()) / scale).value;
  }
};

LocalFrame local_frame(const std::array<Point, 3>& c) {
  const double h = std::max({(c[0] - c[1]).norm(), (c[1] - c[2]).norm(), (c[2] - c[0]).norm()});
  return {(c[0] + c[1] + c[2]) / 3.0, h};
}

std::array<EdgeGeometry, 3> natural_edges(const std::array<Point, 3>& c) {
  std::array<EdgeGeometry, 3> out;
  for (int i = 0; i < 3; ++i) {
    EdgeGeometry& g = out[i];
    g.start = c[(i + 1) % 3];
    g.end = c[(i + 2) % 3];
    g.length = (g.end - g.start).norm();
    g.tangent = (g.end - g.start) / g.length;
    g.normal = Point(g.tangent.y(), -g.tangent.x());
    g.midpoint = 0.5 * (g.start + g.end);
  }
  return out;
}

// Rows: 5 divergence constraints followed by 2 per edge (moments of v.n
// against the Legendre polynomials of degree 2 and 3).
Eigen::Matrix<double, 11, cubic_vector_dim> constraint_matrix(
    const LocalFrame& frame, const std::array<EdgeGeometry, 3>& edges) {
  Eigen::Matrix<double, 11, cubic_vector_dim> c = Eigen::Matrix<double, 11, cubic_vector_dim>::Zero();
  // div v = sum_k cx_k d_xi m_k + cy_k d_eta m_k (up to the common 1/scale);
  // all non-constant coefficients must vanish.
  for (int k = 0; k < num_monomials; ++k) {
    const auto [a, b] = exponents[k];
    if (a > 0) {
      const int target = monomial_index(a - 1, b);
      if (target > 0) c(target - 1, k) += a;
    }
    if (b > 0) {
      const int target = monomial_index(a, b - 1);
      if (target > 0) c(target - 1, num_monomials + k) += b;
    }
  }
  const LineRule rule = edge_quadrature(6);
  for (int i = 0; i < 3; ++i) {
    const EdgeGeometry& e = edges[i];
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double s = rule.points[q];
      const double t = 2.0 * s - 1.0;
      const double l2 = 0.5 * (3.0 * t * t - 1.0);
      const double l3 = 0.5 * (5.0 * t * t * t - 3.0 * t);
      const Mono m = frame.monomials_at(e.at(s));
      for (int k = 0; k < num_monomials; ++k) {
        for (int comp = 0; comp < 2; ++comp) {
          const double vn = m[k] * e.normal[comp];
          c(5 + 2 * i, comp * num_monomials + k) += rule.weights[q] * l2 * vn;
          c(6 + 2 * i, comp * num_monomials + k) += rule.weights[q] * l3 * vn;
        }
      }
    }
  }
  return c;
}

Eigen::Matrix<double, mtw_local_dim, cubic_vector_dim> dof_matrix(
    const LocalFrame& frame, const std::array<EdgeGeometry, 3>& edges) {
  Eigen::Matrix<double, mtw_local_dim, cubic_vector_dim> f =
      Eigen::Matrix<double, mtw_local_dim, cubic_vector_dim>::Zero();
  const LineRule rule = edge_quadrature(6);
  for (int i = 0; i < 3; ++i) {
    const EdgeGeometry& e = edges[i];
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double s = rule.points[q];
      const double w = rule.weights[q];
      const Mono m = frame.monomials_at(e.at(s));
      for (int k = 0; k < num_monomials; ++k) {
        for (int comp = 0; comp < 2; ++comp) {
          const int col = comp * num_monomials + k;
          f(3 * i, col) += w * m[k] * e.normal[comp];
          f(3 * i + 1, col) += w * m[k] * e.normal[comp] * (s - 0.5);
          f(3 * i + 2, col) += w * m[k] * e.tangent[comp];
        }
      }
    }
  }
  return f;
}

}  // namespace

MtwValues MtwLocalBasis::eval(const Point& x) const {
  const MonomialValues m =
      eval_monomials((x.x() - center.x()) / scale, (x.y() - center.y()) / scale);
  const auto cx = coeffs.topRows<num_monomials>();
  const auto cy = coeffs.bottomRows<num_monomials>();
  const Eigen::Matrix<double, mtw_local_dim, 1> vx = cx.transpose() * m.value;
  const Eigen::Matrix<double, mtw_local_dim, 1> vy = cy.transpose() * m.value;
  const Eigen::Matrix<double, mtw_local_dim, 1> vx_x = cx.transpose() * m.d_xi / scale;
  const Eigen::Matrix<double, mtw_local_dim, 1> vx_y = cx.transpose() * m.d_eta / scale;
  const Eigen::Matrix<double, mtw_local_dim, 1> vy_x = cy.transpose() * m.d_xi / scale;
  const Eigen::Matrix<double, mtw_local_dim, 1> vy_y = cy.transpose() * m.d_eta / scale;
  MtwValues out;
  for (int k = 0; k < mtw_local_dim; ++k) {
    out.value[k] = Point(vx[k], vy[k]);
    out.grad[k] << vx_x[k], vx_y[k], vy_x[k], vy_y[k];
  }
  return out;
}

Point MtwLocalBasis::value(int k, const Point& x) const {
  const Mono m = eval_monomials((x.x() - center.x()) / scale, (x.y() - center.y()) / scale).value;
  return Point(coeffs.col(k).head<num_monomials>().dot(m),
               coeffs.col(k).tail<num_monomials>().dot(m));
}

MtwLocalBasis mtw_local_basis(const std::array<Point, 3>& corners,
                              const std::array<EdgeGeometry, 3>& edges) {
  const LocalFrame frame = local_frame(corners);
  const auto constraints = constraint_matrix(frame, edges);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(constraints), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv[sv.size() - 1] <= 1e-10 * sv[0]) {
    throw ElementError("MTW constraint system is rank deficient (degenerate triangle)");
  }
  const Eigen::Matrix<double, cubic_vector_dim, mtw_local_dim> nullspace =
      svd.matrixV().rightCols<mtw_local_dim>();

  const Eigen::Matrix<double, mtw_local_dim, mtw_local_dim> dofs =
      dof_matrix(frame, edges) * nullspace;
  Eigen::JacobiSVD<Eigen::MatrixXd> dsvd{Eigen::MatrixXd(dofs)};
  const auto& ds = dsvd.singularValues();
  const double cond = ds[ds.size() - 1] > 0.0 ? ds[0] / ds[ds.size() - 1]
                                              : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e12)) {
    throw ElementError("MTW DOF matrix is singular (condition " + std::to_string(cond) + ")");
  }

  MtwLocalBasis basis;
  basis.edges = edges;
  basis.center = frame.center;
  basis.scale = frame.scale;
  basis.coeffs = nullspace * dofs.inverse();
  basis.dof_condition = cond;
  return basis;
}

int mtw_local_space_dim(const std::array<Point, 3>& corners) {
  const auto c = constraint_matrix(local_frame(corners), natural_edges(corners));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(c)};
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > 1e-10 * sv[0]) ++rank;
  }
  return cubic_vector_dim - rank;
}

std::array<double, 3> mtw_edge_dofs(const EdgeGeometry& edge, const VectorField& v) {
  const LineRule rule = edge_quadrature(assembly_degree);
  std::array<double, 3> d{0.0, 0.0, 0.0};
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double s = rule.points[q];
    const Point val = v(edge.at(s));
    const double vn = val.dot(edge.normal);
    d[0] += rule.weights[q] * vn;
    d[1] += rule.weights[q] * vn * (s - 0.5);
    d[2] += rule.weights[q] * val.dot(edge.tangent);
  }
  return d;
}

std::array<double, 3> barycentric(const std::array<Point, 3>& c, const Point& x) {
  const double det = (c[1].x() - c[0].x()) * (c[2].y() - c[0].y()) -
                     (c[2].x() - c[0].x()) * (c[1].y() - c[0].y());
  const double l1 = ((x.x() - c[0].x()) * (c[2].y() - c[0].y()) -
                     (c[2].x() - c[0].x()) * (x.y() - c[0].y())) / det;
  const double l2 = ((c[1].x() - c[0].x()) * (x.y() - c[0].y()) -
                     (x.x() - c[0].x()) * (c[1].y() - c[0].y())) / det;
  return {1.0 - l1 - l2, l1, l2};
}

EgValues eg_eval(const std::array<Point, 3>& c, const Point& x) {
  EgValues out;
  out.hat = barycentric(c, x);
  const double two_area = (c[1].x() - c[0].x()) * (c[2].y() - c[0].y()) -
                          (c[2].x() - c[0].x()) * (c[1].y() - c[0].y());
  for (int i = 0; i < 3; ++i) {
    const Point& a = c[(i + 1) % 3];
    const Point& b = c[(i + 2) % 3];
    out.hat_grad[i] = Point(a.y() - b.y(), b.x() - a.x()) / two_area;
  }
  return out;
}

DofHandler::DofHandler(const Mesh& mesh, const BoundaryTags& tags)
    : u_index_(3 * mesh.num_edges(), -1),
      num_pc_(mesh.num_vertices()),
      num_p0_(mesh.num_triangles()) {
  Index next = 0;
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (tags.is_gamma_d(e)) continue;
    for (int k = 0; k < 3; ++k) u_index_[3 * e + k] = next++;
  }
  num_u_ = next;
}

std::array<Index, mtw_local_dim> DofHandler::cell_u_dofs(const Mesh& mesh, Index t) const {
  std::array<Index, mtw_local_dim> out{};
  for (int i = 0; i < 3; ++i) {
    const Index e = mesh.tri_to_edges[t][i];
    for (int k = 0; k < 3; ++k) out[3 * i + k] = u_index_[3 * e + k];
  }
  return out;
}

Discretization::Discretization(Mesh mesh, BoundaryTags tags, Exec exec)
    : mesh_(std::move(mesh)), tags_(std::move(tags)), dofs_(mesh_, tags_) {
  const Index nt = mesh_.num_triangles();
  bases_.resize(nt);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (Index t = 0; t < nt; ++t) {
    bases_[t] = mtw_local_basis(mesh_.corners(t), cell_edges(t));
  }
}

std::array<EdgeGeometry, 3> Discretization::cell_edges(Index t) const {
  std::array<EdgeGeometry, 3> out;
  for (int i = 0; i < 3; ++i) out[i] = mesh_.edge_geometry(mesh_.tri_to_edges[t][i]);
  return out;
}

Vector Discretization::interpolate_u_raw(const VectorField& v) const {
  Vector raw(3 * mesh_.num_edges());
  for (Index e = 0; e < mesh_.num_edges(); ++e) {
    const auto d = mtw_edge_dofs(mesh_.edge_geometry(e), v);
    for (int k = 0; k < 3; ++k) raw[3 * e + k] = d[k];
  }
  return raw;
}

Vector Discretization::interpolate_u(const VectorField& v) const {
  const Vector raw = interpolate_u_raw(v);
  Vector out(dofs_.num_u());
  for (Index r = 0; r < raw.size(); ++r) {
    const Index i = dofs_.u_dof_raw(r);
    if (i >= 0) out[i] = raw[r];
  }
  return out;
}

Point Discretization::eval_u(const Vector& u, Index t, const Point& x) const {
  const auto dofs = dofs_.cell_u_dofs(mesh_, t);
  Point out = Point::Zero();
  for (int k = 0; k < mtw_local_dim; ++k) {
    if (dofs[k] >= 0) out += u[dofs[k]] * bases_[t].value(k, x);
  }
  return out;
}

}  // namespace biot
