#pragma once

#include "biot/common.hpp"
#include "biot/mesh.hpp"

#include <array>
#include <functional>
#include <vector>

namespace biot {

using Jacobian = Eigen::Matrix2d;  // J(c, d) = d v_c / d x_d
using VectorField = std::function<Point(const Point&)>;
using ScalarField = std::function<double(const Point&)>;

inline constexpr int mtw_local_dim = 9;
inline constexpr int cubic_vector_dim = 20;

/// Values and Jacobians of the nine local basis functions at one point.
struct MtwValues {
  std::array<Point, mtw_local_dim> value;
  std::array<Jacobian, mtw_local_dim> grad;

  double div(int k) const { return grad[k](0, 0) + grad[k](1, 1); }
  Jacobian sym_grad(int k) const { return 0.5 * (grad[k] + grad[k].transpose()); }
};

/// Lowest-order Mardal-Tai-Winther basis on one physical triangle.
///
/// The local space is {v in P3(T)^2 : div v in P0, v.n|e in P1 on each edge}.
/// Local DOFs 3i, 3i+1, 3i+2 belong to local edge i (opposite vertex i) and are
///   int_0^1 v.n ds,  int_0^1 v.n (s - 1/2) ds,  int_0^1 v.t ds
/// in the frame `edges[i]`. With the global edge frames these functionals are
/// single valued on shared edges, so no sign flips are needed at assembly.
class MtwLocalBasis {
public:
  std::array<EdgeGeometry, 3> edges;
  Point center = Point::Zero();
  double scale = 1.0;
  /// Column k holds the P3 monomial coefficients of basis function k; rows
  /// 0..9 are the x component, 10..19 the y component.
  Eigen::Matrix<double, cubic_vector_dim, mtw_local_dim> coeffs;
  double dof_condition = 0.0;

  MtwValues eval(const Point& x) const;
  Point value(int k, const Point& x) const;
};

/// Builds the basis from the triangle corners and the (globally oriented)
/// edge frames, local edge i being opposite corner i. Throws ElementError when
/// the DOF matrix is singular to working precision (condition > 1e12).
MtwLocalBasis mtw_local_basis(const std::array<Point, 3>& corners,
                              const std::array<EdgeGeometry, 3>& edges);

/// The three edge DOFs of a vector field in the frame `edge`.
std::array<double, 3> mtw_edge_dofs(const EdgeGeometry& edge, const VectorField& v);

/// Dimension of the constraint nullspace on the given triangle (9 for any
/// nondegenerate triangle).
int mtw_local_space_dim(const std::array<Point, 3>& corners);

/// P1 hat functions and the cell indicator of the enriched Galerkin space.
struct EgValues {
  std::array<double, 3> hat;
  std::array<Point, 3> hat_grad;
  double cell = 1.0;
  Point cell_grad = Point::Zero();
};

EgValues eg_eval(const std::array<Point, 3>& corners, const Point& x);

/// Barycentric coordinates of x.
std::array<double, 3> barycentric(const std::array<Point, 3>& corners, const Point& x);

/// Global DOF numbering.
///
/// Displacement: raw index 3e+k for edge e; all three DOFs of Gamma_d edges
/// are eliminated, the rest are numbered consecutively. Pressure: vertex
/// DOFs [0, nv) form the continuous block, cell DOFs [nv, nv+nt) the P0 block.
class DofHandler {
public:
  DofHandler() = default;
  DofHandler(const Mesh& mesh, const BoundaryTags& tags);

  Index num_u() const { return num_u_; }
  Index num_p() const { return num_pc_ + num_p0_; }
  Index num_pc() const { return num_pc_; }
  Index num_p0() const { return num_p0_; }
  Index num_total() const { return num_u_ + num_p(); }
  Index num_raw_u() const { return static_cast<Index>(u_index_.size()); }

  /// Reduced index of raw DOF 3e+k, or -1 when constrained.
  Index u_dof(Index edge, int k) const { return u_index_[3 * edge + k]; }
  Index u_dof_raw(Index raw) const { return u_index_[raw]; }
  /// Reduced indices of the nine local DOFs of triangle t (-1 if constrained).
  std::array<Index, mtw_local_dim> cell_u_dofs(const Mesh& mesh, Index t) const;

  Index pc_dof(Index vertex) const { return vertex; }
  Index p0_dof(Index triangle) const { return num_pc_ + triangle; }

private:
  std::vector<Index> u_index_;
  Index num_u_ = 0;
  Index num_pc_ = 0;
  Index num_p0_ = 0;
};

/// Mesh, boundary tags, per-triangle MTW bases and the DOF map.
/// Immutable after construction.
class Discretization {
public:
  Discretization(Mesh mesh, BoundaryTags tags, Exec exec = Exec::parallel);

  const Mesh& mesh() const { return mesh_; }
  const BoundaryTags& tags() const { return tags_; }
  const DofHandler& dofs() const { return dofs_; }
  const MtwLocalBasis& basis(Index t) const { return bases_[t]; }
  std::array<EdgeGeometry, 3> cell_edges(Index t) const;

  /// Interpolation DOFs (reduced numbering, constrained DOFs dropped).
  Vector interpolate_u(const VectorField& v) const;
  /// Raw interpolation DOFs indexed 3e+k, including Gamma_d edges.
  Vector interpolate_u_raw(const VectorField& v) const;
  /// Evaluates a reduced displacement vector on triangle t.
  Point eval_u(const Vector& u, Index t, const Point& x) const;

private:
  Mesh mesh_;
  BoundaryTags tags_;
  DofHandler dofs_;
  std::vector<MtwLocalBasis> bases_;
};

}  // namespace biot
