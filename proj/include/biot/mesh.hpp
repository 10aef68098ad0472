#pragma once

#include "biot/common.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace biot {

/// Oriented frame of a mesh edge.
///
/// The edge runs from `vertices[0]` to `vertices[1]`; `tangent` points in that
/// direction and `normal` is the outward normal of the owner triangle T+ (the
/// adjacent triangle of smaller index). For boundary edges that is the outward
/// normal of the domain. Edge parameters s in [0,1] are measured from
/// `vertices[0]`.
struct EdgeGeometry {
  double length = 0.0;
  Point normal = Point::Zero();
  Point tangent = Point::Zero();
  Point midpoint = Point::Zero();
  Point start = Point::Zero();
  Point end = Point::Zero();

  Point at(double s) const { return start + s * (end - start); }
};

inline constexpr Index no_triangle = -1;

/// Affine triangulation with full edge topology.
///
/// Local edge i of a triangle is the edge opposite its local vertex i.
/// `tri_edge_sign[t][i]` is +1 when t is the owner T+ of that edge and -1
/// otherwise, i.e. the stored edge normal times the sign is the outward
/// normal of t.
class Mesh {
public:
  std::vector<Point> vertices;
  std::vector<std::array<Index, 3>> triangles;
  std::vector<std::array<Index, 2>> edges;
  std::vector<std::array<Index, 2>> edge_to_tris;
  std::vector<std::array<Index, 3>> tri_to_edges;
  std::vector<std::array<int, 3>> tri_edge_sign;
  double h_max = 0.0;

  Index num_vertices() const { return static_cast<Index>(vertices.size()); }
  Index num_triangles() const { return static_cast<Index>(triangles.size()); }
  Index num_edges() const { return static_cast<Index>(edges.size()); }

  bool is_boundary_edge(Index e) const { return edge_to_tris[e][1] == no_triangle; }
  double signed_area(Index t) const;
  double area(Index t) const { return signed_area(t); }
  std::array<Point, 3> corners(Index t) const;
  EdgeGeometry edge_geometry(Index e) const;

  /// Builds edges and adjacency from `vertices` and `triangles`.
  void build_topology();
};

/// N x N structured triangulation of the unit square; every subsquare is
/// split along its lower-left to upper-right diagonal.
Mesh build_structured_mesh(Index n);

/// Selects boundary edges by a predicate on the edge midpoint.
class BoundaryRegion {
public:
  using Predicate = std::function<bool(const Point&)>;

  BoundaryRegion() = default;
  BoundaryRegion(std::string name, Predicate pred)
      : name_(std::move(name)), pred_(std::move(pred)) {}

  static BoundaryRegion all();
  static BoundaryRegion none();
  /// Comma-separated list drawn from left, right, bottom, top, all, none.
  static BoundaryRegion parse(std::string_view sides);

  bool contains(const Point& midpoint) const { return pred_ && pred_(midpoint); }
  const std::string& name() const { return name_; }

private:
  std::string name_ = "none";
  Predicate pred_;
};

/// Boundary-edge membership for the two partitions of the boundary.
/// Flags are indexed by global edge index and are false on interior edges.
struct BoundaryTags {
  std::vector<char> displacement_dirichlet;  // Gamma_d; complement is Gamma_t
  std::vector<char> pressure_dirichlet;      // Gamma_p; complement is Gamma_f

  bool is_gamma_d(Index e) const { return displacement_dirichlet[e] != 0; }
  bool is_gamma_p(Index e) const { return pressure_dirichlet[e] != 0; }
  Index count_gamma_d() const;
  Index count_gamma_p() const;
};

/// Throws ConfigError when either Dirichlet part would be empty.
BoundaryTags classify_boundary(const Mesh& mesh, const BoundaryRegion& gamma_d,
                               const BoundaryRegion& gamma_p);

/// Plain-text dump (vertices, triangles, edges) for debugging.
void write_mesh(std::ostream& os, const Mesh& mesh);

}  // namespace biot
