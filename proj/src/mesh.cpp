#include "biot/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

namespace biot {

double Mesh::signed_area(Index t) const {
  const auto& tri = triangles[t];
  const Point a = vertices[tri[0]];
  const Point b = vertices[tri[1]];
  const Point c = vertices[tri[2]];
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

std::array<Point, 3> Mesh::corners(Index t) const {
  const auto& tri = triangles[t];
  return {vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]};
}

EdgeGeometry Mesh::edge_geometry(Index e) const {
  EdgeGeometry g;
  g.start = vertices[edges[e][0]];
  g.end = vertices[edges[e][1]];
  const Point d = g.end - g.start;
  g.length = d.norm();
  g.tangent = d / g.length;
  // Edge direction follows the counterclockwise traversal of T+, so the
  // outward normal of T+ is the tangent rotated clockwise.
  g.normal = Point(g.tangent.y(), -g.tangent.x());
  g.midpoint = 0.5 * (g.start + g.end);
  return g;
}

void Mesh::build_topology() {
  const Index nt = num_triangles();
  edges.clear();
  edge_to_tris.clear();
  tri_to_edges.assign(nt, {0, 0, 0});
  tri_edge_sign.assign(nt, {0, 0, 0});

  std::map<std::pair<Index, Index>, Index> lookup;
  h_max = 0.0;
  for (Index t = 0; t < nt; ++t) {
    const auto& tri = triangles[t];
    for (int i = 0; i < 3; ++i) {
      const Index a = tri[(i + 1) % 3];
      const Index b = tri[(i + 2) % 3];
      h_max = std::max(h_max, (vertices[a] - vertices[b]).norm());
      const auto key = std::minmax(a, b);
      auto it = lookup.find({key.first, key.second});
      if (it == lookup.end()) {
        const Index e = num_edges();
        lookup.emplace(std::pair{key.first, key.second}, e);
        // First visitor has the smallest triangle index: it owns the edge
        // and fixes its direction (counterclockwise in the owner).
        edges.push_back({a, b});
        edge_to_tris.push_back({t, no_triangle});
        tri_to_edges[t][i] = e;
        tri_edge_sign[t][i] = 1;
      } else {
        const Index e = it->second;
        edge_to_tris[e][1] = t;
        tri_to_edges[t][i] = e;
        tri_edge_sign[t][i] = -1;
      }
    }
  }
}

Mesh build_structured_mesh(Index n) {
  if (n < 1) {
    throw ConfigError("structured mesh requires N >= 1, got " + std::to_string(n));
  }
  Mesh mesh;
  const double h = 1.0 / static_cast<double>(n);
  mesh.vertices.reserve((n + 1) * (n + 1));
  for (Index j = 0; j <= n; ++j) {
    for (Index i = 0; i <= n; ++i) {
      // Exact end points so boundary predicates can compare with 0 and 1.
      const double x = (i == n) ? 1.0 : static_cast<double>(i) * h;
      const double y = (j == n) ? 1.0 : static_cast<double>(j) * h;
      mesh.vertices.emplace_back(x, y);
    }
  }
  const auto vid = [n](Index i, Index j) { return j * (n + 1) + i; };
  mesh.triangles.reserve(2 * n * n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const Index v00 = vid(i, j);
      const Index v10 = vid(i + 1, j);
      const Index v11 = vid(i + 1, j + 1);
      const Index v01 = vid(i, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
  mesh.build_topology();
  return mesh;
}

BoundaryRegion BoundaryRegion::all() {
  return {"all", [](const Point&) { return true; }};
}

BoundaryRegion BoundaryRegion::none() { return {}; }

BoundaryRegion BoundaryRegion::parse(std::string_view sides) {
  constexpr double tol = 1e-12;
  std::vector<Predicate> parts;
  std::string token;
  std::stringstream ss{std::string(sides)};
  bool any = false;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    any = true;
    if (token == "all") return all();
    if (token == "none") continue;
    if (token == "left") {
      parts.emplace_back([](const Point& p) { return std::abs(p.x()) < tol; });
    } else if (token == "right") {
      parts.emplace_back([](const Point& p) { return std::abs(p.x() - 1.0) < tol; });
    } else if (token == "bottom") {
      parts.emplace_back([](const Point& p) { return std::abs(p.y()) < tol; });
    } else if (token == "top") {
      parts.emplace_back([](const Point& p) { return std::abs(p.y() - 1.0) < tol; });
    } else {
      throw ConfigError("unknown boundary side '" + token + "'");
    }
  }
  if (!any || parts.empty()) return none();
  return {std::string(sides), [parts = std::move(parts)](const Point& p) {
            return std::any_of(parts.begin(), parts.end(),
                               [&](const Predicate& f) { return f(p); });
          }};
}

Index BoundaryTags::count_gamma_d() const {
  return std::count(displacement_dirichlet.begin(), displacement_dirichlet.end(), 1);
}

Index BoundaryTags::count_gamma_p() const {
  return std::count(pressure_dirichlet.begin(), pressure_dirichlet.end(), 1);
}

BoundaryTags classify_boundary(const Mesh& mesh, const BoundaryRegion& gamma_d,
                               const BoundaryRegion& gamma_p) {
  BoundaryTags tags;
  tags.displacement_dirichlet.assign(mesh.num_edges(), 0);
  tags.pressure_dirichlet.assign(mesh.num_edges(), 0);
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.is_boundary_edge(e)) continue;
    const Point m = mesh.edge_geometry(e).midpoint;
    tags.displacement_dirichlet[e] = gamma_d.contains(m) ? 1 : 0;
    tags.pressure_dirichlet[e] = gamma_p.contains(m) ? 1 : 0;
  }
  if (tags.count_gamma_d() == 0) {
    throw ConfigError("displacement Dirichlet boundary '" + gamma_d.name() +
                      "' selects no edges");
  }
  if (tags.count_gamma_p() == 0) {
    throw ConfigError("pressure Dirichlet boundary '" + gamma_p.name() +
                      "' selects no edges");
  }
  return tags;
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  os.precision(17);
  os << "vertices " << mesh.num_vertices() << '\n';
  for (const auto& v : mesh.vertices) os << v.x() << ' ' << v.y() << '\n';
  os << "triangles " << mesh.num_triangles() << '\n';
  for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << "edges " << mesh.num_edges() << '\n';
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    os << mesh.edges[e][0] << ' ' << mesh.edges[e][1] << ' ' << mesh.edge_to_tris[e][0]
       << ' ' << mesh.edge_to_tris[e][1] << '\n';
  }
}

}  // namespace biot
