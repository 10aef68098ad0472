#include "biot/mesh.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace biot;

TEST_SUITE("mesh") {
  TEST_CASE("entity counts of structured meshes") {
    struct Case {
      Index n, nv, nt, ne;
    };
    for (const Case c : {Case{1, 4, 2, 5}, Case{2, 9, 8, 16}, Case{8, 81, 128, 208}}) {
      const Mesh m = build_structured_mesh(c.n);
      CHECK(m.num_vertices() == c.nv);
      CHECK(m.num_triangles() == c.nt);
      CHECK(m.num_edges() == c.ne);
      CHECK(m.num_vertices() - m.num_edges() + m.num_triangles() == 1);
      CHECK(m.num_edges() == 3 * c.n * c.n + 2 * c.n);
    }
  }

  TEST_CASE("orientation and adjacency invariants") {
    const Mesh m = build_structured_mesh(5);
    double total = 0.0;
    for (Index t = 0; t < m.num_triangles(); ++t) {
      CHECK(m.signed_area(t) > 0.0);
      total += m.area(t);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    Index boundary = 0;
    for (Index e = 0; e < m.num_edges(); ++e) {
      const auto& tris = m.edge_to_tris[e];
      REQUIRE(tris[0] != no_triangle);
      if (m.is_boundary_edge(e)) {
        ++boundary;
      } else {
        CHECK(tris[0] < tris[1]);
      }
    }
    CHECK(boundary == 20);
    // The stored normal is outward for the owner and flips for the neighbour.
    for (Index t = 0; t < m.num_triangles(); ++t) {
      const auto c = m.corners(t);
      const Point centroid = (c[0] + c[1] + c[2]) / 3.0;
      for (int i = 0; i < 3; ++i) {
        const EdgeGeometry g = m.edge_geometry(m.tri_to_edges[t][i]);
        const double outward = (g.midpoint - centroid).dot(g.normal) * m.tri_edge_sign[t][i];
        CHECK(outward > 0.0);
        // Local edge i is opposite vertex i.
        CHECK(std::abs((c[i] - g.start).dot(g.normal)) > 1e-3);
      }
    }
  }

  TEST_CASE("edge geometry examples") {
    const Mesh m1 = build_structured_mesh(1);
    bool found_diagonal = false, found_bottom = false;
    for (Index e = 0; e < m1.num_edges(); ++e) {
      const EdgeGeometry g = m1.edge_geometry(e);
      CHECK(g.normal.norm() == doctest::Approx(1.0));
      CHECK(g.normal.dot(g.tangent) == doctest::Approx(0.0));
      if (!m1.is_boundary_edge(e)) {
        found_diagonal = true;
        CHECK(g.length == doctest::Approx(std::sqrt(2.0)));
      }
      if (std::abs(g.midpoint.y()) < 1e-12) {
        found_bottom = true;
        CHECK(g.normal.x() == doctest::Approx(0.0));
        CHECK(g.normal.y() == doctest::Approx(-1.0));
      }
    }
    CHECK(found_diagonal);
    CHECK(found_bottom);

    const Mesh m2 = build_structured_mesh(2);
    int vertical_interior = 0;
    for (Index e = 0; e < m2.num_edges(); ++e) {
      const EdgeGeometry g = m2.edge_geometry(e);
      if (!m2.is_boundary_edge(e) && std::abs(g.tangent.x()) < 1e-12) {
        ++vertical_interior;
        CHECK(g.length == doctest::Approx(0.5));
      }
    }
    CHECK(vertical_interior == 2);
    CHECK(m2.h_max == doctest::Approx(std::sqrt(2.0) / 2));
  }

  TEST_CASE("boundary classification") {
    const Mesh m2 = build_structured_mesh(2);
    const BoundaryTags left = classify_boundary(m2, BoundaryRegion::parse("left"), BoundaryRegion::all());
    CHECK(left.count_gamma_d() == 2);
    Index traction = 0;
    for (Index e = 0; e < m2.num_edges(); ++e) {
      if (m2.is_boundary_edge(e) && !left.is_gamma_d(e)) ++traction;
      if (!m2.is_boundary_edge(e)) {
        CHECK_FALSE(left.is_gamma_d(e));
        CHECK_FALSE(left.is_gamma_p(e));
      }
    }
    CHECK(traction == 6);
    CHECK(left.count_gamma_p() == 8);

    const Mesh m1 = build_structured_mesh(1);
    CHECK(classify_boundary(m1, BoundaryRegion::all(), BoundaryRegion::all()).count_gamma_d() == 4);
    const BoundaryTags two = classify_boundary(m2, BoundaryRegion::parse("left,top"), BoundaryRegion::parse("bottom"));
    CHECK(two.count_gamma_d() == 4);
    CHECK(two.count_gamma_p() == 2);
  }

  TEST_CASE("invalid input") {
    CHECK_THROWS_AS(build_structured_mesh(0), ConfigError);
    CHECK_THROWS_AS(BoundaryRegion::parse("front"), ConfigError);
    const Mesh m = build_structured_mesh(2);
    CHECK_THROWS_AS(classify_boundary(m, BoundaryRegion::none(), BoundaryRegion::all()), ConfigError);
    CHECK_THROWS_AS(classify_boundary(m, BoundaryRegion::all(), BoundaryRegion::none()), ConfigError);
  }

  TEST_CASE("text dump lists every entity") {
    std::ostringstream os;
    write_mesh(os, build_structured_mesh(1));
    const std::string s = os.str();
    CHECK(s.find("vertices 4") != std::string::npos);
    CHECK(s.find("triangles 2") != std::string::npos);
    CHECK(s.find("edges 5") != std::string::npos);
  }
}
