#include "biot/diagnostics.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <sstream>

using namespace biot;
using biot::test::make_disc;

TEST_SUITE("diagnostics") {
  TEST_CASE("all structural checks pass on N = 4") {
    const auto disc = make_disc(4);
    const ModelParams params;
    const DiagnosticReport report = structural_diagnostics(*disc, params, 20240101);
    std::ostringstream os;
    report.print(os);
    CAPTURE(os.str());
    CHECK(report.passed());
    for (const char* name : {"lemma_identity", "divergence_piecewise_const", "normal_continuity",
                             "tangential_mean_continuity", "stabilization_kernel", "h_norm_consistency",
                             "a_p_symmetric", "system_symmetric", "preconditioner_symmetric",
                             "coercivity"}) {
      CAPTURE(name);
      REQUIRE(report.find(name) != nullptr);
      CHECK(report.find(name)->passed);
    }
    CHECK(report.find("missing") == nullptr);
    CHECK(os.str().find("FAIL") == std::string::npos);
  }

  TEST_CASE("a reversed edge frame breaks normal continuity") {
    const auto disc = make_disc(4);
    const Vector u = biot::test::random_vector(disc->dofs().num_u(), 3);
    // Choose a triangle and one of its interior edges.
    const Mesh& mesh = disc->mesh();
    Index target = -1;
    int local = -1;
    for (Index t = 0; t < mesh.num_triangles() && target < 0; ++t) {
      for (int i = 0; i < 3; ++i) {
        if (!mesh.is_boundary_edge(mesh.tri_to_edges[t][i])) {
          target = t;
          local = i;
          break;
        }
      }
    }
    REQUIRE(target >= 0);
    const MtwLocalBasis broken = flipped_edge_basis(*disc, target, local);
    const BasisLookup lookup = [&](Index t) -> const MtwLocalBasis& {
      return t == target ? broken : disc->basis(t);
    };
    CHECK(normal_continuity_check(*disc, u).passed);
    const CheckResult bad = normal_continuity_check(*disc, u, lookup);
    CHECK_FALSE(bad.passed);
    CHECK(bad.value > 1e-3);
  }

  TEST_CASE("coercivity fails for a tiny penalty") {
    const auto disc = make_disc(4);
    ModelParams params;
    params.gamma = 0.01;
    const AssembledForms forms = assemble_forms(*disc, params);
    const CheckResult c = coercivity_check(*disc, forms, 99);
    CHECK_FALSE(c.passed);
    ModelParams good;
    const CheckResult g = coercivity_check(*disc, assemble_forms(*disc, good), 99);
    CHECK(g.passed);
    CHECK(g.value >= 0.1);
  }

  TEST_CASE("S vanishes on the continuous block") {
    const auto disc = make_disc(4);
    const AssembledForms forms = assemble_forms(*disc, ModelParams{});
    const Index npc = disc->dofs().num_pc();
    Vector q = Vector::Zero(disc->dofs().num_p());
    q.head(npc) = biot::test::random_vector(npc, 17);
    CHECK(forms.stab.quadratic_form(q) == 0.0);
    CHECK(stabilization_kernel_check(forms, 5).passed);
  }

  TEST_CASE("symmetry check detects asymmetry") {
    const SparseMatrix m = SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0 + 1e-15}});
    CHECK_FALSE(symmetry_check("m", m).passed);
    CHECK(symmetry_check("i", SparseMatrix::identity(3)).passed);
  }

  TEST_CASE("patch indicator sum of the constant is three") {
    const auto disc = make_disc(3);
    const Mesh& mesh = disc->mesh();
    const AssembledForms forms = assemble_forms(*disc, ModelParams{});
    Vector q = Vector::Zero(disc->dofs().num_p());
    q.head(disc->dofs().num_pc()).setOnes();
    for (Index t = 0; t < mesh.num_triangles(); ++t) {
      double ih = 0.0;
      for (Index v : mesh.triangles[t]) ih += q[v];
      CHECK(ih == 3.0);
    }
    const Vector u = biot::test::random_vector(disc->dofs().num_u(), 8);
    // With q^c = 1, -(q, div u) / alpha is the integral of div u.
    double integral = 0.0;
    for (Index t = 0; t < mesh.num_triangles(); ++t) {
      const auto c = mesh.corners(t);
      const MtwValues v = disc->basis(t).eval((c[0] + c[1] + c[2]) / 3.0);
      const auto dofs = disc->dofs().cell_u_dofs(mesh, t);
      for (int i = 0; i < mtw_local_dim; ++i) {
        if (dofs[i] >= 0) integral += u[dofs[i]] * v.div(i) * mesh.area(t);
      }
    }
    CHECK(-q.dot(forms.b_div * u) == doctest::Approx(integral).epsilon(1e-12));
    CHECK(lemma_identity_check(*disc, forms, ModelParams{}, 4, 10).passed);
  }

  TEST_CASE("inf-sup diagnostic") {
    const auto disc = make_disc(4);
    ModelParams params;
    params.beta = 2.0;
    const InfSupResult r = infsup_diagnostic(*disc, params);
    CHECK(r.min_abs > 0.05);
    CHECK(r.max_abs >= r.min_abs);
    CHECK(r.dimension == disc->dofs().num_total() - 1);
    CHECK_THROWS_AS(infsup_diagnostic(*make_disc(9), params), ConfigError);
  }
}
