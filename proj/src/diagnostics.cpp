#include "biot/diagnostics.hpp"

#include "biot/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace biot {

namespace {

Vector random_vector(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

CheckResult make_check(std::string name, double value, double tolerance, std::string detail = {}) {
  return {std::move(name), value <= tolerance, value, tolerance, std::move(detail)};
}

Point eval_with(const Discretization& disc, const MtwLocalBasis& basis, const Vector& u, Index t,
                const Point& x) {
  const auto dofs = disc.dofs().cell_u_dofs(disc.mesh(), t);
  Point out = Point::Zero();
  for (int k = 0; k < mtw_local_dim; ++k) {
    if (dofs[k] >= 0) out += u[dofs[k]] * basis.value(k, x);
  }
  return out;
}

// Dense basis of the pressure subspace whose cell part has zero
// area-weighted mean, embedded in the full (u | p) space: the first cell
// coefficient is eliminated.
Eigen::MatrixXd mean_zero_embedding(const Discretization& disc, Index offset) {
  const Mesh& mesh = disc.mesh();
  const Index n = offset + disc.dofs().num_p();
  const Index pin = offset + disc.dofs().p0_dof(0);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n - 1);
  for (Index j = 0, col = 0; j < n; ++j) {
    if (j == pin) continue;
    w(j, col) = 1.0;
    if (j > pin) w(pin, col) = -mesh.area(j - pin) / mesh.area(0);
    ++col;
  }
  return w;
}

}  // namespace

bool DiagnosticReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* DiagnosticReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

void DiagnosticReport::print(std::ostream& os) const {
  for (const auto& c : checks) {
    os << fmt::format("{:<26} {}  value {:.3e}  tolerance {:.1e}", c.name, c.passed ? "PASS" : "FAIL",
                      c.value, c.tolerance);
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << '\n';
  }
}

MtwLocalBasis flipped_edge_basis(const Discretization& disc, Index t, int local_edge) {
  auto edges = disc.cell_edges(t);
  EdgeGeometry& e = edges[local_edge];
  std::swap(e.start, e.end);
  e.normal = -e.normal;
  e.tangent = -e.tangent;
  return mtw_local_basis(disc.mesh().corners(t), edges);
}

CheckResult lemma_identity_check(const Discretization& disc, const AssembledForms& forms,
                                 const ModelParams& params, std::uint64_t seed, int pairs) {
  const Mesh& mesh = disc.mesh();
  const Index nc = disc.dofs().num_pc();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const Vector v = random_vector(disc.dofs().num_u(), rng);
    Vector q = Vector::Zero(disc.dofs().num_p());
    q.head(nc) = random_vector(nc, rng);
    // b_div carries -(alpha q, div v).
    const double lhs = -3.0 * q.dot(forms.b_div * v) / params.alpha;
    double rhs = 0.0;
    for (Index t = 0; t < mesh.num_triangles(); ++t) {
      const auto c = mesh.corners(t);
      const Point centroid = (c[0] + c[1] + c[2]) / 3.0;
      const MtwValues vals = disc.basis(t).eval(centroid);
      const auto dofs = disc.dofs().cell_u_dofs(mesh, t);
      double div = 0.0;
      for (int i = 0; i < mtw_local_dim; ++i) {
        if (dofs[i] >= 0) div += v[dofs[i]] * vals.div(i);
      }
      double ih = 0.0;
      for (Index vert : mesh.triangles[t]) ih += q[disc.dofs().pc_dof(vert)];
      rhs += div * mesh.area(t) * ih;
    }
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return make_check("lemma_identity", worst, 1e-12, fmt::format("{} random pairs", pairs));
}

CheckResult divergence_range_check(const Discretization& disc, const Vector& u) {
  const Mesh& mesh = disc.mesh();
  double worst = 0.0, scale = 0.0;
  Index where = -1;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const CellQuadrature quad = cell_quadrature(mesh, t);
    const auto dofs = disc.dofs().cell_u_dofs(mesh, t);
    std::vector<double> divs;
    for (const Point& x : quad.points) {
      const MtwValues vals = disc.basis(t).eval(x);
      double div = 0.0;
      for (int i = 0; i < mtw_local_dim; ++i) {
        if (dofs[i] >= 0) div += u[dofs[i]] * vals.div(i);
      }
      divs.push_back(div);
      scale = std::max(scale, std::abs(div));
    }
    const auto [lo, hi] = std::minmax_element(divs.begin(), divs.end());
    if (*hi - *lo > worst) {
      worst = *hi - *lo;
      where = t;
    }
  }
  const double rel = scale > 0.0 ? worst / scale : 0.0;
  return make_check("divergence_piecewise_const", rel, 1e-10,
                    where >= 0 ? fmt::format("worst cell {}", where) : std::string{});
}

CheckResult normal_continuity_check(const Discretization& disc, const Vector& u,
                                    const BasisLookup& basis) {
  const Mesh& mesh = disc.mesh();
  const LineRule rule = edge_quadrature(assembly_degree);
  auto lookup = [&](Index t) -> const MtwLocalBasis& { return basis ? basis(t) : disc.basis(t); };
  double worst = 0.0, scale = 0.0;
  Index where = -1;
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.is_boundary_edge(e)) continue;
    const EdgeGeometry g = mesh.edge_geometry(e);
    const auto& tris = mesh.edge_to_tris[e];
    for (double s : rule.points) {
      const Point x = g.at(s);
      const double a = eval_with(disc, lookup(tris[0]), u, tris[0], x).dot(g.normal);
      const double b = eval_with(disc, lookup(tris[1]), u, tris[1], x).dot(g.normal);
      scale = std::max({scale, std::abs(a), std::abs(b)});
      if (std::abs(a - b) > worst) {
        worst = std::abs(a - b);
        where = e;
      }
    }
  }
  const double rel = scale > 0.0 ? worst / scale : 0.0;
  return make_check("normal_continuity", rel, 1e-10,
                    where >= 0 ? fmt::format("worst edge {}", where) : std::string{});
}

CheckResult tangential_mean_check(const Discretization& disc, const Vector& u) {
  const Mesh& mesh = disc.mesh();
  const LineRule rule = edge_quadrature(assembly_degree);
  double worst = 0.0, scale = 0.0;
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.is_boundary_edge(e)) continue;
    const EdgeGeometry g = mesh.edge_geometry(e);
    const auto& tris = mesh.edge_to_tris[e];
    double a = 0.0, b = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const Point x = g.at(rule.points[k]);
      a += rule.weights[k] * disc.eval_u(u, tris[0], x).dot(g.tangent);
      b += rule.weights[k] * disc.eval_u(u, tris[1], x).dot(g.tangent);
    }
    scale = std::max({scale, std::abs(a), std::abs(b)});
    worst = std::max(worst, std::abs(a - b));
  }
  return make_check("tangential_mean_continuity", scale > 0.0 ? worst / scale : 0.0, 1e-10);
}

CheckResult stabilization_kernel_check(const AssembledForms& forms, std::uint64_t seed) {
  const SparseMatrix& s = forms.stab;
  const Index nc = forms.num_pc;
  double worst = 0.0;
  for (Index i = 0; i < s.rows(); ++i) {
    for (Index k = s.row_ptr()[i]; k < s.row_ptr()[i + 1]; ++k) {
      if (i < nc || s.col_idx()[k] < nc) worst = std::max(worst, std::abs(s.values()[k]));
    }
  }
  std::mt19937_64 rng(seed);
  Vector q = Vector::Zero(s.rows());
  q.head(nc) = random_vector(nc, rng);
  worst = std::max(worst, std::abs(s.quadratic_form(q)));
  return make_check("stabilization_kernel", worst, 0.0);
}

CheckResult symmetry_check(const std::string& name, const SparseMatrix& m) {
  return make_check(name, m.asymmetry(), 0.0);
}

CheckResult h_norm_consistency_check(const Discretization& disc, const AssembledForms& forms,
                                     const ModelParams& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const Vector q = random_vector(disc.dofs().num_p(), rng);
    const HNormTerms terms = evaluate_h_norm(disc, params, q);
    const double combined = forms.h_norm.quadratic_form(q);
    const double stiff = forms.a_p_parts.stiffness.quadratic_form(q);
    worst = std::max(worst, std::abs(combined - terms.total()) / terms.total());
    worst = std::max(worst, std::abs(stiff - terms.stiffness) / std::max(terms.stiffness, 1e-300));
  }
  return make_check("h_norm_consistency", worst, 1e-12);
}

CheckResult coercivity_check(const Discretization& disc, const AssembledForms& forms,
                             std::uint64_t seed, int count, double threshold) {
  const Eigen::MatrixXd w = mean_zero_embedding(disc, 0);
  const Index dim = std::min<Index>(count, w.cols());
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd v(w.cols(), dim);
  for (Index j = 0; j < dim; ++j) v.col(j) = random_vector(w.cols(), rng);
  const Eigen::MatrixXd basis = w * Eigen::HouseholderQR<Eigen::MatrixXd>(v).householderQ() *
                                Eigen::MatrixXd::Identity(w.cols(), dim);
  const Eigen::MatrixXd a = basis.transpose() * forms.a_p.to_dense() * basis;
  const Eigen::MatrixXd h = basis.transpose() * forms.h_norm.to_dense() * basis;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, h, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    return {"coercivity", false, 0.0, threshold, "generalized eigensolve failed"};
  }
  const double c = eig.eigenvalues().minCoeff();
  return {"coercivity", c >= threshold, c, threshold,
          fmt::format("min a_p/||.||_h^2 over {} vectors", dim)};
}

DiagnosticReport structural_diagnostics(const Discretization& disc, const ModelParams& params,
                                        std::uint64_t seed, bool with_coercivity) {
  const AssembledForms forms = assemble_forms(disc, params);
  std::mt19937_64 rng(seed);
  const Vector u = random_vector(disc.dofs().num_u(), rng);
  DiagnosticReport report;
  report.checks.push_back(lemma_identity_check(disc, forms, params, seed + 1));
  report.checks.push_back(divergence_range_check(disc, u));
  report.checks.push_back(normal_continuity_check(disc, u));
  report.checks.push_back(tangential_mean_check(disc, u));
  report.checks.push_back(stabilization_kernel_check(forms, seed + 2));
  report.checks.push_back(h_norm_consistency_check(disc, forms, params, seed + 3));
  report.checks.push_back(symmetry_check("a_p_symmetric", forms.a_p));
  report.checks.push_back(symmetry_check("system_symmetric", assemble_system(forms, params)));
  const PreconditionerBlocks blocks = assemble_preconditioner(forms, params);
  const SparseMatrix pq = pressure_preconditioner(forms, params);
  report.checks.push_back(symmetry_check(
      "preconditioner_symmetric",
      block_matrix(blocks.p_v, SparseMatrix(blocks.p_v.rows(), pq.cols()),
                   SparseMatrix(pq.rows(), blocks.p_v.cols()), pq)));
  if (with_coercivity) report.checks.push_back(coercivity_check(disc, forms, seed + 4));
  return report;
}

InfSupResult infsup_diagnostic(const Discretization& disc, const ModelParams& params, Index max_n) {
  const Index cells = disc.mesh().num_triangles();
  if (cells > 2 * max_n * max_n) {
    throw ConfigError(fmt::format("inf-sup diagnostic is dense and limited to N <= {}", max_n));
  }
  const AssembledForms forms = assemble_forms(disc, params);
  const SparseMatrix system = assemble_system(forms, params);
  const SparseMatrix pq = pressure_preconditioner(forms, params);
  const Index nu = forms.a_u.rows();
  const SparseMatrix p = block_matrix(forms.a_u, SparseMatrix(nu, pq.cols()),
                                      SparseMatrix(pq.rows(), nu), pq);
  const Eigen::MatrixXd w = mean_zero_embedding(disc, nu);
  const Eigen::MatrixXd b = w.transpose() * system.to_dense() * w;
  const Eigen::MatrixXd m = w.transpose() * p.to_dense() * w;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(b, m, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw InternalError("inf-sup eigensolve failed");
  const Vector mu = eig.eigenvalues().cwiseAbs();
  return {mu.minCoeff(), mu.maxCoeff(), static_cast<Index>(mu.size())};
}

}  // namespace biot
