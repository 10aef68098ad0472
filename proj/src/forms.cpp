#include "biot/forms.hpp"

#include "biot/quadrature.hpp"

#include <cmath>
#include <vector>

namespace biot {

namespace {

struct LocalBlock {
  std::vector<Index> rows;
  std::vector<Index> cols;
  Eigen::MatrixXd values;
};

// Local blocks are computed independently (in parallel when requested) and
// scattered serially in entity order, so the triplet sequence and hence the
// assembled matrix do not depend on the execution policy.
template <class Kernel>
SparseMatrix assemble_blocks(Index nrows, Index ncols, Index count, Exec exec, Kernel&& kernel) {
  std::vector<LocalBlock> blocks(count);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (Index k = 0; k < count; ++k) blocks[k] = kernel(k);

  std::size_t total = 0;
  for (const auto& b : blocks) total += b.rows.size() * b.cols.size();
  std::vector<Triplet> triplets;
  triplets.reserve(total);
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows.size(); ++i) {
      if (b.rows[i] < 0) continue;
      for (std::size_t j = 0; j < b.cols.size(); ++j) {
        if (b.cols[j] < 0) continue;
        triplets.push_back({b.rows[i], b.cols[j], b.values(i, j)});
      }
    }
  }
  return SparseMatrix::from_triplets(nrows, ncols, std::move(triplets));
}

void mirror_upper(Eigen::MatrixXd& m) {
  m.triangularView<Eigen::StrictlyLower>() = m.transpose();
}

std::vector<Index> cell_p_dofs(const Discretization& disc, Index t) {
  const auto& tri = disc.mesh().triangles[t];
  return {disc.dofs().pc_dof(tri[0]), disc.dofs().pc_dof(tri[1]), disc.dofs().pc_dof(tri[2]),
          disc.dofs().p0_dof(t)};
}

std::vector<Index> to_vector(const std::array<Index, mtw_local_dim>& a) {
  return {a.begin(), a.end()};
}

// Traces of all pressure basis functions touching an edge, tabulated at the
// edge quadrature points. Values on the edge come from the edge parameter
// (not from barycentric evaluation), so the two sides of a continuous hat
// produce identical traces and their jump is exactly zero.
struct EdgeTrace {
  std::vector<Index> dofs;
  std::vector<char> is_cell;
  std::vector<double> w;  // physical weights
  Eigen::MatrixXd jump;   // nq x nd: scalar jump q+ - q- (boundary: q)
  Eigen::MatrixXd flux;   // nq x nd: {kappa grad q^c} . n
  double h = 0.0;
  double kappa_avg = 0.0;
  bool boundary = false;
  bool gamma_p = false;
};

EdgeTrace edge_trace(const Discretization& disc, const ModelParams& params, Index e) {
  const Mesh& mesh = disc.mesh();
  const EdgeGeometry g = mesh.edge_geometry(e);
  const LineRule rule = edge_quadrature(assembly_degree);
  const Index nq = static_cast<Index>(rule.size());

  EdgeTrace tr;
  tr.h = g.length;
  tr.boundary = mesh.is_boundary_edge(e);
  tr.gamma_p = tr.boundary && disc.tags().is_gamma_p(e);
  for (double w : rule.weights) tr.w.push_back(w * g.length);

  constexpr int max_dofs = 8;
  tr.jump = Eigen::MatrixXd::Zero(nq, max_dofs);
  tr.flux = Eigen::MatrixXd::Zero(nq, max_dofs);
  const auto slot = [&](Index dof, bool cell) {
    for (std::size_t k = 0; k < tr.dofs.size(); ++k) {
      if (tr.dofs[k] == dof) return static_cast<Index>(k);
    }
    tr.dofs.push_back(dof);
    tr.is_cell.push_back(cell ? 1 : 0);
    return static_cast<Index>(tr.dofs.size() - 1);
  };

  const int nsides = tr.boundary ? 1 : 2;
  const double avg = tr.boundary ? 1.0 : 0.5;
  double kappa_sum = 0.0;
  for (int side = 0; side < nsides; ++side) {
    const Index t = mesh.edge_to_tris[e][side];
    const double sign = side == 0 ? 1.0 : -1.0;
    const EgValues eg = eg_eval(mesh.corners(t), g.midpoint);
    // Both sides use the global normal of the edge.
    kappa_sum += params.kappa_normal(g.normal);
    for (int i = 0; i < 3; ++i) {
      const Index v = mesh.triangles[t][i];
      const Index k = slot(disc.dofs().pc_dof(v), false);
      const double fl = avg * (params.kappa * eg.hat_grad[i]).dot(g.normal);
      for (Index q = 0; q < nq; ++q) {
        const double s = rule.points[q];
        const double trace = v == mesh.edges[e][0] ? 1.0 - s : (v == mesh.edges[e][1] ? s : 0.0);
        tr.jump(q, k) += sign * trace;
        tr.flux(q, k) += fl;
      }
    }
    const Index k = slot(disc.dofs().p0_dof(t), true);
    for (Index q = 0; q < nq; ++q) tr.jump(q, k) += sign;
  }
  tr.kappa_avg = kappa_sum / nsides;
  const Index nd = static_cast<Index>(tr.dofs.size());
  tr.jump.conservativeResize(nq, nd);
  tr.flux.conservativeResize(nq, nd);
  return tr;
}

// scale * sum_q w_q a(q,i) a(q,j) restricted to dofs selected by `mask_*`.
Eigen::MatrixXd edge_gram(const EdgeTrace& tr, double scale, int mask) {
  // mask: 0 = all dofs, 1 = vertex dofs only, 2 = cell dofs only
  const Index nd = static_cast<Index>(tr.dofs.size());
  Eigen::MatrixXd a = tr.jump;
  for (Index d = 0; d < nd; ++d) {
    const bool cell = tr.is_cell[d] != 0;
    if ((mask == 1 && cell) || (mask == 2 && !cell)) a.col(d).setZero();
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nd, nd);
  for (Index i = 0; i < nd; ++i) {
    for (Index j = i; j < nd; ++j) {
      double sum = 0.0;
      for (Index q = 0; q < a.rows(); ++q) sum += tr.w[q] * a(q, i) * a(q, j);
      m(i, j) = scale * sum;
    }
  }
  mirror_upper(m);
  return m;
}

Eigen::MatrixXd edge_consistency(const EdgeTrace& tr) {
  const Index nd = static_cast<Index>(tr.dofs.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nd, nd);
  for (Index i = 0; i < nd; ++i) {
    for (Index j = i; j < nd; ++j) {
      double sum = 0.0;
      for (Index q = 0; q < tr.jump.rows(); ++q) {
        sum += tr.w[q] * (tr.flux(q, i) * tr.jump(q, j) + tr.jump(q, i) * tr.flux(q, j));
      }
      m(i, j) = -sum;
    }
  }
  mirror_upper(m);
  return m;
}

template <class EdgeKernel>
SparseMatrix assemble_edges(const Discretization& disc, const ModelParams& params, Exec exec,
                            EdgeKernel&& kernel) {
  const Index np = disc.dofs().num_p();
  return assemble_blocks(np, np, disc.mesh().num_edges(), exec, [&](Index e) {
    const EdgeTrace tr = edge_trace(disc, params, e);
    LocalBlock b;
    b.rows = tr.dofs;
    b.cols = tr.dofs;
    b.values = kernel(tr);
    if (b.values.size() == 0) {
      b.rows.clear();
      b.cols.clear();
    }
    return b;
  });
}

}  // namespace

CellQuadrature cell_quadrature(const Mesh& mesh, Index t) {
  const QuadratureRule& rule = triangle_quadrature(assembly_degree);
  const auto c = mesh.corners(t);
  const double scale = 2.0 * mesh.area(t);
  CellQuadrature q;
  q.points.reserve(rule.size());
  q.weights.reserve(rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const auto& b = rule.points[k];
    q.points.push_back(b[0] * c[0] + b[1] * c[1] + b[2] * c[2]);
    q.weights.push_back(rule.weights[k] * scale);
  }
  return q;
}

SparseMatrix assemble_a_u(const Discretization& disc, const ModelParams& params, Exec exec) {
  const double two_mu = 2.0 * params.mu();
  const double lambda = params.lambda();
  const Index nu = disc.dofs().num_u();
  return assemble_blocks(nu, nu, disc.mesh().num_triangles(), exec, [&](Index t) {
    const CellQuadrature quad = cell_quadrature(disc.mesh(), t);
    LocalBlock b;
    b.rows = to_vector(disc.dofs().cell_u_dofs(disc.mesh(), t));
    b.cols = b.rows;
    b.values = Eigen::MatrixXd::Zero(mtw_local_dim, mtw_local_dim);
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const MtwValues v = disc.basis(t).eval(quad.points[q]);
      std::array<Jacobian, mtw_local_dim> eps;
      std::array<double, mtw_local_dim> div;
      for (int k = 0; k < mtw_local_dim; ++k) {
        eps[k] = v.sym_grad(k);
        div[k] = v.div(k);
      }
      for (int i = 0; i < mtw_local_dim; ++i) {
        for (int j = i; j < mtw_local_dim; ++j) {
          b.values(i, j) += quad.weights[q] *
                            (two_mu * (eps[i].array() * eps[j].array()).sum() + lambda * div[i] * div[j]);
        }
      }
    }
    mirror_upper(b.values);
    return b;
  });
}

SparseMatrix assemble_coupling(const Discretization& disc, const ModelParams& params, Exec exec) {
  const Index nu = disc.dofs().num_u();
  const Index np = disc.dofs().num_p();
  return assemble_blocks(np, nu, disc.mesh().num_triangles(), exec, [&](Index t) {
    const CellQuadrature quad = cell_quadrature(disc.mesh(), t);
    const auto corners = disc.mesh().corners(t);
    LocalBlock b;
    b.rows = cell_p_dofs(disc, t);
    b.cols = to_vector(disc.dofs().cell_u_dofs(disc.mesh(), t));
    b.values = Eigen::MatrixXd::Zero(4, mtw_local_dim);
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const MtwValues v = disc.basis(t).eval(quad.points[q]);
      const EgValues eg = eg_eval(corners, quad.points[q]);
      const std::array<double, 4> phi{eg.hat[0], eg.hat[1], eg.hat[2], eg.cell};
      for (int a = 0; a < 4; ++a) {
        for (int k = 0; k < mtw_local_dim; ++k) {
          b.values(a, k) -= quad.weights[q] * params.alpha * phi[a] * v.div(k);
        }
      }
    }
    return b;
  });
}

SparseMatrix assemble_pressure_mass(const Discretization& disc, const ScalarField& weight,
                                    Exec exec) {
  const Index np = disc.dofs().num_p();
  return assemble_blocks(np, np, disc.mesh().num_triangles(), exec, [&](Index t) {
    const CellQuadrature quad = cell_quadrature(disc.mesh(), t);
    const auto corners = disc.mesh().corners(t);
    LocalBlock b;
    b.rows = cell_p_dofs(disc, t);
    b.cols = b.rows;
    b.values = Eigen::MatrixXd::Zero(4, 4);
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const EgValues eg = eg_eval(corners, quad.points[q]);
      const std::array<double, 4> phi{eg.hat[0], eg.hat[1], eg.hat[2], eg.cell};
      const double w = quad.weights[q] * weight(quad.points[q]);
      for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) b.values(i, j) += w * phi[i] * phi[j];
      }
    }
    mirror_upper(b.values);
    return b;
  });
}

SparseMatrix assemble_mass_s0(const Discretization& disc, const ModelParams& params, Exec exec) {
  return assemble_pressure_mass(disc, [&](const Point& x) { return params.storage(x); }, exec);
}

PressureForms assemble_a_p_parts(const Discretization& disc, const ModelParams& params,
                                 Exec exec) {
  const Index np = disc.dofs().num_p();
  PressureForms f;
  f.stiffness = assemble_blocks(np, np, disc.mesh().num_triangles(), exec, [&](Index t) {
    const EgValues eg = eg_eval(disc.mesh().corners(t), disc.mesh().corners(t)[0]);
    const double area = disc.mesh().area(t);
    LocalBlock b;
    const auto dofs = cell_p_dofs(disc, t);
    b.rows.assign(dofs.begin(), dofs.begin() + 3);
    b.cols = b.rows;
    b.values = Eigen::MatrixXd::Zero(3, 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        b.values(i, j) = area * eg.hat_grad[i].dot(params.kappa * eg.hat_grad[j]);
      }
    }
    mirror_upper(b.values);
    return b;
  });
  const double gamma = params.gamma;
  const double beta = params.beta;
  f.consistency = assemble_edges(disc, params, exec, [&](const EdgeTrace& tr) {
    if (tr.boundary && !tr.gamma_p) return Eigen::MatrixXd();
    return edge_consistency(tr);
  });
  f.interior_penalty = assemble_edges(disc, params, exec, [&](const EdgeTrace& tr) {
    if (tr.boundary) return Eigen::MatrixXd();
    return edge_gram(tr, gamma * tr.kappa_avg * std::pow(tr.h, -1.0 - beta), 2);
  });
  f.boundary_penalty = assemble_edges(disc, params, exec, [&](const EdgeTrace& tr) {
    if (!tr.gamma_p) return Eigen::MatrixXd();
    return edge_gram(tr, gamma * tr.kappa_avg / tr.h, 0);
  });
  return f;
}

SparseMatrix assemble_a_p(const Discretization& disc, const ModelParams& params, Exec exec) {
  const PressureForms f = assemble_a_p_parts(disc, params, exec);
  return f.stiffness.add(f.consistency).add(f.interior_penalty).add(f.boundary_penalty);
}

SparseMatrix assemble_stabilization(const Discretization& disc, const ModelParams& params,
                                    Exec exec) {
  const double weight = params.gamma * (1.0 / params.lambda() + params.C1);
  return assemble_edges(disc, params, exec, [&](const EdgeTrace& tr) {
    if (tr.boundary) return Eigen::MatrixXd();
    return edge_gram(tr, weight / tr.h, 0);
  });
}

SparseMatrix assemble_h_norm(const Discretization& disc, const ModelParams& params, Exec exec) {
  const PressureForms parts = assemble_a_p_parts(disc, params, exec);
  const double gamma = params.gamma;
  const double beta = params.beta;
  const SparseMatrix jumps = assemble_edges(disc, params, exec, [&](const EdgeTrace& tr) {
    if (tr.boundary) {
      if (!tr.gamma_p) return Eigen::MatrixXd();
      const double s = gamma * tr.kappa_avg / tr.h;
      return Eigen::MatrixXd(edge_gram(tr, s, 1) + edge_gram(tr, s, 2));
    }
    return edge_gram(tr, gamma * tr.kappa_avg * std::pow(tr.h, -1.0 - beta), 0);
  });
  return parts.stiffness.add(jumps);
}

AssembledForms assemble_forms(const Discretization& disc, const ModelParams& params, Exec exec) {
  params.validate();
  AssembledForms f;
  f.num_pc = disc.dofs().num_pc();
  f.a_u = assemble_a_u(disc, params, exec);
  f.b_div = assemble_coupling(disc, params, exec);
  f.mass = assemble_pressure_mass(disc, [](const Point&) { return 1.0; }, exec);
  f.mass_s0 = assemble_mass_s0(disc, params, exec);
  f.stab = assemble_stabilization(disc, params, exec);
  f.a_p_parts = assemble_a_p_parts(disc, params, exec);
  const PressureForms& p = f.a_p_parts;
  f.a_p = p.stiffness.add(p.consistency).add(p.interior_penalty).add(p.boundary_penalty);
  f.h_norm = assemble_h_norm(disc, params, exec);
  return f;
}

SparseMatrix assemble_system(const AssembledForms& forms, const ModelParams& params) {
  const Index nu = forms.a_u.rows();
  const Index np = forms.a_p.rows();
  if (forms.b_div.rows() != np || forms.b_div.cols() != nu || forms.stab.rows() != np ||
      forms.mass_s0.rows() != np) {
    throw InternalError("assemble_system: inconsistent block dimensions");
  }
  const SparseMatrix pressure =
      forms.mass_s0.add(forms.stab).add(forms.a_p, 0.5 * params.dt).scaled(-1.0);
  return block_matrix(forms.a_u, forms.b_div.transpose(), forms.b_div, pressure);
}

SparseMatrix pressure_preconditioner(const AssembledForms& forms, const ModelParams& params) {
  // (s0 + 1/lambda) mass + S + dt/2 ||.||_h^2 with the c-0 coupling dropped.
  const SparseMatrix full = forms.mass_s0.add(forms.mass, 1.0 / params.lambda())
                                .add(forms.stab)
                                .add(forms.h_norm, 0.5 * params.dt);
  const Index np = full.rows();
  const Index nc = forms.num_pc;
  const SparseMatrix zero_c0(nc, np - nc);
  const SparseMatrix zero_0c(np - nc, nc);
  return block_matrix(full.block(0, 0, nc, nc), zero_c0, zero_0c,
                      full.block(nc, nc, np - nc, np - nc));
}

PreconditionerBlocks assemble_preconditioner(const AssembledForms& forms,
                                             const ModelParams& params) {
  const SparseMatrix full = forms.mass_s0.add(forms.mass, 1.0 / params.lambda())
                                .add(forms.stab)
                                .add(forms.h_norm, 0.5 * params.dt);
  const Index np = full.rows();
  const Index nc = forms.num_pc;
  return {forms.a_u, full.block(0, 0, nc, nc), full.block(nc, nc, np - nc, np - nc)};
}

Vector assemble_load_f(const Discretization& disc, const VectorField& f) {
  Vector out = Vector::Zero(disc.dofs().num_u());
  for (Index t = 0; t < disc.mesh().num_triangles(); ++t) {
    const CellQuadrature quad = cell_quadrature(disc.mesh(), t);
    const auto dofs = disc.dofs().cell_u_dofs(disc.mesh(), t);
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const MtwValues v = disc.basis(t).eval(quad.points[q]);
      const Point fx = f(quad.points[q]);
      for (int k = 0; k < mtw_local_dim; ++k) {
        if (dofs[k] >= 0) out[dofs[k]] += quad.weights[q] * fx.dot(v.value[k]);
      }
    }
  }
  return out;
}

Vector assemble_load_g(const Discretization& disc, const ScalarField& g) {
  Vector out = Vector::Zero(disc.dofs().num_p());
  for (Index t = 0; t < disc.mesh().num_triangles(); ++t) {
    const CellQuadrature quad = cell_quadrature(disc.mesh(), t);
    const auto corners = disc.mesh().corners(t);
    const auto dofs = cell_p_dofs(disc, t);
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const EgValues eg = eg_eval(corners, quad.points[q]);
      const double gx = quad.weights[q] * g(quad.points[q]);
      for (int i = 0; i < 3; ++i) out[dofs[i]] += gx * eg.hat[i];
      out[dofs[3]] += gx;
    }
  }
  return out;
}

PressureValue eval_p(const Discretization& disc, const Vector& p, Index t, const Point& x) {
  const auto& tri = disc.mesh().triangles[t];
  const EgValues eg = eg_eval(disc.mesh().corners(t), x);
  PressureValue out{p[disc.dofs().p0_dof(t)], Point::Zero()};
  for (int i = 0; i < 3; ++i) {
    const double c = p[disc.dofs().pc_dof(tri[i])];
    out.value += c * eg.hat[i];
    out.grad += c * eg.hat_grad[i];
  }
  return out;
}

HNormTerms evaluate_h_norm(const Discretization& disc, const ModelParams& params, const Vector& q) {
  const Mesh& mesh = disc.mesh();
  const Index nc = disc.dofs().num_pc();
  Vector qc = q, q0 = q;
  qc.tail(q.size() - nc).setZero();
  q0.head(nc).setZero();

  HNormTerms terms;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const Point g = eval_p(disc, qc, t, mesh.corners(t)[0]).grad;
    terms.stiffness += mesh.area(t) * g.dot(params.kappa * g);
  }
  const LineRule rule = edge_quadrature(assembly_degree);
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const EdgeGeometry g = mesh.edge_geometry(e);
    const double kappa_avg = params.kappa_normal(g.normal);
    const auto& tris = mesh.edge_to_tris[e];
    double jump2 = 0.0, c2 = 0.0, z2 = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const Point x = g.at(rule.points[k]);
      const double w = rule.weights[k] * g.length;
      if (mesh.is_boundary_edge(e)) {
        const double vc = eval_p(disc, qc, tris[0], x).value;
        const double v0 = eval_p(disc, q0, tris[0], x).value;
        c2 += w * vc * vc;
        z2 += w * v0 * v0;
      } else {
        const double j = eval_p(disc, q, tris[0], x).value - eval_p(disc, q, tris[1], x).value;
        jump2 += w * j * j;
      }
    }
    if (mesh.is_boundary_edge(e)) {
      if (!disc.tags().is_gamma_p(e)) continue;
      terms.boundary_c += params.gamma * kappa_avg / g.length * c2;
      terms.boundary_0 += params.gamma * kappa_avg / g.length * z2;
    } else {
      terms.interior_jump += params.gamma * kappa_avg * std::pow(g.length, -1.0 - params.beta) * jump2;
    }
  }
  return terms;
}

}  // namespace biot
