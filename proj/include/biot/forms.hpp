#pragma once

#include "biot/elements.hpp"
#include "biot/params.hpp"
#include "biot/sparse.hpp"

namespace biot {

/// Pieces of the pressure form a_p, kept separately for diagnostics.
/// a_p = stiffness + consistency + interior_penalty + boundary_penalty.
struct PressureForms {
  SparseMatrix stiffness;         // (kappa grad q^c, grad q~^c)
  SparseMatrix consistency;       // -<{kappa grad q^c}, [q~]> - <[q], {kappa grad q~^c}>
  SparseMatrix interior_penalty;  // gamma kappa_avg h^{-1-beta} <[q^0], [q~^0]> on interior edges
  SparseMatrix boundary_penalty;  // gamma kappa_avg h^{-1} <q, q~> on Gamma_p edges
};

/// All matrices of the discretization on the unconstrained DOFs.
/// Pressure matrices use the ordering (vertex block, cell block).
struct AssembledForms {
  SparseMatrix a_u;       // nu x nu
  SparseMatrix b_div;     // np x nu, entries -(alpha q, div v)
  SparseMatrix mass;      // np x np, unweighted L2 mass
  SparseMatrix mass_s0;   // np x np, (s0 q, q~)
  SparseMatrix stab;      // np x np, S
  SparseMatrix a_p;       // np x np
  SparseMatrix h_norm;    // np x np, Gram matrix of ||q||_h^2
  PressureForms a_p_parts;
  Index num_pc = 0;       // size of the vertex block of the pressure
};

SparseMatrix assemble_a_u(const Discretization& disc, const ModelParams& params,
                          Exec exec = Exec::parallel);
SparseMatrix assemble_coupling(const Discretization& disc, const ModelParams& params,
                               Exec exec = Exec::parallel);
/// Pressure mass weighted by w(x); the c-0 cross terms are included.
SparseMatrix assemble_pressure_mass(const Discretization& disc, const ScalarField& weight,
                                    Exec exec = Exec::parallel);
SparseMatrix assemble_mass_s0(const Discretization& disc, const ModelParams& params,
                              Exec exec = Exec::parallel);
PressureForms assemble_a_p_parts(const Discretization& disc, const ModelParams& params,
                                 Exec exec = Exec::parallel);
SparseMatrix assemble_a_p(const Discretization& disc, const ModelParams& params,
                          Exec exec = Exec::parallel);
SparseMatrix assemble_stabilization(const Discretization& disc, const ModelParams& params,
                                    Exec exec = Exec::parallel);
/// Gram matrix of ||q||_h^2 (stiffness, interior jump penalty and Gamma_p
/// boundary penalties on q^c and q^0 separately).
SparseMatrix assemble_h_norm(const Discretization& disc, const ModelParams& params,
                             Exec exec = Exec::parallel);

AssembledForms assemble_forms(const Discretization& disc, const ModelParams& params,
                              Exec exec = Exec::parallel);

/// Time-discrete system matrix
/// [[A_u, B^T], [B, -(M_s0 + S + dt/2 A_p)]].
SparseMatrix assemble_system(const AssembledForms& forms, const ModelParams& params);

/// SPD blocks of the block-diagonal preconditioner.
struct PreconditionerBlocks {
  SparseMatrix p_v;   // a_u
  SparseMatrix p_qc;  // vertex block
  SparseMatrix p_q0;  // cell block
};

/// P_Q is the Gram matrix of the weighted pressure norm
/// (s0 + 1/lambda) mass + S + dt/2 ||.||_h^2 with the c-0 coupling removed.
PreconditionerBlocks assemble_preconditioner(const AssembledForms& forms,
                                             const ModelParams& params);
/// Full pressure preconditioner matrix (both blocks, zero cross block).
SparseMatrix pressure_preconditioner(const AssembledForms& forms, const ModelParams& params);

/// (f, v) for every unconstrained MTW basis function.
Vector assemble_load_f(const Discretization& disc, const VectorField& f);
/// (g, q) for every pressure basis function (hats, then cell indicators).
Vector assemble_load_g(const Discretization& disc, const ScalarField& g);

/// Term-by-term quadrature evaluation of ||q||_h^2 for a coefficient vector,
/// independent of the matrix assembly.
struct HNormTerms {
  double stiffness = 0.0;
  double interior_jump = 0.0;
  double boundary_c = 0.0;
  double boundary_0 = 0.0;
  double total() const { return stiffness + interior_jump + boundary_c + boundary_0; }
};
HNormTerms evaluate_h_norm(const Discretization& disc, const ModelParams& params, const Vector& q);

/// Degree-6 quadrature points and weights mapped to triangle t.
struct CellQuadrature {
  std::vector<Point> points;
  std::vector<double> weights;
};
CellQuadrature cell_quadrature(const Mesh& mesh, Index t);

/// Value and gradient of a pressure coefficient vector on triangle t.
struct PressureValue {
  double value;
  Point grad;
};
PressureValue eval_p(const Discretization& disc, const Vector& p, Index t, const Point& x);

}  // namespace biot
