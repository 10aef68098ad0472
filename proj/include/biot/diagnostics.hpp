#pragma once

#include "biot/forms.hpp"

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace biot {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct DiagnosticReport {
  std::vector<CheckResult> checks;
  bool passed() const;
  const CheckResult* find(const std::string& name) const;
  void print(std::ostream& os) const;
};

using BasisLookup = std::function<const MtwLocalBasis&(Index)>;

/// Basis of triangle t built with the frame of its local edge `local_edge`
/// reversed. Used as a broken sign convention in negative controls.
MtwLocalBasis flipped_edge_basis(const Discretization& disc, Index t, int local_edge);

/// |3 (div v, q^c) - (div v, I_h q^c)| / max(|.|) over `pairs` random pairs,
/// where I_h q^c sums the vertex values times their patch indicators.
CheckResult lemma_identity_check(const Discretization& disc, const AssembledForms& forms,
                                 const ModelParams& params, std::uint64_t seed, int pairs = 50);
/// Deviation of div v from its cell value at the quadrature points.
CheckResult divergence_range_check(const Discretization& disc, const Vector& u);
/// Pointwise jump of v.n across interior edges; `basis` overrides the
/// per-triangle basis when set.
CheckResult normal_continuity_check(const Discretization& disc, const Vector& u,
                                    const BasisLookup& basis = {});
/// Jump of the edge mean of v.t across interior edges.
CheckResult tangential_mean_check(const Discretization& disc, const Vector& u);
/// S restricted to the vertex block is identically zero.
CheckResult stabilization_kernel_check(const AssembledForms& forms, std::uint64_t seed);
CheckResult symmetry_check(const std::string& name, const SparseMatrix& m);
/// Assembled ||q||_h^2 against the term-by-term quadrature route.
CheckResult h_norm_consistency_check(const Discretization& disc, const AssembledForms& forms,
                                     const ModelParams& params, std::uint64_t seed);

/// Smallest Rayleigh quotient a_p(q,q)/||q||_h^2 over the span of
/// min(`count`, dim) random vectors with mean-zero cell part. Passes when
/// it is at least `threshold`.
CheckResult coercivity_check(const Discretization& disc, const AssembledForms& forms,
                             std::uint64_t seed, int count = 200, double threshold = 0.1);

/// All checks for one discretization; the dense coercivity step is optional.
DiagnosticReport structural_diagnostics(const Discretization& disc, const ModelParams& params,
                                        std::uint64_t seed, bool with_coercivity = true);

/// Smallest |mu| of B x = mu P x on the space whose cell pressure part has
/// zero mean (the constants are represented twice in the raw DOFs). Dense;
/// throws ConfigError when the mesh has more than 8 cells per side.
struct InfSupResult {
  double min_abs = 0.0;
  double max_abs = 0.0;
  Index dimension = 0;
};
InfSupResult infsup_diagnostic(const Discretization& disc, const ModelParams& params,
                               Index max_n = 8);

}  // namespace biot
