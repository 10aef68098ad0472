#pragma once

#include "biot/elements.hpp"
#include "biot/params.hpp"

#include <memory>
#include <random>

namespace biot::test {

// Tags with no displacement constraint (not reachable through
// classify_boundary) and Gamma_p on the whole boundary.
inline BoundaryTags free_tags(const Mesh& mesh) {
  BoundaryTags tags;
  tags.displacement_dirichlet.assign(mesh.num_edges(), 0);
  tags.pressure_dirichlet.assign(mesh.num_edges(), 0);
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    tags.pressure_dirichlet[e] = mesh.is_boundary_edge(e) ? 1 : 0;
  }
  return tags;
}

inline std::shared_ptr<const Discretization> make_disc(Index n, const char* gamma_d = "left",
                                                       const char* gamma_p = "all",
                                                       Exec exec = Exec::parallel) {
  Mesh mesh = build_structured_mesh(n);
  BoundaryTags tags =
      classify_boundary(mesh, BoundaryRegion::parse(gamma_d), BoundaryRegion::parse(gamma_p));
  return std::make_shared<const Discretization>(std::move(mesh), std::move(tags), exec);
}

inline std::shared_ptr<const Discretization> make_free_disc(Index n) {
  Mesh mesh = build_structured_mesh(n);
  BoundaryTags tags = free_tags(mesh);
  return std::make_shared<const Discretization>(std::move(mesh), std::move(tags));
}

// mu = 1/2, lambda = 1, the remaining parameters at their defaults.
inline ModelParams hand_params() {
  ModelParams p = ModelParams::from_lame(0.5, 1.0);
  p.gamma = 10.0;
  p.beta = 1.0;
  p.C1 = 1.0;
  p.s0 = 0.0;
  p.dt = 0.1;
  return p;
}

inline Vector random_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

}  // namespace biot::test
