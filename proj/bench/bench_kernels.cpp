// Serial reference path against the OpenMP kernels.
#include "biot/forms.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <memory>

using namespace biot;

namespace {

const Discretization& disc_for(Index n) {
  static std::map<Index, std::unique_ptr<Discretization>> cache;
  auto& d = cache[n];
  if (!d) {
    Mesh mesh = build_structured_mesh(n);
    BoundaryTags tags = classify_boundary(mesh, BoundaryRegion::parse("left"), BoundaryRegion::all());
    d = std::make_unique<Discretization>(std::move(mesh), std::move(tags));
  }
  return *d;
}

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::parallel : Exec::serial; }

void BM_AssembleForms(benchmark::State& state) {
  const Discretization& disc = disc_for(state.range(0));
  const ModelParams params;
  for (auto _ : state) {
    AssembledForms forms = assemble_forms(disc, params, exec_of(state));
    benchmark::DoNotOptimize(forms.a_u.values().data());
  }
  state.SetLabel(state.range(1) ? "parallel" : "serial");
}

void BM_SystemMatvec(benchmark::State& state) {
  const Discretization& disc = disc_for(state.range(0));
  const ModelParams params;
  const AssembledForms forms = assemble_forms(disc, params);
  const SparseMatrix sys = assemble_system(forms, params);
  const Vector x = Vector::Ones(sys.cols());
  Vector y(sys.rows());
  for (auto _ : state) {
    sys.multiply(x, y, exec_of(state));
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * sys.nonzeros());
  state.SetLabel(state.range(1) ? "parallel" : "serial");
}

}  // namespace

BENCHMARK(BM_AssembleForms)->ArgsProduct({{16, 32, 64}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SystemMatvec)->ArgsProduct({{32, 64, 128}, {0, 1}})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
