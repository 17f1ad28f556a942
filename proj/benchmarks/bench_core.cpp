#include <benchmark/benchmark.h>

#include "qent/entangle.hpp"
#include "qent/excitations.hpp"
#include "qent/model.hpp"
#include "qent/replica.hpp"

namespace {

struct Setup {
  qent::LatticeModel model;
  qent::SingleParticleModes modes;
  qent::StateVector vacuum;
  qent::StateRecipe recipe;
};

Setup make_setup(int sites) {
  qent::LatticeModel model;
  model.sites = sites;
  model.species = 2;
  qent::SingleParticleModes modes = qent::model_modes(model);
  qent::StateVector vacuum = qent::build_vacuum(model, modes, qent::model_basis(model), {}, nullptr);
  Setup s{model, modes, vacuum, {}};
  auto packet = [&](const char* name, double center, int species) {
    qent::PacketProfile p;
    p.name = name;
    p.center = center;
    p.species = species;
    return qent::make_packet(p, s.model, s.modes);
  };
  const double far = sites - 2;
  s.recipe.terms = {{1.0, {packet("Au", 1, 0), packet("Bd", far, 1)}},
                    {1.0, {packet("Ad", 1, 1), packet("Bu", far, 0)}}};
  return s;
}

void BM_BuildState(benchmark::State& state) {
  const Setup s = make_setup(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qent::build_state(s.recipe, s.vacuum));
}
BENCHMARK(BM_BuildState)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_PartialTrace(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Setup s = make_setup(n);
  const qent::BuiltState built = qent::build_state(s.recipe, s.vacuum);
  std::vector<int> half;
  for (int x = 0; x < n / 2; ++x) half.push_back(x);
  const qent::Region region(half, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(qent::reduced_density_matrix(built.state, region));
}
BENCHMARK(BM_PartialTrace)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ReplicaTrace(benchmark::State& state) {
  const Setup s = make_setup(6);
  const qent::BuiltState built = qent::build_state(s.recipe, s.vacuum);
  const qent::Region region({0, 1, 2}, 6, 2);
  const qent::DensityMatrix rho = qent::reduced_density_matrix(built.state, region);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qent::replica_trace(rho, n));
}
BENCHMARK(BM_ReplicaTrace)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

void BM_Spectrum(benchmark::State& state) {
  const Setup s = make_setup(8);
  const qent::BuiltState built = qent::build_state(s.recipe, s.vacuum);
  const qent::Region region({0, 1, 2, 3}, 8, 2);
  const qent::DensityMatrix rho = qent::reduced_density_matrix(built.state, region);
  for (auto _ : state) benchmark::DoNotOptimize(qent::spectrum(rho));
}
BENCHMARK(BM_Spectrum)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
