#include <benchmark/benchmark.h>

#include <map>

#include "vod/analysis.hpp"
#include "vod/catalog.hpp"
#include "vod/enumerate.hpp"
#include "vod/secondary.hpp"

namespace {

struct Instance {
  vod::Family family;
  std::size_t k;
  int p;
};

// Indexed by the benchmark argument.
const Instance kInstances[] = {
    {vod::Family::kMem, 4, 0}, {vod::Family::kInt, 6, 0}, {vod::Family::kSbw, 6, 0},
    {vod::Family::kCbw, 4, 0}, {vod::Family::kQwoi, 3, 0},
};

const vod::CatalogModel& model(std::size_t i) {
  static std::map<std::size_t, vod::CatalogModel> cache;
  auto it = cache.find(i);
  if (it == cache.end()) it = cache.emplace(i, vod::build(kInstances[i].family, kInstances[i].k, kInstances[i].p)).first;
  return it->second;
}

const vod::VodCatalog& catalog(std::size_t i) {
  static std::map<std::size_t, vod::VodCatalog> cache;
  auto it = cache.find(i);
  if (it == cache.end()) it = cache.emplace(i, vod::analyze(model(i))).first;
  return it->second;
}

void label(benchmark::State& state, std::size_t i) { state.SetLabel(model(i).problem.name); }

void BM_HRepresentation(benchmark::State& state) {
  const auto& m = model(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(vod::build_h_representation(m.problem, m.maximal_design));
  label(state, state.range(0));
}
BENCHMARK(BM_HRepresentation)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_DoubleDescription(benchmark::State& state) {
  const auto& poly = catalog(state.range(0)).polytope;
  vod::EnumOptions opts;
  opts.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(vod::enumerate_vertices(poly, opts));
  label(state, state.range(0));
}
BENCHMARK(BM_DoubleDescription)
    ->ArgsProduct({{0, 1, 2, 3, 4}, {1, 4}})
    ->Unit(benchmark::kMillisecond);

void BM_SubsetOracle(benchmark::State& state) {
  const auto& poly = catalog(state.range(0)).polytope;
  for (auto _ : state) benchmark::DoNotOptimize(vod::oracle_enumerate(poly));
  label(state, state.range(0));
}
BENCHMARK(BM_SubsetOracle)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_Orbits(benchmark::State& state) {
  const auto i = static_cast<std::size_t>(state.range(0));
  const auto& cat = catalog(i);
  for (auto _ : state) {
    benchmark::DoNotOptimize(vod::classify_orbits(cat.polytope, cat.vertices, model(i).symmetry_generators, 1));
  }
  label(state, i);
}
BENCHMARK(BM_Orbits)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_FrankWolfe(benchmark::State& state) {
  const auto& cat = catalog(0);
  const auto sq = vod::norm_objective(2, true);
  vod::OptimizeConfig cfg;
  cfg.parametrization = static_cast<vod::Parametrization>(state.range(0));
  cfg.start = cat.vertices.vertices.front();
  for (auto _ : state) benchmark::DoNotOptimize(vod::optimize(cat, *sq, cfg));
  state.SetLabel(std::string(vod::parametrization_name(*cfg.parametrization)));
}
BENCHMARK(BM_FrankWolfe)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
