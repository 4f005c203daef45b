#include <benchmark/benchmark.h>

#include <vector>

#include "magpos/lattice.hpp"
#include "magpos/rng.hpp"
#include "magpos/scenarios.hpp"
#include "magpos/xor_topology.hpp"

using namespace magpos;

namespace {

std::vector<NodeId> random_ids(std::size_t n) {
  Rng rng(42);
  std::vector<NodeId> ids(n);
  for (auto& id : ids) id = rng.node_id();
  return ids;
}

void BM_Topology(benchmark::State& st) {
  const auto ids = random_ids(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(build_topology(ids, 16));
}

void BM_TopologySerial(benchmark::State& st) {
  const auto ids = random_ids(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(build_topology_serial(ids, 16));
}

void BM_GridEnergy(benchmark::State& st) {
  const auto side = static_cast<std::size_t>(st.range(0));
  const auto g = lattice::random_grid(side, side, 1);
  for (auto _ : st) benchmark::DoNotOptimize(lattice::grid_energy(g));
}

void BM_GridEnergySerial(benchmark::State& st) {
  const auto side = static_cast<std::size_t>(st.range(0));
  const auto g = lattice::random_grid(side, side, 1);
  for (auto _ : st) benchmark::DoNotOptimize(lattice::grid_energy_serial(g));
}

ScenarioConfig sweep_base() {
  ScenarioConfig cfg;
  cfg.n_nodes = 256;
  cfg.k = 16;
  cfg.forks = {"honest", "attacker"};
  cfg.stake = ParetoStake{100.0, 1.5};
  cfg.assignment = AdversaryAssignment{0.4, std::nullopt, "attacker", "honest"};
  return cfg;
}

void BM_Sweep(benchmark::State& st) {
  const auto cfg = sweep_base();
  for (auto _ : st) benchmark::DoNotOptimize(run_sweep(cfg, SweepParam::StakeFraction, {0.3, 0.45, 0.55, 0.7}, 8));
}

void BM_SweepSerial(benchmark::State& st) {
  const auto cfg = sweep_base();
  for (auto _ : st)
    benchmark::DoNotOptimize(run_sweep_serial(cfg, SweepParam::StakeFraction, {0.3, 0.45, 0.55, 0.7}, 8));
}

}  // namespace

BENCHMARK(BM_Topology)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TopologySerial)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridEnergy)->Arg(64)->Arg(512)->Arg(2048)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GridEnergySerial)->Arg(64)->Arg(512)->Arg(2048)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
