#include <benchmark/benchmark.h>

#include "oam/qkd.hpp"
#include "oam/walk.hpp"

using namespace oam;

namespace {

void BM_ProtocolTrials(benchmark::State& state) {
  ProtocolConfig config;
  config.trials = static_cast<std::uint64_t>(state.range(0));
  config.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_protocol(config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ProtocolTrials)->Arg(1000)->Arg(10000);

void BM_ProtocolWithEve(benchmark::State& state) {
  ProtocolConfig config;
  config.trials = 5000;
  config.seed = 2;
  config.eve = {EveKind::intercept_resend_random, 0.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_protocol(config));
  }
}
BENCHMARK(BM_ProtocolWithEve);

void BM_WalkCoherentStep(benchmark::State& state) {
  const WalkStage stage = build_walk_stage(static_cast<int>(state.range(0)));
  WalkState ws = walk_start(stage, static_cast<int>(state.range(0)) / 2);
  for (auto _ : state) {
    ws = walk_step(ws, stage);
    benchmark::DoNotOptimize(ws);
  }
}
BENCHMARK(BM_WalkCoherentStep)->Arg(64)->Arg(256);

}  // namespace
