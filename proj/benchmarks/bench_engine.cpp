#include <benchmark/benchmark.h>

#include "oam/builders.hpp"

using namespace oam;

namespace {

const SequenceSpec kSeq = SequenceSpec::fibonacci(1, 400);

void BM_SparseSimulateCdTree(benchmark::State& state) {
  const auto tree = build_cd_tree(kSeq, IndexParity::even);
  const PureState in = make_named_state(StateFamily::S, 7, kSeq, tree.source);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(tree.circuit, in));
  }
}
BENCHMARK(BM_SparseSimulateCdTree);

void BM_DenseTransferMatrixCdTree(benchmark::State& state) {
  const auto tree = build_cd_tree(kSeq, IndexParity::even);
  std::vector<Mode> basis;
  for (int k : tree.chain) basis.push_back({tree.source, Label::oam(kSeq.term(k))});
  for (auto _ : state) {
    benchmark::DoNotOptimize(transfer_matrix(tree.circuit, basis));
  }
}
BENCHMARK(BM_DenseTransferMatrixCdTree);

void BM_BuildAndVerifySgdt(benchmark::State& state) {
  const auto n = state.range(0);
  std::vector<Complex> coeffs;
  std::vector<long long> values;
  for (long long j = 0; j < n; ++j) {
    coeffs.push_back(Complex(1.0 / double(j + 1), 0.1 * double(j)));
    values.push_back(2 * j + 1);
  }
  const auto target = SuperpositionTarget::from_list(coeffs, values);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_sgdt(target));
  }
}
BENCHMARK(BM_BuildAndVerifySgdt)->Arg(2)->Arg(5)->Arg(8);

void BM_EmitParseRoundTrip(benchmark::State& state) {
  const auto tree = build_cd_tree(kSeq, IndexParity::odd);
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_netlist(emit_netlist(tree.circuit)));
  }
}
BENCHMARK(BM_EmitParseRoundTrip);

}  // namespace
