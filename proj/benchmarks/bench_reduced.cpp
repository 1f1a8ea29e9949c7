#include <benchmark/benchmark.h>

#include "dephasim/reduced.hpp"

using namespace dephasim;

namespace {

// One system qubit, k gates of n1 bath qubits sharing a single overlap chain.
InteractionPattern overlap_chain(int k, int n1) {
    std::vector<PurePhaseGate> gates;
    for (int i = 0; i < k; ++i) {
        PurePhaseGate g;
        g.support.push_back(QubitId::system(0));
        // Adjacent gates share one bath qubit.
        for (int b = 0; b < n1; ++b) {
            g.support.push_back(QubitId::bath(i * (n1 - 1) + b));
        }
        g.phase = 0.21 * (i + 1);
        gates.push_back(std::move(g));
    }
    return InteractionPattern(1, k * (n1 - 1) + 1, std::move(gates));
}

}  // namespace

// The virtual-qubit contraction scales with the overlapping bath qubits only;
// brute force scales with the full register.
static void BM_ReducedViaPeps(benchmark::State& state) {
    const InteractionPattern p = overlap_chain(static_cast<int>(state.range(0)), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reduced_via_peps(p));
    }
}
BENCHMARK(BM_ReducedViaPeps)->Arg(2)->Arg(3)->Arg(4)->Arg(8);

static void BM_ReducedBruteForce(benchmark::State& state) {
    const InteractionPattern p = overlap_chain(static_cast<int>(state.range(0)), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reduced_brute_force(p, {"s0"}));
    }
}
BENCHMARK(BM_ReducedBruteForce)->Arg(2)->Arg(3)->Arg(4);

static void BM_WeightedGraphReduced(benchmark::State& state) {
    const int nb = static_cast<int>(state.range(0));
    std::vector<PurePhaseGate> gates;
    for (int s = 0; s < 2; ++s) {
        for (int b = 0; b < nb; ++b) {
            gates.push_back({{QubitId::system(s), QubitId::bath(b)}, 0.1 * (b + 1)});
        }
    }
    const InteractionPattern p(2, nb, std::move(gates));
    const WeightedGraph g = graph_from_pattern(p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(weighted_graph_reduced(g, {0, 1}));
    }
}
BENCHMARK(BM_WeightedGraphReduced)->Arg(4)->Arg(8)->Arg(32)->Arg(128);
