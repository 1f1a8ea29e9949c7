#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "dephasim/maps.hpp"
#include "dephasim/metrics.hpp"

using namespace dephasim;

namespace {

InteractionPattern chain_pattern(int n_system, int n1) {
    // Each system qubit couples to its neighbour's bath block: one overlap
    // per adjacent pair, phases spread over (0, 2pi).
    std::vector<PurePhaseGate> gates;
    const int n_bath = n_system * (n1 - 1) + 1;
    for (int l = 0; l < n_system; ++l) {
        PurePhaseGate g;
        g.support.push_back(QubitId::system(l));
        for (int b = 0; b < n1; ++b) {
            g.support.push_back(QubitId::bath((l * (n1 - 1) + b) % n_bath));
        }
        g.phase = 0.37 * (l + 1);
        gates.push_back(std::move(g));
    }
    return InteractionPattern(n_system, n_bath, std::move(gates));
}

DensityMatrix random_density(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    const QubitRegister reg = QubitRegister::system_bath(n, 0);
    const Eigen::Index d = reg.dim();
    Matrix a(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            a(r, c) = Complex(gauss(rng), gauss(rng));
        }
    }
    Matrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(reg, std::move(rho));
}

}  // namespace

static void BM_MapOracle(benchmark::State& state) {
    const int ns = static_cast<int>(state.range(0));
    const InteractionPattern p = chain_pattern(ns, 3);
    std::mt19937_64 rng(1);
    const DensityMatrix rho = random_density(ns, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(map_oracle(p, rho));
    }
}
BENCHMARK(BM_MapOracle)->Arg(1)->Arg(2)->Arg(3);

static void BM_HadamardFormConstruction(benchmark::State& state) {
    const int ns = static_cast<int>(state.range(0));
    const InteractionPattern p = chain_pattern(ns, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hadamard_form(p));
    }
}
BENCHMARK(BM_HadamardFormConstruction)->Arg(1)->Arg(2)->Arg(3)->Arg(4);

static void BM_HadamardApply(benchmark::State& state) {
    const int ns = static_cast<int>(state.range(0));
    const InteractionPattern p = chain_pattern(ns, 3);
    const HadamardForm h = hadamard_form(p);
    std::mt19937_64 rng(2);
    const DensityMatrix rho = random_density(ns, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(h.apply(rho));
    }
}
BENCHMARK(BM_HadamardApply)->Arg(2)->Arg(3)->Arg(4);

static void BM_KrausApply(benchmark::State& state) {
    const int ns = static_cast<int>(state.range(0));
    const InteractionPattern p = chain_pattern(ns, 3);
    const KrausForm k = kraus_form(p);
    std::mt19937_64 rng(3);
    const DensityMatrix rho = random_density(ns, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(k.apply(rho));
    }
}
BENCHMARK(BM_KrausApply)->Arg(2)->Arg(3);

static void BM_PauliFormConstruction(benchmark::State& state) {
    const int ns = static_cast<int>(state.range(0));
    const InteractionPattern p = chain_pattern(ns, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pauli_form(p));
    }
}
BENCHMARK(BM_PauliFormConstruction)->Arg(1)->Arg(2)->Arg(3);

static void BM_EofOptimizerPoint(benchmark::State& state) {
    const HadamardForm map =
        hadamard_form(fig2_pattern(Coupling::OverlapQubit, 1.1, std::numbers::pi / 3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(max_eof_over_entangled_inputs(map, 7));
    }
}
BENCHMARK(BM_EofOptimizerPoint);

BENCHMARK_MAIN();
