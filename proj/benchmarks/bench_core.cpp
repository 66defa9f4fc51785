#include "fluxlattice/array.hpp"
#include "fluxlattice/numerics.hpp"
#include "fluxlattice/qubit.hpp"
#include "fluxlattice/swt.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace fluxlattice;

namespace {

const FluxQubitParams kQ1{6.2, 22.1, 32.2, 0.5};
const FluxQubitParams kCoupler{9.6, 20.2, 22.7, 0.5};
const FluxQubitParams kQ3{5.6, 31.6, 25.2, 0.4522};

CouplingNetwork paper_network() {
    CouplingNetwork net;
    net.mode = NetworkMode::effective;
    net.shunt_ff = {32.2, 22.7, 25.2};
    net.couplers_ff = RealMatrix::Zero(3, 3);
    net.couplers_ff(0, 1) = net.couplers_ff(1, 0) = 0.05;
    net.couplers_ff(1, 2) = net.couplers_ff(2, 1) = 0.05;
    net.couplers_ff(0, 2) = net.couplers_ff(2, 0) = 0.0005;
    return net;
}

ComplexMatrix random_hermitian(int dim) {
    std::mt19937 rng(dim);
    std::normal_distribution<double> dist;
    ComplexMatrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            a(i, j) = Complex(dist(rng), dist(rng));
    return 0.5 * (a + a.adjoint());
}

} // namespace

static void BM_eigh(benchmark::State& state) {
    const ComplexMatrix a = random_hermitian(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(eigh(a));
}
BENCHMARK(BM_eigh)->Arg(64)->Arg(128)->Arg(256);

static void BM_build_hamiltonian(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(build_hamiltonian(kQ1, dim));
}
BENCHMARK(BM_build_hamiltonian)->Arg(60)->Arg(120);

static void BM_spectrum_converged(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(spectrum(kQ1, 5, 60));
}
BENCHMARK(BM_spectrum_converged);

static void BM_assemble(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(assemble({kQ1, kCoupler, kQ3}, paper_network(), 5, 60));
}
BENCHMARK(BM_assemble);

static void BM_swt_exact(benchmark::State& state) {
    ArrayModel model = assemble({kQ1, kCoupler, kQ3}, paper_network(), 5, 60);
    for (auto _ : state)
        benchmark::DoNotOptimize(swt_exact(model, true));
}
BENCHMARK(BM_swt_exact);

BENCHMARK_MAIN();
