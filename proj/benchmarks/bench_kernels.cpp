#include <benchmark/benchmark.h>

#include "qblab/rng.hpp"
#include "qblab/tq.hpp"

using namespace qblab;

namespace {

const cplx kQ(0.53, 0.31);

LOperatorPair make_pair(int m, int n, std::vector<int> members, int cutoff) {
    const ParityProfile prof(m, n);
    const IndexSet iset(prof, members);
    const FockSpace space(iset, cutoff, kQ);
    const auto osc = OscillatorSet::canonical(space);
    return build_L_pair(iset, space, osc, kQ);
}

void bm_graded_kron(benchmark::State& state) {
    const ParityProfile prof(2, 2);
    const GradedSpace v = GradedSpace::fundamental(prof);
    const auto r = build_ps_rmatrix(prof, kQ, cplx(1.2, 0.4), cplx(0.8, -0.1));
    const auto id = SparseOperator::identity(tensor(v, v));
    for (auto _ : state) benchmark::DoNotOptimize(graded_kron(r, id));
}
BENCHMARK(bm_graded_kron);

void bm_sparse_product(benchmark::State& state) {
    const auto pair = make_pair(2, 2, {1}, static_cast<int>(state.range(0)));
    const auto a = evaluate_L(pair, cplx(1.3, 0.2)).matrix;
    const auto b = evaluate_L(pair, cplx(0.7, -0.4)).matrix;
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_sparse_product)->Arg(6)->Arg(12)->Arg(24);

void bm_ybe_check(benchmark::State& state) {
    const ParityProfile prof(2, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            check_graded_ybe(prof, kQ, cplx(1.1, 0.2), cplx(0.9, -0.3), cplx(1.4, 0.1)));
}
BENCHMARK(bm_ybe_check);

void bm_rll_affine(benchmark::State& state) {
    const auto pair = make_pair(2, 1, {1}, static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(check_rll_affine(pair, cplx(1.2, 0.3), cplx(0.8, -0.5)));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_rll_affine)->Arg(6)->Arg(12)->Arg(24);

void bm_lattice_q_trace(benchmark::State& state) {
    const ParityProfile prof(2, 1);
    Sampler rng(42);
    const auto tw = random_convergent_twist(rng, prof, kQ, 2);
    const LatticeConfig config({cplx(0.9, -0.3), cplx(1.4, 0.8)});
    for (auto _ : state)
        benchmark::DoNotOptimize(lattice_Q(IndexSet(prof, {1}), kQ, cplx(1.7, 0.6), config, tw,
                                           static_cast<int>(state.range(0)), true));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_lattice_q_trace)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
