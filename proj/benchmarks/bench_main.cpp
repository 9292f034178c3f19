#include <benchmark/benchmark.h>

#include <qhilb/qhilb.hpp>

namespace {

void BM_CupTable(benchmark::State& state) {
    const qhilb::ChowRing& ring = qhilb::ChowRing::standard();
    for (auto _ : state)
        for (int i = 0; i < qhilb::kBasisSize; ++i)
            for (int j = 0; j < qhilb::kBasisSize; ++j)
                benchmark::DoNotOptimize(ring.cup_basis(i, j));
}
BENCHMARK(BM_CupTable);

// Fresh engine each iteration; the table solve dominates.
void BM_TwoPointTable(benchmark::State& state) {
    const int c_max = static_cast<int>(state.range(0));
    for (auto _ : state) {
        qhilb::Engine e{qhilb::EngineConfig{c_max, false, false}};
        benchmark::DoNotOptimize(e.derive_two_point_table().size());
    }
}
BENCHMARK(BM_TwoPointTable)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_T4Square(benchmark::State& state) {
    const int c_max = static_cast<int>(state.range(0));
    for (auto _ : state) {
        qhilb::Engine e{qhilb::EngineConfig{c_max, false, true}};
        qhilb::QuantumProduct p(e, c_max);
        benchmark::DoNotOptimize(p.basis_product(4, 4));
    }
}
BENCHMARK(BM_T4Square)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_Hyperelliptic(benchmark::State& state) {
    qhilb::HyperellipticQuery q;
    q.d1 = 2;
    q.d2 = 2;
    q.l = static_cast<int>(state.range(0));
    for (auto _ : state) {
        qhilb::Engine e{qhilb::EngineConfig{6, true, true}};
        benchmark::DoNotOptimize(qhilb::hyperelliptic_table(e, q).counts.size());
    }
}
BENCHMARK(BM_Hyperelliptic)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

// Memo already warm: measures lookup cost only.
void BM_MemoHit(benchmark::State& state) {
    static qhilb::Engine e{qhilb::EngineConfig{6, false, true}};
    const qhilb::CurveClass beta{1, 1, 2};
    const std::vector<int> ins{4, 4, 4, 4, 4, 4};
    e.invariant(beta, ins);
    for (auto _ : state)
        benchmark::DoNotOptimize(e.invariant(beta, ins));
}
BENCHMARK(BM_MemoHit);

} // namespace

BENCHMARK_MAIN();
