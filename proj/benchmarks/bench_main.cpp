#include <benchmark/benchmark.h>

#include "dilation/dilation.hpp"

using namespace dilation;

namespace {

ContractionTuple instance(int e, int n, int m) {
    GeneratorParams p;
    p.e_dim = e;
    p.n = n;
    p.degree = m;
    return to_tuple(generate_instance("shift-compression", p, 17));
}

void BM_FullPipeline(benchmark::State& state) {
    const ContractionTuple t = instance(2, static_cast<int>(state.range(0)), 2);
    PipelineOptions opts;
    opts.n_blocks = 16;
    opts.maxdeg = 8;
    for (auto _ : state) benchmark::DoNotOptimize(full_pipeline(t, opts));
}
BENCHMARK(BM_FullPipeline)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_BuildUnitary(benchmark::State& state) {
    const ContractionTuple t = instance(3, 2, 3);
    const DefectData d = defect_data(t);
    const FundamentalPairs p = fundamental_pairs(t, d);
    const Certificate c = assemble_certificate(p);
    const Certificate a = adjoint_transfer(p);
    const int n_blocks = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_unitary(t, d, c, a, n_blocks));
}
BENCHMARK(BM_BuildUnitary)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_VerifyDilation(benchmark::State& state) {
    const ContractionTuple t = instance(2, 2, 2);
    const DefectData d = defect_data(t);
    const FundamentalPairs p = fundamental_pairs(t, d);
    const DilationTuple dil = build_unitary(t, d, assemble_certificate(p), adjoint_transfer(p), 16);
    const int maxdeg = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(verify_dilation(t, dil, maxdeg));
}
BENCHMARK(BM_VerifyDilation)->Arg(4)->Arg(8)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_CharacteristicSample(benchmark::State& state) {
    Rng rng(5);
    const CMatrix t = rng.contraction(6, 0.9);
    for (auto _ : state) benchmark::DoNotOptimize(characteristic_sample(t, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CharacteristicSample)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_OracleScalarPair(benchmark::State& state) {
    CMatrix a(1, 1), b(1, 1);
    a(0, 0) = 0.3;
    b(0, 0) = 0.6;
    const ContractionTuple t = build_tuple({a, b});
    const DefectData d = defect_data(t);
    for (auto _ : state) benchmark::DoNotOptimize(certificate_oracle_search(t, d, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_OracleScalarPair)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
