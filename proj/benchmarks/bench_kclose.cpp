#include <kclose/corpus.hpp>
#include <kclose/cutoff.hpp>
#include <kclose/decompose.hpp>
#include <kclose/operators.hpp>

#include <benchmark/benchmark.h>

using namespace kclose;

namespace {

void BM_transform_round_trip(benchmark::State& state) {
    const GridDomain d(static_cast<int>(state.range(1)), static_cast<std::size_t>(state.range(0)));
    const auto f = d.dimension() == 1
                       ? GridFunction::sample(d, [](double t) { return cplx(std::cos(3.0 * t), std::sin(t)); })
                       : GridFunction::sample(d, [](double t, double s) { return cplx(std::cos(3.0 * t), std::sin(s)); });
    for (auto _ : state) benchmark::DoNotOptimize(from_spectrum(to_spectrum(f)));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * d.point_count()));
}
BENCHMARK(BM_transform_round_trip)->Args({1024, 1})->Args({4096, 1})->Args({65536, 1})->Args({64, 2})->Args({256, 2});

void BM_harmonic_conjugate(benchmark::State& state) {
    const GridDomain d(1, static_cast<std::size_t>(state.range(0)));
    const auto u = GridFunction::sample(d, [](double t) { return cplx(std::max(1.0, 2.0 * std::abs(std::cos(t)))); });
    for (auto _ : state) benchmark::DoNotOptimize(harmonic_conjugate(u));
}
BENCHMARK(BM_harmonic_conjugate)->RangeMultiplier(4)->Range(1024, 65536);

void BM_build_cutoff(benchmark::State& state) {
    const GridDomain d(1, static_cast<std::size_t>(state.range(0)));
    const auto phi = generate_phi(CorpusSpec{.seed = 1, .law = CorpusLaw::two_scale}, d, 0);
    CutoffParams params;
    params.p = 2.0;
    params.gamma = 3;
    for (auto _ : state) benchmark::DoNotOptimize(build_cutoff(phi, params));
}
BENCHMARK(BM_build_cutoff)->RangeMultiplier(2)->Range(512, 4096)->Unit(benchmark::kMillisecond);

void BM_decompose(benchmark::State& state) {
    const auto s = make_setting("model_space", static_cast<std::size_t>(state.range(0)));
    const auto c = generate_case(CorpusSpec{.seed = 1, .law = CorpusLaw::two_scale}, s, 1);
    const DualDecompositionInput in{.f = c.f, .g = c.g, .h = c.h, .setting = s};
    CutoffParams params;
    params.gamma = 3;
    for (auto _ : state) benchmark::DoNotOptimize(decompose(in, params, false));
}
BENCHMARK(BM_decompose)->RangeMultiplier(2)->Range(512, 2048)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
