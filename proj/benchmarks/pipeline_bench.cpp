// Microbenchmarks for the stages that dominate sweep time. Run with
// --benchmark_min_time=0.1x for a quick pass.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "diar/affinity.hpp"
#include "diar/kmeans.hpp"
#include "diar/pipeline.hpp"
#include "diar/rng.hpp"
#include "diar/scoring.hpp"
#include "diar/spectral.hpp"
#include "diar/synthetic.hpp"

namespace {

diar::SyntheticRecording recording_with(int n_segments) {
    diar::SynthSpec spec;
    spec.name = "bench";
    spec.n_speakers = 4;
    spec.dim = 192;
    // N segments of 3.0 s / 1.5 s windowing need 1.5 * (N + 1) seconds
    spec.duration = 1.5 * (n_segments + 1);
    spec.turn_len_lo = 6.0;
    spec.turn_len_hi = 12.0;
    spec.intra_noise = 0.05;
    spec.inter_min_angle = 75.0;
    spec.seed = 77;
    return diar::gen_recording(spec);
}

void bm_cosine_affinity(benchmark::State& state) {
    diar::SyntheticRecording rec = recording_with(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(diar::cosine_affinity(rec.embeddings.vectors));
}
BENCHMARK(bm_cosine_affinity)->Arg(100)->Arg(400);

void bm_prune_and_symmetrize(benchmark::State& state) {
    diar::SyntheticRecording rec = recording_with(static_cast<int>(state.range(0)));
    Eigen::MatrixXd affinity = diar::cosine_affinity(rec.embeddings.vectors);
    for (auto _ : state)
        benchmark::DoNotOptimize(diar::symmetrize(diar::prune_rows(affinity, 0.2)));
}
BENCHMARK(bm_prune_and_symmetrize)->Arg(100)->Arg(400);

void bm_eig_sym(benchmark::State& state) {
    diar::SyntheticRecording rec = recording_with(static_cast<int>(state.range(0)));
    Eigen::MatrixXd lap = diar::laplacian(
        diar::symmetrize(diar::prune_rows(diar::cosine_affinity(rec.embeddings.vectors), 0.2)));
    for (auto _ : state) benchmark::DoNotOptimize(diar::eig_sym(lap));
}
BENCHMARK(bm_eig_sym)->Arg(100)->Arg(400);

void bm_kmeans(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    diar::Rng rng(7);
    Eigen::MatrixXd points(n, 4);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 4; ++j) points(i, j) = rng.uniform(-1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(diar::kmeans(points, 4, 42));
}
BENCHMARK(bm_kmeans)->Arg(100)->Arg(400);

void bm_diarize_recording(benchmark::State& state) {
    diar::SyntheticRecording rec = recording_with(static_cast<int>(state.range(0)));
    diar::DiarizationConfig cfg;
    cfg.alpha = 0.2;
    for (auto _ : state)
        benchmark::DoNotOptimize(diar::diarize_recording(rec.embeddings, cfg));
}
BENCHMARK(bm_diarize_recording)->Arg(100)->Arg(200);

void bm_compute_der(benchmark::State& state) {
    diar::SyntheticRecording rec = recording_with(static_cast<int>(state.range(0)));
    diar::DiarizationConfig cfg;
    cfg.alpha = 0.2;
    diar::DiarizationResult result = diar::diarize_recording(rec.embeddings, cfg);
    for (auto _ : state)
        benchmark::DoNotOptimize(diar::compute_der(rec.reference, result.turns, {0.25}));
}
BENCHMARK(bm_compute_der)->Arg(100)->Arg(400);

} // namespace

BENCHMARK_MAIN();
