// Serial reference vs OpenMP kernel timings on a generated stream.
#include <benchmark/benchmark.h>

#include "ttskill/classify.hpp"
#include "ttskill/corpus.hpp"
#include "ttskill/features.hpp"
#include "ttskill/preprocess.hpp"
#include "ttskill/reduce.hpp"
#include "ttskill/synthgen.hpp"

namespace {

using namespace ttskill;

struct Fixture {
  SensorSeries raw;
  std::vector<MotionWindow> windows;
  Matrix features;
  Matrix centered;
  Matrix reduced;

  Fixture() {
    GenConfig cfg;
    cfg.strokes_per_class = 50;
    raw = generate(cfg).series;
    windows = slide_windows(preprocess_series(raw), kDefaultWindow, kDefaultOverlap);
    features = extract_features(windows);
    centered = features;
    for (std::size_t c = 0; c < centered.cols(); ++c) {
      double mean = 0.0;
      for (std::size_t r = 0; r < centered.rows(); ++r) mean += centered(r, c);
      mean /= static_cast<double>(centered.rows());
      for (std::size_t r = 0; r < centered.rows(); ++r) centered(r, c) -= mean;
    }
    reduced = transform_rows(fit_pca(features), features);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_preprocess_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(serial::preprocess_series(f.raw));
}
void BM_preprocess_omp(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(preprocess_series(f.raw));
}

void BM_features_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(serial::extract_features(f.windows));
}
void BM_features_omp(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(f.windows));
}

void BM_covariance_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(serial::covariance(f.centered));
}
void BM_covariance_omp(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(covariance(f.centered));
}

void BM_gram_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(serial::gaussian_gram(f.reduced, 0.05));
}
void BM_gram_omp(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_gram(f.reduced, 0.05));
}

}  // namespace

BENCHMARK(BM_preprocess_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_preprocess_omp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_features_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_features_omp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_covariance_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_covariance_omp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_gram_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_gram_omp)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
