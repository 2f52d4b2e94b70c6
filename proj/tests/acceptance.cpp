// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

#include "pipeline.hpp"
#include "ttskill/classify.hpp"
#include "ttskill/corpus.hpp"
#include "ttskill/evaluate.hpp"
#include "ttskill/features.hpp"
#include "ttskill/metrics.hpp"
#include "ttskill/preprocess.hpp"
#include "ttskill/reduce.hpp"
#include "ttskill/rng.hpp"
#include "ttskill/segment.hpp"
#include "ttskill/synthgen.hpp"

using namespace ttskill;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Shared classification corpus: 100 strokes per class, default noise, 80/20 split.
struct Desk {
  Matrix train_raw;
  Matrix train, test;
  std::vector<StrokeLabel> ytrain, ytest;
  PcaModel pca;
  double corpus_seconds = 0.0;
};

Desk build_desk() {
  const auto t0 = Clock::now();
  GenConfig cfg;
  const auto corpus = build_corpus(cfg);
  const auto windows = corpus.stroke_windows();
  const auto x = extract_features(windows);
  std::vector<StrokeLabel> y;
  for (const auto& w : windows) y.push_back(*w.label);
  const auto split = stratified_split(y, 0.2, cfg.seed);
  Desk d;
  d.train_raw = select_rows(x, split.train);
  d.pca = fit_pca(d.train_raw);
  d.train = transform_rows(d.pca, d.train_raw);
  d.test = transform_rows(d.pca, select_rows(x, split.test));
  d.ytrain = select<StrokeLabel>(y, split.train);
  d.ytest = select<StrokeLabel>(y, split.test);
  d.corpus_seconds = seconds_since(t0);
  return d;
}

Outcome ahp_fidelity() {
  const auto t0 = Clock::now();
  const auto r = ahp_weights(standard_ahp_matrix());
  const double elapsed = seconds_since(t0);
  const std::array<double, 5> published{0.0556, 0.2055, 0.0592, 0.1715, 0.5081};
  double worst = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    worst = std::max(worst, std::abs(r.weights[i] - published[i]));
    sum += r.weights[i];
  }
  const bool ok = worst <= 5e-3 && std::abs(sum - 1.0) <= 1e-9 && elapsed < 1.0;
  return {ok, fmt("w=[%.4f %.4f %.4f %.4f %.4f] max|dw|=%.2e |sum-1|=%.1e t=%.2es", r.weights[0], r.weights[1],
                  r.weights[2], r.weights[3], r.weights[4], worst, std::abs(sum - 1.0), elapsed)};
}

Outcome total_score_spots() {
  const auto k = published_level_weights();
  const double a = total_score({1, 0, 0, 0, 0}, k);
  const double b = total_score({0, 0, 0, 0, 1}, k);
  const bool ok = fmt("%.3f", a) == "0.056" && fmt("%.3f", b) == "0.508";
  return {ok, fmt("Q(1,0,0,0,0)=%.3f Q(0,0,0,0,1)=%.3f", a, b)};
}

Outcome classification(const Desk& d) {
  const auto t0 = Clock::now();
  const auto dag = train_dag(d.train, d.ytrain);
  std::vector<StrokeLabel> dag_pred, mlp_pred;
  for (std::size_t r = 0; r < d.test.rows(); ++r) dag_pred.push_back(dag_predict(dag, d.test.row(r)));
  const auto mlp = mlp_train(mlp_init(d.train.cols(), 7), d.train, d.ytrain).model;
  for (std::size_t r = 0; r < d.test.rows(); ++r) mlp_pred.push_back(mlp_predict(mlp, d.test.row(r)));
  const auto dag_report = classification_report(confusion(d.ytest, dag_pred));
  const auto mlp_report = classification_report(confusion(d.ytest, mlp_pred));
  const double elapsed = d.corpus_seconds + seconds_since(t0);
  const bool ok = dag_report.accuracy >= 0.95 && mlp_report.accuracy >= 0.95 && mlp_report.macro_f >= 0.95 &&
                  elapsed < 120.0;
  return {ok, fmt("k=%zu test=%zu dagsvm acc=%.4f mlp acc=%.4f mlp macroF(0.7)=%.4f t=%.1fs", d.pca.k,
                  d.test.rows(), dag_report.accuracy, mlp_report.accuracy, mlp_report.macro_f, elapsed)};
}

Outcome pca_checks(const Desk& d) {
  const auto& pca = d.pca;
  const auto c = contribution_rates(pca);
  const bool rule = c.cumulative[pca.k - 1] >= 0.95 && (pca.k == 1 || c.cumulative[pca.k - 2] < 0.95);

  double ortho = 0.0;
  for (std::size_t i = 0; i < pca.k; ++i)
    for (std::size_t j = 0; j < pca.k; ++j)
      ortho = std::max(ortho, std::abs(dot(pca.components.row(i), pca.components.row(j)) - (i == j ? 1.0 : 0.0)));

  // Squared reconstruction error in the standardized space, averaged with the
  // same m - 1 normalization as the covariance.
  const std::size_t m = d.train_raw.rows();
  double err = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    const auto back = reconstruct(pca, transform(pca, d.train_raw.row(r)));
    for (std::size_t f = 0; f < pca.input_dim(); ++f) {
      const double e = (d.train_raw(r, f) - back[f]) / pca.scale[f];
      err += e * e;
    }
  }
  err /= static_cast<double>(m - 1);
  const double discarded = std::accumulate(pca.eigenvalues.begin() + static_cast<std::ptrdiff_t>(pca.k),
                                           pca.eigenvalues.end(), 0.0);
  const double rel = std::abs(err - discarded) / std::max(discarded, 1e-300);
  const bool ok = rule && ortho <= 1e-9 && rel <= 1e-6;
  return {ok, fmt("k=%zu C_k=%.4f C_k-1=%.4f ortho=%.1e recon=%.6g discarded=%.6g rel=%.1e", pca.k,
                  c.cumulative[pca.k - 1], pca.k > 1 ? c.cumulative[pca.k - 2] : 0.0, ortho, err, discarded, rel)};
}

Outcome newton_exactness() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    CounterRng rng(seed, 77);
    const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1), c = rng.uniform(-1, 1), e = rng.uniform(-1, 1);
    auto f = [&](double x) { return ((a * x + b) * x + c) * x + e; };
    const std::size_t n = 30;
    std::vector<double> pos(n), val(n);
    std::vector<bool> present(n, true);
    for (std::size_t i = 0; i < n; ++i) {
      pos[i] = static_cast<double>(i);
      val[i] = f(pos[i]);
    }
    const auto gaps = 1 + rng.below(4);
    for (std::uint64_t g = 0; g < gaps; ++g) {
      const auto i = rng.below(n);
      present[i] = false;
      val[i] = 0.0;
    }
    const auto out = newton_fill(ChannelSeries(val, pos, present));
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(out.values[i] - f(pos[i])));
  }
  return {worst <= 1e-9, fmt("1000 cubics, max abs error %.2e", worst)};
}

std::vector<bool> oracle_flags(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) d[i] = x[i + 1] - x[i];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
  double var = 0.0;
  for (double v : d) var += (v - mean) * (v - mean);
  const double sigma = std::sqrt(var / static_cast<double>(d.size()));
  std::vector<bool> flagged(n, false);
  if (sigma < 1e-12 * std::max(1.0, std::abs(mean))) return flagged;
  for (std::size_t i = 0; i < d.size(); ++i) flagged[i + 1] = !(d[i] > mean - 3 * sigma && d[i] < mean + 3 * sigma);
  return flagged;
}

Outcome outlier_oracle() {
  std::size_t mismatches = 0, flagged = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    CounterRng rng(seed, 66);
    std::vector<double> x(100 + rng.below(400));
    for (auto& v : x) v = rng.normal();
    const auto spikes = 1 + rng.below(6);
    for (std::uint64_t s = 0; s < spikes; ++s) x[rng.below(x.size())] += rng.uniform(10.0, 50.0) * (rng.uniform() < 0.5 ? -1 : 1);
    const auto out = remove_outliers(ChannelSeries(x));
    const auto expect = oracle_flags(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!out.present[i] != expect[i]) ++mismatches;
      flagged += expect[i] ? 1 : 0;
    }
  }
  const std::vector<double> constant(500, 4.25);
  const auto out = remove_outliers(ChannelSeries(constant));
  const bool unchanged = out.values == constant && out.present_count() == constant.size();
  return {mismatches == 0 && unchanged,
          fmt("1000 series, %zu oracle flags, %zu mismatches, constant unchanged=%s", flagged, mismatches,
              unchanged ? "yes" : "no")};
}

Outcome gradient_check() {
  const auto model = mlp_init(13, 11);
  CounterRng rng(12, 0);
  std::vector<double> x(13);
  for (auto& v : x) v = rng.normal();
  const auto label = StrokeLabel::ForehandChop;
  const auto grad = mlp_gradient(model, x, label);
  const double eps = 1e-4;
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    for (int t = 0; t < 100; ++t) {
      const auto r = rng.below(model.layers[l].weights.rows());
      const auto c = rng.below(model.layers[l].weights.cols());
      auto plus = model, minus = model;
      plus.layers[l].weights(r, c) += eps;
      minus.layers[l].weights(r, c) -= eps;
      const double fd = (mlp_loss(plus, x, label) - mlp_loss(minus, x, label)) / (2 * eps);
      const double an = grad[l].weights(r, c);
      const double scale = std::max({std::abs(fd), std::abs(an), 1e-8});
      worst = std::max(worst, std::abs(fd - an) / scale);
      ++checked;
    }
  }
  return {worst <= 1e-4, fmt("%zu coordinates over %zu layers, max rel error %.2e", checked, model.layers.size(), worst)};
}

Outcome softmax_check() {
  const auto model = mlp_init(13, 21);
  CounterRng rng(22, 0);
  double worst = 0.0;
  double smallest = 1.0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> x(13);
    const double scale = rng.uniform(0.1, 20.0);
    for (auto& v : x) v = rng.normal() * scale;
    const auto p = mlp_forward(model, x);
    double sum = 0.0;
    for (double v : p) {
      sum += v;
      smallest = std::min(smallest, v);
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return {worst <= 1e-12 && smallest > 0.0, fmt("1000 inputs, max |sum-1|=%.1e, min p=%.3g", worst, smallest)};
}

Outcome f_measure_check() {
  CounterRng rng(33, 0);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    ConfusionMatrix m;
    for (auto& row : m.counts)
      for (auto& v : row) v = rng.below(40);
    for (std::size_t c = 0; c < kNumStrokes; ++c) {
      const auto pr = precision_recall(m, c);
      const double f1 = pr.precision + pr.recall > 0 ? 2 * pr.precision * pr.recall / (pr.precision + pr.recall) : 0.0;
      worst = std::max(worst, std::abs(f_measure(m, c, {0.5}) - f1));
    }
  }
  const double spot = f_measure(8, 2, 4, 0.7);
  const double spot_err = std::abs(spot - 16.0 / 21.2);
  return {worst <= 1e-12 && spot_err <= 1e-12,
          fmt("alpha=0.5 max |F-F1|=%.1e; TP8/FN2/FP4 F=%.12f (err %.1e)", worst, spot, spot_err)};
}

Outcome windowing_check() {
  std::vector<SampleFrame> frames(5000);
  for (std::size_t i = 0; i < frames.size(); ++i) frames[i].t = 0.01 * static_cast<double>(i);
  std::size_t bad_count = 0, bad_overlap = 0;
  for (std::size_t n = 200; n <= 5000; ++n) {
    const SensorSeries s(std::vector<SampleFrame>(frames.begin(), frames.begin() + static_cast<std::ptrdiff_t>(n)));
    const auto w = slide_windows(s, 200, 0.5);
    if (w.size() != (n - 200) / 100 + 1) ++bad_count;
    for (std::size_t i = 1; i < w.size(); ++i) {
      const auto prev_end = w[i - 1].start_index + w[i - 1].size();
      if (prev_end - w[i].start_index != 100) ++bad_overlap;
    }
  }
  return {bad_count == 0 && bad_overlap == 0,
          fmt("n in [200,5000]: %zu count mismatches, %zu overlap mismatches", bad_count, bad_overlap)};
}

struct Cohorts {
  std::vector<double> professional;
  std::vector<double> amateur;
};

Cohorts score_cohorts() {
  GenConfig ref_cfg;
  ref_cfg.seed = 101;
  ref_cfg.strokes_per_class = 30;
  const auto reference = build_corpus(ref_cfg).stroke_windows();
  std::vector<StandardProfile> profiles;
  for (auto s : kAllStrokes) {
    std::vector<MotionWindow> ref;
    for (const auto& w : reference)
      if (*w.label == s) ref.push_back(w);
    profiles.push_back(build_profile(ref, s));
  }
  const auto weights = ahp_weights(standard_ahp_matrix()).weights;

  auto draw = [](std::uint64_t seed, double noise, std::size_t count) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.noise_sigma = noise;
    cfg.strokes_per_class = 10;
    auto windows = build_corpus(cfg).stroke_windows();
    windows.resize(count);
    return windows;
  };
  auto score = [&](const std::vector<MotionWindow>& windows) {
    std::vector<StrokeLabel> strokes;
    for (const auto& w : windows) strokes.push_back(*w.label);
    std::vector<double> q;
    for (const auto& r : score_windows(windows, strokes, profiles, weights)) q.push_back(r.total);
    return q;
  };

  Cohorts c;
  c.professional = score(draw(202, 0.05, 50));

  // Weaker, tilted and shakier execution of the same strokes.
  auto amateur = draw(303, 0.20, 50);
  const auto rest = idle_frame();
  for (auto& w : amateur) {
    for (auto& f : w.frames) {
      for (std::size_t a = 0; a < 3; ++a) {
        f.acc[a] = rest.acc[a] + 0.6 * (f.acc[a] - rest.acc[a]);
        f.gyro[a] = rest.gyro[a] + 0.6 * (f.gyro[a] - rest.gyro[a]);
        f.angle[a] = rest.angle[a] + 0.6 * (f.angle[a] - rest.angle[a]) + 20.0;
      }
    }
  }
  c.amateur = score(amateur);
  return c;
}

Outcome skill_ordering() {
  const auto a = score_cohorts();
  const auto b = score_cohorts();
  const bool deterministic = a.professional == b.professional && a.amateur == b.amateur;
  auto mean = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); };
  const double pro_mean = mean(a.professional), ama_mean = mean(a.amateur);
  const double pro_min = *std::min_element(a.professional.begin(), a.professional.end());
  const double ama_min = *std::min_element(a.amateur.begin(), a.amateur.end());
  const bool ok = a.professional.size() == 50 && a.amateur.size() == 50 && pro_mean > ama_mean &&
                  pro_min > ama_min && deterministic;
  return {ok, fmt("professional mean=%.4f min=%.4f, amateur mean=%.4f min=%.4f, deterministic=%s", pro_mean, pro_min,
                  ama_mean, ama_min, deterministic ? "yes" : "no")};
}

Outcome pipeline_determinism() {
  const auto base = fs::temp_directory_path() / "ttskill_acceptance";
  fs::remove_all(base);
  const auto first = ttskill::testing::run_pipeline(base / "a", 20);
  const auto second = ttskill::testing::run_pipeline(base / "b", 20);
  for (const auto* run : {&first, &second}) {
    if (run->size() != 13 || run->back().code != 0) {
      fs::remove_all(base);
      return {false, "stage '" + run->back().args.front() + "' failed: " + run->back().err};
    }
  }
  const auto a = ttskill::testing::snapshot(base / "a");
  const auto b = ttskill::testing::snapshot(base / "b");
  std::size_t differing = 0;
  for (const auto& [name, bytes] : a) {
    const auto it = b.find(name);
    if (it == b.end() || it->second != bytes) ++differing;
  }
  fs::remove_all(base);
  const bool ok = a.size() == b.size() && differing == 0 && a.size() >= 16;
  return {ok, fmt("%zu files per run, %zu differ", a.size(), differing)};
}

}  // namespace

int main() {
  report(1, "AHP fidelity", ahp_fidelity);
  report(2, "total score spot checks", total_score_spots);
  Desk desk;
  bool desk_ok = true;
  try {
    desk = build_desk();
  } catch (const std::exception& e) {
    desk_ok = false;
    std::printf("desk corpus failed: %s\n", e.what());
  }
  report(3, "classification at desk scale", [&] { return desk_ok ? classification(desk) : Outcome{false, "no corpus"}; });
  report(4, "PCA retention, orthonormality, reconstruction", [&] { return desk_ok ? pca_checks(desk) : Outcome{false, "no corpus"}; });
  report(5, "Newton interpolation exactness", newton_exactness);
  report(6, "outlier removal vs 3-sigma oracle", outlier_oracle);
  report(7, "MLP gradient check", gradient_check);
  report(8, "softmax probabilities", softmax_check);
  report(9, "weighted F measure", f_measure_check);
  report(10, "windowing counts and overlap", windowing_check);
  report(11, "professional vs amateur scores", skill_ordering);
  report(12, "end-to-end determinism", pipeline_determinism);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
