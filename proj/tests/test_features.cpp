#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "ttskill/corpus.hpp"
#include "ttskill/features.hpp"

using namespace ttskill;
using ttskill::testing::error_of;
using ttskill::testing::rel_err;

namespace {

// Formula-by-formula restatement, one statistic per loop.
std::array<double, kNumStats> naive_stats(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  auto mean_of = [&](auto f) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += f(i);
    return s / n;
  };
  const double mean = mean_of([&](std::size_t i) { return x[i]; });
  const double ymean = mean_of([&](std::size_t i) { return y[i]; });
  const double var = mean_of([&](std::size_t i) { return (x[i] - mean) * (x[i] - mean); });
  const double yvar = mean_of([&](std::size_t i) { return (y[i] - ymean) * (y[i] - ymean); });
  double mx = x[0], mn = x[0];
  for (double v : x) {
    mx = std::max(mx, v);
    mn = std::min(mn, v);
  }
  const double pv = mx - mn;
  const double ms = mean_of([&](std::size_t i) { return x[i] * x[i]; });
  const double rms = std::sqrt(ms);
  const double cov = mean_of([&](std::size_t i) { return (x[i] - mean) * (y[i] - ymean); });
  const double mabs = mean_of([&](std::size_t i) { return std::abs(x[i]); });
  const double msqrt = mean_of([&](std::size_t i) { return std::sqrt(std::abs(x[i])); });
  const double m4raw = mean_of([&](std::size_t i) { return std::pow(x[i], 4); });
  const double m3 = mean_of([&](std::size_t i) { return std::pow(x[i] - mean, 3); });
  const double m4 = mean_of([&](std::size_t i) { return std::pow(x[i] - mean, 4); });
  auto safe = [](double a, double b) { return std::abs(b) < 1e-12 ? 0.0 : a / b; };
  return {mean,
          var,
          mx,
          mn,
          pv,
          ms,
          rms,
          safe(cov, std::sqrt(var * yvar)),
          safe(pv, rms),
          safe(pv, mabs),
          safe(pv, msqrt * msqrt),
          safe(m4raw, rms),
          safe(rms, mabs),
          safe(m3, std::pow(std::sqrt(var), 3)),
          std::abs(var * var) < 1e-12 ? 0.0 : m4 / (var * var) - 3.0};
}

void check_close(const ChannelStats& s, const std::array<double, kNumStats>& ref, double tol) {
  for (std::size_t k = 0; k < kNumStats; ++k) {
    INFO("stat " << kStatNames[k]);
    CHECK(std::abs(s.values[k] - ref[k]) <= tol * std::max(1.0, std::abs(ref[k])));
  }
}

}  // namespace

TEST_CASE("channel_stats arithmetic on [1,2,3]") {
  const std::vector<double> x{1, 2, 3};
  const auto s = channel_stats(x, x);
  CHECK(s[Stat::Mean] == 2.0);
  CHECK(s[Stat::Variance] == doctest::Approx(2.0 / 3.0));
  CHECK(s[Stat::Max] == 3.0);
  CHECK(s[Stat::Min] == 1.0);
  CHECK(s[Stat::PeakValley] == 2.0);
  CHECK(s[Stat::MeanSquare] == doctest::Approx(14.0 / 3.0));
  CHECK(s[Stat::Correlation] == doctest::Approx(1.0));
  const std::vector<double> one{1.0};
  CHECK(error_of([&] { channel_stats(one, one); }) == ErrorCode::TooShort);
}

TEST_CASE("channel_stats guards degenerate denominators") {
  const std::vector<double> zero(50, 0.0);
  for (double v : channel_stats(zero, zero).values) CHECK(v == 0.0);

  const std::vector<double> c(50, 2.5);
  const auto s = channel_stats(c, c);
  CHECK(s[Stat::Variance] == 0.0);
  CHECK(s[Stat::Skewness] == 0.0);
  CHECK(s[Stat::Kurtosis] == 0.0);
  CHECK(s[Stat::Correlation] == 0.0);
  CHECK(s[Stat::Crest] == 0.0);
  CHECK(s[Stat::Pulse] == 0.0);
  CHECK(s[Stat::Margin] == 0.0);
  // RMS over mean |x| of a nonzero constant is exactly one.
  CHECK(s[Stat::Waveform] == doctest::Approx(1.0));
}

TEST_CASE("Gaussian samples have small skewness and excess kurtosis") {
  CounterRng rng(77, 0);
  std::vector<double> x(1000), y(1000);
  for (auto& v : x) v = rng.normal();
  for (auto& v : y) v = rng.normal();
  const auto s = channel_stats(x, y);
  CHECK(std::abs(s[Stat::Skewness]) < 0.15);
  CHECK(std::abs(s[Stat::Kurtosis]) < 0.3);
}

TEST_CASE("channel_stats matches the naive oracle on random vectors") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    CounterRng rng(seed, 21);
    const std::size_t n = 2 + rng.below(300);
    const double shift = rng.uniform(-5, 5);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = shift + rng.normal() * rng.uniform(0.1, 3.0);
      y[i] = 0.5 * x[i] + rng.normal();
    }
    check_close(channel_stats(x, y), naive_stats(x, y), 1e-9);
  }
}

TEST_CASE("invariants: RMS^2 = mean square, correlation bounds, self correlation") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CounterRng rng(seed, 22);
    std::vector<double> x(64), y(64);
    for (auto& v : x) v = rng.normal() * 10;
    for (auto& v : y) v = rng.normal();
    const auto s = channel_stats(x, y);
    CHECK(rel_err(s[Stat::Rms] * s[Stat::Rms], s[Stat::MeanSquare]) <= 1e-9);
    CHECK(s[Stat::Correlation] >= -1.0);
    CHECK(s[Stat::Correlation] <= 1.0);
    CHECK(s[Stat::Variance] >= 0.0);
    CHECK(s[Stat::Max] >= s[Stat::Min]);
    CHECK(channel_stats(x, x)[Stat::Correlation] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("scale equivariance of channel statistics") {
  CounterRng rng(3, 23);
  std::vector<double> x(128), y(128);
  for (auto& v : x) v = 1.0 + rng.normal();
  for (auto& v : y) v = rng.normal();
  const double c = 3.7;
  std::vector<double> cx = x;
  for (auto& v : cx) v *= c;
  const auto a = channel_stats(x, y);
  const auto b = channel_stats(cx, y);
  for (Stat s : {Stat::Crest, Stat::Pulse, Stat::Margin, Stat::Waveform, Stat::Skewness, Stat::Kurtosis, Stat::Correlation}) {
    CHECK(rel_err(a[s], b[s]) <= 1e-9);
  }
  for (Stat s : {Stat::Mean, Stat::Max, Stat::Min, Stat::PeakValley, Stat::Rms}) CHECK(rel_err(c * a[s], b[s]) <= 1e-9);
  for (Stat s : {Stat::Variance, Stat::MeanSquare}) CHECK(rel_err(c * c * a[s], b[s]) <= 1e-9);
}

TEST_CASE("feature layout and names") {
  CHECK(kNumFeatures == 180);
  const auto& names = feature_names();
  REQUIRE(names.size() == 180);
  CHECK(names.front() == "acc_x_mean");
  CHECK(names[feature_index(FeatureChannel::GyroMag, Stat::Rms)] == "gyro_mag_rms");
  CHECK(names.back() == "angle_mag_kurtosis");
}

TEST_CASE("window_features on simple windows") {
  MotionWindow zero;
  zero.frames.resize(200);
  for (double v : window_features(zero)) CHECK(v == 0.0);

  MotionWindow w = zero;
  for (auto& f : w.frames) f.acc = {3, 4, 0};
  const auto fv = window_features(w);
  CHECK(fv[feature_index(FeatureChannel::AccMag, Stat::Mean)] == doctest::Approx(5.0));
  CHECK(fv[feature_index(FeatureChannel::AccMag, Stat::Variance)] == doctest::Approx(0.0));
}

TEST_CASE("window_features matches the oracle with cyclic correlation partners") {
  GenConfig cfg;
  cfg.strokes_per_class = 2;
  cfg.seed = 5;
  const auto corpus = build_corpus(cfg);
  for (const auto& w : corpus.stroke_windows()) {
    const auto fv = window_features(w);
    std::array<std::vector<double>, 12> ch;
    for (const auto& f : w.frames) {
      const std::array<Vec3, 3> sensors{f.acc, f.gyro, f.angle};
      for (int s = 0; s < 3; ++s) {
        for (int a = 0; a < 3; ++a) ch[s * 4 + a].push_back(sensors[s][a]);
        ch[s * 4 + 3].push_back(std::hypot(sensors[s][0], sensors[s][1], sensors[s][2]));
      }
    }
    const std::array<int, 12> partner{1, 2, 0, 7, 5, 6, 4, 11, 9, 10, 8, 3};
    for (int c = 0; c < 12; ++c) {
      const auto ref = naive_stats(ch[c], ch[partner[c]]);
      for (std::size_t k = 0; k < kNumStats; ++k) {
        const double v = fv[static_cast<std::size_t>(c) * kNumStats + k];
        CHECK(std::abs(v - ref[k]) <= 1e-9 * std::max(1.0, std::abs(ref[k])));
      }
    }
  }
}

TEST_CASE("extract_features stacks window_features") {
  GenConfig cfg;
  cfg.strokes_per_class = 1;
  const auto corpus = build_corpus(cfg);
  const auto m = extract_features(corpus.windows);
  REQUIRE(m.rows() == corpus.windows.size());
  for (std::size_t r = 0; r < m.rows(); r += 3) {
    const auto fv = window_features(corpus.windows[r]);
    for (std::size_t k = 0; k < kNumFeatures; ++k) CHECK(m(r, k) == fv[k]);
  }
}
