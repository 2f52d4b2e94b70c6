#include "ttskill/features.hpp"

#include <algorithm>
#include <cmath>

#include "ttskill/error.hpp"

namespace ttskill {

namespace {

double ratio(double num, double den) {
  return std::abs(den) < kDenominatorEpsilon ? 0.0 : num / den;
}

}  // namespace

ChannelStats channel_stats(std::span<const double> x, std::span<const double> pair) {
  if (x.size() < 2) throw Error(ErrorCode::TooShort, "channel statistics need at least 2 samples");
  if (pair.size() != x.size()) throw Error(ErrorCode::DimensionMismatch, "correlation partner length differs");
  const double n = static_cast<double>(x.size());

  double sum = 0.0, sum_pair = 0.0, sum_sq = 0.0, sum_abs = 0.0, sum_sqrt_abs = 0.0, sum_4 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i];
    sum += v;
    sum_pair += pair[i];
    sum_sq += v * v;
    sum_abs += std::abs(v);
    sum_sqrt_abs += std::sqrt(std::abs(v));
    sum_4 += v * v * v * v;
  }
  const double mean = sum / n;
  const double mean_pair = sum_pair / n;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0, m2_pair = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - mean;
    const double dp = pair[i] - mean_pair;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
    m2_pair += dp * dp;
    cov += d * dp;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m2_pair /= n;
  cov /= n;

  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double peak_valley = *hi - *lo;
  const double mean_square = sum_sq / n;
  const double rms = std::sqrt(mean_square);
  const double mean_abs = sum_abs / n;
  const double mean_sqrt_abs = sum_sqrt_abs / n;

  ChannelStats s;
  s[Stat::Mean] = mean;
  s[Stat::Variance] = m2;
  s[Stat::Max] = *hi;
  s[Stat::Min] = *lo;
  s[Stat::PeakValley] = peak_valley;
  s[Stat::MeanSquare] = mean_square;
  s[Stat::Rms] = rms;
  s[Stat::Correlation] = std::clamp(ratio(cov, std::sqrt(m2) * std::sqrt(m2_pair)), -1.0, 1.0);
  s[Stat::Crest] = ratio(peak_valley, rms);
  s[Stat::Pulse] = ratio(peak_valley, mean_abs);
  s[Stat::Margin] = ratio(peak_valley, mean_sqrt_abs * mean_sqrt_abs);
  s[Stat::KurtosisFactor] = ratio(sum_4 / n, rms);
  s[Stat::Waveform] = ratio(rms, mean_abs);
  s[Stat::Skewness] = ratio(m3, std::pow(m2, 1.5));
  const double kurt_den = m2 * m2;
  s[Stat::Kurtosis] = std::abs(kurt_den) < kDenominatorEpsilon ? 0.0 : m4 / kurt_den - 3.0;
  return s;
}

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    out.reserve(kNumFeatures);
    for (const char* channel : kFeatureChannelNames)
      for (const char* stat : kStatNames) out.push_back(std::string(channel) + "_" + stat);
    return out;
  }();
  return names;
}

FeatureVector window_features(const MotionWindow& window) {
  const std::size_t n = window.size();
  std::array<std::vector<double>, kNumFeatureChannels> ch;
  for (auto& c : ch) c.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = window.frames[i];
    const std::array<const Vec3*, 3> sensors{&f.acc, &f.gyro, &f.angle};
    for (std::size_t s = 0; s < 3; ++s) {
      const Vec3& v = *sensors[s];
      ch[s * 4 + 0][i] = v[0];
      ch[s * 4 + 1][i] = v[1];
      ch[s * 4 + 2][i] = v[2];
      ch[s * 4 + 3][i] = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    }
  }

  FeatureVector out{};
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t a = 0; a < 4; ++a) {
      const std::size_t c = s * 4 + a;
      const std::size_t partner = a < 3 ? s * 4 + (a + 1) % 3 : ((s + 1) % 3) * 4 + 3;
      const auto stats = channel_stats(ch[c], ch[partner]);
      std::copy(stats.values.begin(), stats.values.end(), out.begin() + static_cast<std::ptrdiff_t>(c * kNumStats));
    }
  }
  return out;
}

Matrix extract_features(std::span<const MotionWindow> windows) {
  Matrix out(windows.size(), kNumFeatures);
  const auto count = static_cast<std::ptrdiff_t>(windows.size());
  // TooShort is the only failure and depends on window size alone.
  for (const auto& w : windows) {
    if (w.size() < 2) throw Error(ErrorCode::TooShort, "window has fewer than 2 frames");
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < count; ++r) {
    const auto f = window_features(windows[static_cast<std::size_t>(r)]);
    std::copy(f.begin(), f.end(), out.row(static_cast<std::size_t>(r)).begin());
  }
  return out;
}

namespace serial {
Matrix extract_features(std::span<const MotionWindow> windows) {
  Matrix out(windows.size(), kNumFeatures);
  for (std::size_t r = 0; r < windows.size(); ++r) {
    const auto f = window_features(windows[r]);
    std::copy(f.begin(), f.end(), out.row(r).begin());
  }
  return out;
}
}  // namespace serial

}  // namespace ttskill
