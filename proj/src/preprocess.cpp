#include "ttskill/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "ttskill/error.hpp"

namespace ttskill {

ChannelSeries::ChannelSeries(std::vector<double> samples)
    : values(std::move(samples)), positions(values.size()), present(values.size(), true) {
  for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = static_cast<double>(i);
}

ChannelSeries::ChannelSeries(std::vector<double> samples, std::vector<double> positions_,
                             std::vector<bool> present_)
    : values(std::move(samples)), positions(std::move(positions_)), present(std::move(present_)) {
  if (positions.size() != values.size() || present.size() != values.size()) {
    throw Error(ErrorCode::LengthMismatch, "channel values, positions and mask differ in length");
  }
  for (std::size_t i = 1; i < positions.size(); ++i) {
    if (!(positions[i] > positions[i - 1])) {
      throw Error(ErrorCode::NonMonotonicTime, "channel positions must be strictly increasing");
    }
  }
}

std::size_t ChannelSeries::present_count() const noexcept {
  return static_cast<std::size_t>(std::count(present.begin(), present.end(), true));
}

bool ChannelSeries::gap_free() const noexcept {
  return std::all_of(present.begin(), present.end(), [](bool p) { return p; });
}

DiffStats diff_stats(std::span<const double> samples) {
  if (samples.size() < 2) throw Error(ErrorCode::TooShort, "diff_stats needs at least 2 samples");
  const double count = static_cast<double>(samples.size() - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) sum += samples[i + 1] - samples[i];
  const double ex = sum / count;
  double ss = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const double d = (samples[i + 1] - samples[i]) - ex;
    ss += d * d;
  }
  return {ex, std::sqrt(ss / count)};
}

ChannelSeries remove_outliers(const ChannelSeries& channel) {
  if (channel.size() < 2 || channel.present_count() < 2) {
    throw Error(ErrorCode::TooShort, "outlier removal needs at least 2 samples");
  }
  std::vector<std::size_t> heads;  // i such that x[i] and x[i+1] are both present
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < channel.size(); ++i) {
    if (channel.present[i] && channel.present[i + 1]) {
      heads.push_back(i);
      sum += channel.values[i + 1] - channel.values[i];
    }
  }
  ChannelSeries out = channel;
  if (heads.empty()) return out;

  const double count = static_cast<double>(heads.size());
  const double ex = sum / count;
  double ss = 0.0;
  for (auto i : heads) {
    const double d = (channel.values[i + 1] - channel.values[i]) - ex;
    ss += d * d;
  }
  const double sigma = std::sqrt(ss / count);
  if (sigma < 1e-12 * std::max(1.0, std::abs(ex))) return out;

  const double lo = ex - 3.0 * sigma;
  const double hi = ex + 3.0 * sigma;
  for (auto i : heads) {
    const double d = channel.values[i + 1] - channel.values[i];
    if (!(d > lo && d < hi)) out.present[i + 1] = false;
  }
  return out;
}

double newton_cubic(std::span<const double, 4> nodes, std::span<const double, 4> values, double x) {
  std::array<double, 4> coef{values[0], values[1], values[2], values[3]};
  for (std::size_t order = 1; order < 4; ++order) {
    for (std::size_t i = 3; i >= order; --i) {
      coef[i] = (coef[i] - coef[i - 1]) / (nodes[i] - nodes[i - order]);
    }
  }
  double p = coef[3];
  for (std::size_t i = 3; i-- > 0;) p = p * (x - nodes[i]) + coef[i];
  return p;
}

ChannelSeries newton_fill(const ChannelSeries& channel) {
  ChannelSeries out = channel;
  if (out.gap_free()) return out;
  if (out.present_count() < 4) {
    throw Error(ErrorCode::InsufficientSupport, "cubic fill needs at least 4 present samples");
  }
  const std::size_t n = out.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (out.present[j]) continue;
    const double xj = out.positions[j];

    // Walk outwards collecting the four nearest known samples; ties go left.
    std::array<std::size_t, 4> picked{};
    std::size_t found = 0;
    std::ptrdiff_t left = static_cast<std::ptrdiff_t>(j) - 1;
    std::size_t right = j + 1;
    auto advance_left = [&] {
      while (left >= 0 && !out.present[static_cast<std::size_t>(left)]) --left;
    };
    auto advance_right = [&] {
      while (right < n && !out.present[right]) ++right;
    };
    advance_left();
    advance_right();
    while (found < 4) {
      const bool has_left = left >= 0;
      const bool has_right = right < n;
      if (!has_left && !has_right) break;
      bool take_left = has_left;
      if (has_left && has_right) {
        take_left = xj - out.positions[static_cast<std::size_t>(left)] <= out.positions[right] - xj;
      }
      if (take_left) {
        picked[found++] = static_cast<std::size_t>(left--);
        advance_left();
      } else {
        picked[found++] = right++;
        advance_right();
      }
    }
    if (found < 4) {
      throw Error(ErrorCode::InsufficientSupport, "fewer than 4 support samples for a gap");
    }
    std::sort(picked.begin(), picked.end());
    std::array<double, 4> nodes{};
    std::array<double, 4> vals{};
    for (std::size_t k = 0; k < 4; ++k) {
      nodes[k] = out.positions[picked[k]];
      vals[k] = out.values[picked[k]];
    }
    out.values[j] = newton_cubic(nodes, vals, xj);
    out.present[j] = true;
  }
  return out;
}

FilterState::FilterState(double k0_, double delta_a_) : k0(k0_), delta_a(delta_a_) {
  if (!(k0 >= 0.0 && k0 <= 1.0)) throw Error(ErrorCode::BadConfig, "k0 must lie in [0, 1]");
  if (!(delta_a > 0.0) || !std::isfinite(delta_a)) {
    throw Error(ErrorCode::BadConfig, "delta_a must be positive");
  }
}

double FilterState::step(double x) noexcept {
  if (!y_prev) {
    y_prev = x;
    return x;
  }
  const double y = *y_prev;
  const double delta = std::abs(k0 * (x - y));
  const double m = delta > delta_a ? std::clamp((1.0 - delta_a / delta) * k0, 0.0, k0) : 0.0;
  const double next = m * x + (1.0 - m) * y;
  y_prev = next;
  return next;
}

ChannelSeries adaptive_filter(const ChannelSeries& channel, FilterState state) {
  ChannelSeries out = channel;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out.present[i]) out.values[i] = state.step(out.values[i]);
  }
  return out;
}

ChannelSeries preprocess_channel(const ChannelSeries& channel, const PreprocessOptions& options) {
  ChannelSeries out = channel;
  if (options.remove_outliers) out = remove_outliers(out);
  out = newton_fill(out);
  if (!options.filter) return out;

  double delta_a = 0.0;
  if (options.delta_a) {
    delta_a = *options.delta_a;
  } else {
    const auto calibration = std::min(options.calibration_samples, out.values.size());
    const auto end = calibration == 0 ? out.values.end() : out.values.begin() + static_cast<std::ptrdiff_t>(calibration);
    const auto [lo, hi] = std::minmax_element(out.values.begin(), end);
    delta_a = std::max(PreprocessOptions::kDefaultDeltaFraction * (*hi - *lo),
                       std::numeric_limits<double>::min());
  }
  return adaptive_filter(out, FilterState(options.k0, delta_a));
}

std::vector<ChannelSeries> split_channels(const SensorSeries& series) {
  if (series.empty()) throw Error(ErrorCode::EmptyInput, "empty series");
  const double t0 = series[0].t;
  const double period = series.sample_period();
  const auto grid_index = [&](double t) {
    return static_cast<std::size_t>(std::llround((t - t0) / period));
  };
  const std::size_t n = grid_index(series.frames().back().t) + 1;

  std::vector<ChannelSeries> channels(9);
  for (auto& ch : channels) {
    ch.values.assign(n, 0.0);
    ch.present.assign(n, false);
    ch.positions.resize(n);
    for (std::size_t i = 0; i < n; ++i) ch.positions[i] = static_cast<double>(i);
  }
  for (const auto& f : series.frames()) {
    const std::size_t i = grid_index(f.t);
    if (channels[0].present[i]) continue;  // jittered duplicate of an occupied slot
    const std::array<double, 9> v{f.acc[0],  f.acc[1],  f.acc[2],   f.gyro[0], f.gyro[1],
                                  f.gyro[2], f.angle[0], f.angle[1], f.angle[2]};
    for (std::size_t c = 0; c < 9; ++c) {
      channels[c].values[i] = v[c];
      channels[c].present[i] = true;
    }
  }
  return channels;
}

SensorSeries merge_channels(std::span<const ChannelSeries> channels, double t0, double period) {
  if (channels.size() != 9) throw Error(ErrorCode::DimensionMismatch, "expected 9 channels");
  const std::size_t n = channels[0].size();
  std::vector<SampleFrame> frames(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& f = frames[i];
    f.t = t0 + static_cast<double>(i) * period;
    for (std::size_t a = 0; a < 3; ++a) {
      f.acc[a] = channels[a].values[i];
      f.gyro[a] = channels[3 + a].values[i];
      f.angle[a] = channels[6 + a].values[i];
    }
  }
  return SensorSeries(std::move(frames), period);
}

SensorSeries preprocess_series(const SensorSeries& series, const PreprocessOptions& options) {
  auto channels = split_channels(series);
  std::vector<std::exception_ptr> errors(channels.size());
  const int count = static_cast<int>(channels.size());
#pragma omp parallel for schedule(static)
  for (int c = 0; c < count; ++c) {
    try {
      channels[c] = preprocess_channel(channels[c], options);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return merge_channels(channels, series[0].t, series.sample_period());
}

namespace serial {
SensorSeries preprocess_series(const SensorSeries& series, const PreprocessOptions& options) {
  auto channels = split_channels(series);
  for (auto& ch : channels) ch = preprocess_channel(ch, options);
  return merge_channels(channels, series[0].t, series.sample_period());
}
}  // namespace serial

}  // namespace ttskill
