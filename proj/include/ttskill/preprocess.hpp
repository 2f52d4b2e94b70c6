#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ttskill/ingest.hpp"

namespace ttskill {

/// One scalar channel with a known/missing mask. `positions` are sample
/// indices or times and must be strictly increasing.
struct ChannelSeries {
  std::vector<double> values;
  std::vector<double> positions;
  std::vector<bool> present;

  ChannelSeries() = default;
  /// Gap-free channel at integer positions 0..n-1.
  explicit ChannelSeries(std::vector<double> samples);
  ChannelSeries(std::vector<double> samples, std::vector<double> positions,
                std::vector<bool> present);

  std::size_t size() const noexcept { return values.size(); }
  std::size_t present_count() const noexcept;
  bool gap_free() const noexcept;
};

/// Mean and population standard deviation of the first differences.
struct DiffStats {
  double ex = 0.0;
  double sigma = 0.0;
};

DiffStats diff_stats(std::span<const double> samples);

/// Flags x[i+1] missing whenever x[i+1]-x[i] falls outside the open interval
/// (EX - 3 sigma, EX + 3 sigma). Differences are only taken between
/// index-adjacent present samples. Near-zero sigma disables removal.
ChannelSeries remove_outliers(const ChannelSeries& channel);

/// Fills every missing sample, left to right, with the cubic Newton
/// interpolant through the four nearest present samples (earlier fills count
/// as present).
ChannelSeries newton_fill(const ChannelSeries& channel);

/// Cubic Newton divided-difference interpolant through four nodes, evaluated at x.
double newton_cubic(std::span<const double, 4> nodes, std::span<const double, 4> values, double x);

/// Adaptive exponential smoother. m is recomputed each step from the jump of a
/// provisional output taken at m = k0:
///   delta = k0 * (x - y_prev)
///   m     = clamp((1 - delta_a / |delta|) * k0, 0, k0) if |delta| > delta_a, else 0
///   y     = m * x + (1 - m) * y_prev
struct FilterState {
  double k0 = 0.3;
  double delta_a = 0.05;
  std::optional<double> y_prev;

  FilterState() = default;
  FilterState(double k0_, double delta_a_);

  double step(double x) noexcept;
};

ChannelSeries adaptive_filter(const ChannelSeries& channel, FilterState state);

struct PreprocessOptions {
  double k0 = 0.3;
  /// Motion threshold; when unset, 0.05 * peak-valley of the calibration segment.
  std::optional<double> delta_a;
  /// Leading samples recorded at rest that form the calibration segment;
  /// 0 calibrates on the whole channel.
  std::size_t calibration_samples = 100;
  bool remove_outliers = true;
  bool filter = true;

  static constexpr double kDefaultDeltaFraction = 0.05;
};

/// remove_outliers -> newton_fill -> adaptive_filter.
ChannelSeries preprocess_channel(const ChannelSeries& channel, const PreprocessOptions& options = {});

/// Places frames on the uniform grid t0 + i * period, marking dropped rows
/// missing. Returns the nine channels (ax..rz) in CSV column order.
std::vector<ChannelSeries> split_channels(const SensorSeries& series);
SensorSeries merge_channels(std::span<const ChannelSeries> channels, double t0, double period);

/// Cleans all nine channels concurrently and returns a gap-free uniformly
/// spaced series.
SensorSeries preprocess_series(const SensorSeries& series, const PreprocessOptions& options = {});

namespace serial {
SensorSeries preprocess_series(const SensorSeries& series, const PreprocessOptions& options = {});
}

}  // namespace ttskill
