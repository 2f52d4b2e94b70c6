#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ttskill/matrix.hpp"
#include "ttskill/segment.hpp"

namespace ttskill {

inline constexpr std::size_t kNumStats = 15;
inline constexpr std::size_t kNumFeatureChannels = 12;
inline constexpr std::size_t kNumFeatures = kNumStats * kNumFeatureChannels;  // 180

/// Ratio features whose denominator is below this magnitude are defined as 0.
inline constexpr double kDenominatorEpsilon = 1e-12;

enum class Stat : std::size_t {
  Mean,
  Variance,
  Max,
  Min,
  PeakValley,
  MeanSquare,
  Rms,
  Correlation,
  Crest,
  Pulse,
  Margin,
  KurtosisFactor,
  Waveform,
  Skewness,
  Kurtosis,
};

enum class FeatureChannel : std::size_t {
  AccX, AccY, AccZ, AccMag,
  GyroX, GyroY, GyroZ, GyroMag,
  AngleX, AngleY, AngleZ, AngleMag,
};

inline constexpr std::array<const char*, kNumStats> kStatNames{
    "mean", "variance", "max", "min", "peak_valley", "mean_square", "rms", "corr",
    "crest", "pulse", "margin", "kurtosis_factor", "waveform", "skewness", "kurtosis"};

inline constexpr std::array<const char*, kNumFeatureChannels> kFeatureChannelNames{
    "acc_x",   "acc_y",   "acc_z",   "acc_mag",   "gyro_x",  "gyro_y",
    "gyro_z",  "gyro_mag", "angle_x", "angle_y",   "angle_z", "angle_mag"};

/// The fifteen time-domain statistics of one channel, population (1/n) forms.
struct ChannelStats {
  std::array<double, kNumStats> values{};

  double operator[](Stat s) const noexcept { return values[static_cast<std::size_t>(s)]; }
  double& operator[](Stat s) noexcept { return values[static_cast<std::size_t>(s)]; }
};

/// `pair` is the partner channel for the correlation coefficient.
ChannelStats channel_stats(std::span<const double> x, std::span<const double> pair);

using FeatureVector = std::array<double, kNumFeatures>;

constexpr std::size_t feature_index(FeatureChannel channel, Stat stat) noexcept {
  return static_cast<std::size_t>(channel) * kNumStats + static_cast<std::size_t>(stat);
}

/// `<channel>_<stat>` for every column, in layout order.
const std::vector<std::string>& feature_names();

/// 12 channels (x, y, z, magnitude for acc, gyro, angle) x 15 stats.
/// Correlation partners: x->y, y->z, z->x, and magnitude -> the next sensor's
/// magnitude (acc -> gyro -> angle -> acc).
FeatureVector window_features(const MotionWindow& window);

/// One row per window, OpenMP-parallel over windows.
Matrix extract_features(std::span<const MotionWindow> windows);

namespace serial {
Matrix extract_features(std::span<const MotionWindow> windows);
}

}  // namespace ttskill
