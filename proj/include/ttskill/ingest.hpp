#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace ttskill {

using Vec3 = std::array<double, 3>;

inline constexpr double kDefaultSamplePeriod = 0.01;  // seconds, 100 Hz

/// One IMU record: acceleration in m/s^2, angular rate in deg/s, Euler angles in deg.
struct SampleFrame {
  double t = 0.0;
  Vec3 acc{};
  Vec3 gyro{};
  Vec3 angle{};

  friend bool operator==(const SampleFrame&, const SampleFrame&) = default;
};

/// Immutable, time-ordered stream of frames. Construction checks that every
/// value is finite and timestamps are strictly increasing. Spacing gaps are
/// allowed (dropouts); see validate_series.
class SensorSeries {
 public:
  SensorSeries() = default;
  SensorSeries(std::vector<SampleFrame> frames, double sample_period = kDefaultSamplePeriod);

  const std::vector<SampleFrame>& frames() const noexcept { return frames_; }
  double sample_period() const noexcept { return sample_period_; }
  std::size_t size() const noexcept { return frames_.size(); }
  bool empty() const noexcept { return frames_.empty(); }
  const SampleFrame& operator[](std::size_t i) const noexcept { return frames_[i]; }

  friend bool operator==(const SensorSeries&, const SensorSeries&) = default;

 private:
  std::vector<SampleFrame> frames_;
  double sample_period_ = kDefaultSamplePeriod;
};

/// A spacing violation between frame `index` and `index + 1`.
struct GapReport {
  std::size_t index = 0;
  double dt = 0.0;
  /// Implied count of dropped samples, round(dt / period) - 1, floored at 0.
  std::size_t missing = 0;

  friend bool operator==(const GapReport&, const GapReport&) = default;
};

inline constexpr std::string_view kSeriesHeader = "t,ax,ay,az,gx,gy,gz,rx,ry,rz";

SensorSeries parse_series(std::istream& in);
SensorSeries parse_series(std::string_view text);
SensorSeries read_series_file(const std::string& path);

std::vector<GapReport> validate_series(const SensorSeries& series);

/// Shortest round-trip decimal text, so parse_series(serialize_series(s)) == s.
std::string serialize_series(const SensorSeries& series);
void write_series_file(const std::string& path, const SensorSeries& series);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}  // namespace ttskill
