#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ttskill/ingest.hpp"
#include "ttskill/labels.hpp"

namespace ttskill {

struct GenConfig {
  std::uint64_t seed = 1;
  std::size_t strokes_per_class = 100;
  /// Gaussian noise sigma and per-instance amplitude jitter, as a fraction of
  /// each sensor's reference amplitude.
  double noise_sigma = 0.05;
  double spike_rate = 0.002;
  double dropout_rate = 0.002;
  double idle_fraction = 0.5;
  /// Stroke duration in seconds.
  double period = 2.0;
  double sample_period = kDefaultSamplePeriod;

  /// Throws BadConfig.
  void validate() const;
  std::size_t stroke_samples() const;
  std::size_t idle_samples() const;
};

/// Ground-truth span [start, end) on the nominal sample grid; no label means idle.
struct Segment {
  std::size_t start = 0;
  std::size_t end = 0;
  std::optional<StrokeLabel> label;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct GeneratedData {
  SensorSeries series;
  std::vector<Segment> truth;
};

/// One channel of a stroke: env(t) * (offset + amplitude * sin(2 pi cycles t / T + phase)),
/// env(t) = sin^2(pi t / T), added on top of the idle frame.
struct ChannelTemplate {
  double amplitude = 0.0;
  double cycles = 1.0;
  double phase = 0.0;
  double offset = 0.0;
};

struct StrokeTemplate {
  std::array<ChannelTemplate, 9> channels{};
};

const std::array<StrokeTemplate, kNumStrokes>& stroke_templates() noexcept;

inline constexpr double kGravity = 9.81;

/// Reference amplitude of acc, gyro, angle used to scale noise.
inline constexpr std::array<double, 3> kSensorScale{20.0, 400.0, 30.0};

/// Noiseless template frames for one stroke, scaled by `amplitude_scale`.
std::vector<SampleFrame> stroke_frames(StrokeLabel label, std::size_t samples,
                                       double amplitude_scale = 1.0);

/// Frame of a motionless sensor.
SampleFrame idle_frame() noexcept;

GeneratedData generate(const GenConfig& cfg);

std::string serialize_truth(const std::vector<Segment>& truth);
std::vector<Segment> parse_truth(const std::string& text);

}  // namespace ttskill
