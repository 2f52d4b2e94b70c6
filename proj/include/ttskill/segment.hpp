#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ttskill/ingest.hpp"
#include "ttskill/labels.hpp"
#include "ttskill/smo.hpp"

namespace ttskill {

inline constexpr std::size_t kDefaultWindow = 200;
inline constexpr double kDefaultOverlap = 0.5;

/// W contiguous frames cut from a series, the unit of classification and scoring.
struct MotionWindow {
  std::size_t start_index = 0;
  std::vector<SampleFrame> frames;
  double sample_period = kDefaultSamplePeriod;
  std::optional<StrokeLabel> label;

  std::size_t size() const noexcept { return frames.size(); }
};

std::size_t window_stride(std::size_t width, double overlap);

/// Windows start at 0, stride, 2*stride, ...; a trailing partial window is dropped.
std::vector<MotionWindow> slide_windows(const SensorSeries& series,
                                        std::size_t width = kDefaultWindow,
                                        double overlap = kDefaultOverlap);

/// Window starting at `start` of `width` frames.
MotionWindow cut_window(const SensorSeries& series, std::size_t start, std::size_t width);

using ActivationFeatures = std::array<double, 6>;

inline const std::array<std::string, 6> kActivationFeatureNames{
    "acc_mag_mean", "acc_mag_variance", "acc_mag_peak_valley",
    "gyro_mag_mean", "gyro_mag_variance", "gyro_mag_peak_valley"};

/// [mean, variance, peak-valley] of |acc| followed by the same of |gyro|.
ActivationFeatures activation_features(const MotionWindow& window);

/// Linear soft-margin gate: active iff w.x + b > 0.
struct LinearSvmModel {
  std::vector<double> w;
  double b = 0.0;
  double c = 1.0;
  std::vector<std::string> feature_names;

  double decision(std::span<const double> x) const;
};

/// Trains the soft-margin linear SVM by SMO on the dual. Labels: true = +1.
LinearSvmModel train_linear_svm(const std::vector<std::vector<double>>& x,
                                const std::vector<bool>& positive,
                                const SmoOptions& options = {});

LinearSvmModel train_activation(const std::vector<std::pair<MotionWindow, bool>>& labeled,
                                const SmoOptions& options = {});

bool is_active(const MotionWindow& window, const LinearSvmModel& model);

}  // namespace ttskill
