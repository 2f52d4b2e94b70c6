#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ttskill/labels.hpp"
#include "ttskill/matrix.hpp"
#include "ttskill/preprocess.hpp"
#include "ttskill/segment.hpp"
#include "ttskill/synthgen.hpp"

namespace ttskill {

enum class WindowTruth { Idle, Stroke, Ambiguous };

struct WindowLabel {
  WindowTruth kind = WindowTruth::Ambiguous;
  std::optional<StrokeLabel> stroke;
};

/// Stroke if one stroke covers >= 75% of the window, idle if strokes cover
/// <= 25% of it, ambiguous otherwise.
WindowLabel label_window(std::size_t start, std::size_t width, std::span<const Segment> truth);

/// Sets window.label for stroke windows; returns the per-window truth.
std::vector<WindowLabel> attach_labels(std::vector<MotionWindow>& windows,
                                       std::span<const Segment> truth);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per-class seeded shuffle; round(test_fraction * class count) rows of each class go to test.
Split stratified_split(std::span<const StrokeLabel> labels, double test_fraction, std::uint64_t seed);

Matrix select_rows(const Matrix& x, std::span<const std::size_t> rows);

template <typename T>
std::vector<T> select(std::span<const T> items, std::span<const std::size_t> rows) {
  std::vector<T> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(items[r]);
  return out;
}

/// Generated stream carried through cleaning and windowing, with stroke windows labeled.
struct StrokeCorpus {
  SensorSeries clean;
  std::vector<Segment> truth;
  std::vector<MotionWindow> windows;
  std::vector<WindowLabel> window_truth;

  /// Windows whose truth is a stroke, in stream order.
  std::vector<MotionWindow> stroke_windows() const;
  std::vector<MotionWindow> idle_windows() const;
};

StrokeCorpus build_corpus(const GenConfig& cfg, const PreprocessOptions& preprocess = {},
                          std::size_t width = kDefaultWindow, double overlap = kDefaultOverlap);

}  // namespace ttskill
