#include "ttskill/corpus.hpp"

#include <algorithm>
#include <cmath>

#include "ttskill/error.hpp"
#include "ttskill/rng.hpp"

namespace ttskill {

WindowLabel label_window(std::size_t start, std::size_t width, std::span<const Segment> truth) {
  const std::size_t end = start + width;
  std::size_t covered = 0;
  std::size_t best = 0;
  std::optional<StrokeLabel> best_label;
  for (const auto& seg : truth) {
    if (!seg.label || seg.end <= start || seg.start >= end) continue;
    const std::size_t overlap = std::min(seg.end, end) - std::max(seg.start, start);
    covered += overlap;
    if (overlap > best) {
      best = overlap;
      best_label = seg.label;
    }
  }
  const double w = static_cast<double>(width);
  if (static_cast<double>(best) >= 0.75 * w) return {WindowTruth::Stroke, best_label};
  if (static_cast<double>(covered) <= 0.25 * w) return {WindowTruth::Idle, std::nullopt};
  return {WindowTruth::Ambiguous, std::nullopt};
}

std::vector<WindowLabel> attach_labels(std::vector<MotionWindow>& windows, std::span<const Segment> truth) {
  std::vector<WindowLabel> out;
  out.reserve(windows.size());
  for (auto& w : windows) {
    out.push_back(label_window(w.start_index, w.size(), truth));
    w.label = out.back().stroke;
  }
  return out;
}

Split stratified_split(std::span<const StrokeLabel> labels, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction >= 0.0 && test_fraction <= 1.0)) {
    throw Error(ErrorCode::BadConfig, "test fraction must lie in [0, 1]");
  }
  Split split;
  for (auto s : kAllStrokes) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == s) rows.push_back(i);
    CounterRng rng(seed, static_cast<std::uint64_t>(code(s)));
    rng.shuffle(std::span(rows));
    const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(rows.size())));
    split.test.insert(split.test.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_test));
    split.train.insert(split.train.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_test), rows.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

Matrix select_rows(const Matrix& x, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= x.rows()) throw Error(ErrorCode::DimensionMismatch, "row index out of range");
    std::copy(x.row(rows[i]).begin(), x.row(rows[i]).end(), out.row(i).begin());
  }
  return out;
}

std::vector<MotionWindow> StrokeCorpus::stroke_windows() const {
  std::vector<MotionWindow> out;
  for (std::size_t i = 0; i < windows.size(); ++i)
    if (window_truth[i].kind == WindowTruth::Stroke) out.push_back(windows[i]);
  return out;
}

std::vector<MotionWindow> StrokeCorpus::idle_windows() const {
  std::vector<MotionWindow> out;
  for (std::size_t i = 0; i < windows.size(); ++i)
    if (window_truth[i].kind == WindowTruth::Idle) out.push_back(windows[i]);
  return out;
}

StrokeCorpus build_corpus(const GenConfig& cfg, const PreprocessOptions& preprocess, std::size_t width,
                          double overlap) {
  auto data = generate(cfg);
  StrokeCorpus corpus;
  corpus.clean = preprocess_series(data.series, preprocess);
  corpus.truth = std::move(data.truth);
  corpus.windows = slide_windows(corpus.clean, width, overlap);
  corpus.window_truth = attach_labels(corpus.windows, corpus.truth);
  return corpus;
}

}  // namespace ttskill
