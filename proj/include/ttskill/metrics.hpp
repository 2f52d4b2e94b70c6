#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "ttskill/labels.hpp"

namespace ttskill {

/// counts[true][predicted]
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, kNumStrokes>, kNumStrokes> counts{};

  std::uint64_t true_positives(std::size_t cls) const noexcept;
  std::uint64_t false_positives(std::size_t cls) const noexcept;
  std::uint64_t false_negatives(std::size_t cls) const noexcept;
  std::uint64_t total() const noexcept;
  double accuracy() const noexcept;
};

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted);
ConfusionMatrix confusion(std::span<const StrokeLabel> truth, std::span<const StrokeLabel> predicted);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

/// Zero denominators yield 0.
PrecisionRecall precision_recall(const ConfusionMatrix& m, std::size_t cls);

inline constexpr double kDefaultAlpha = 0.7;

struct FMeasureConfig {
  double alpha = kDefaultAlpha;
};

/// 2TP / (2TP + 2 alpha FN + 2 (1 - alpha) FP); zero denominator yields 0.
double f_measure(std::uint64_t tp, std::uint64_t fn, std::uint64_t fp, double alpha);
double f_measure(const ConfusionMatrix& m, std::size_t cls, const FMeasureConfig& cfg = {});

struct ClassReport {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
  std::uint64_t support = 0;
};

struct ClassificationReport {
  ConfusionMatrix matrix;
  std::array<ClassReport, kNumStrokes> classes{};
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f = 0.0;
  double accuracy = 0.0;
  double alpha = kDefaultAlpha;
};

ClassificationReport classification_report(const ConfusionMatrix& m, const FMeasureConfig& cfg = {});

/// Heat-map dump: header row of predicted names, one row per true class.
std::string confusion_csv(const ConfusionMatrix& m);
std::string confusion_svg(const ConfusionMatrix& m, const std::string& title);

}  // namespace ttskill
