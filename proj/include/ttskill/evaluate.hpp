#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "ttskill/labels.hpp"
#include "ttskill/segment.hpp"

namespace ttskill {

inline constexpr std::size_t kNumLevels = 5;
inline constexpr std::size_t kNumIndicators = 15;

using LevelVector = std::array<double, kNumLevels>;

/// Positive reciprocal 5x5 pairwise-comparison matrix.
using AhpMatrix = std::array<std::array<double, kNumLevels>, kNumLevels>;

/// Expert judgments over strength, force direction, velocity, velocity direction, posture.
AhpMatrix standard_ahp_matrix() noexcept;

/// Published level weights (four digits) renormalized to sum exactly 1.
LevelVector published_level_weights() noexcept;

enum class AhpMethod {
  /// Normalize each column to sum 1, then average across each row.
  ColumnMean,
  /// Principal eigenvector by power iteration.
  Eigenvector,
};

struct AhpResult {
  LevelVector weights{};
  double lambda_max = 0.0;
  double consistency_index = 0.0;
  double consistency_ratio = 0.0;
  /// CR <= 0.1
  bool consistent = true;
};

inline constexpr double kRandomIndex5 = 1.12;

/// Throws NotReciprocal on non-positive entries or a_ij * a_ji != 1.
AhpResult ahp_weights(const AhpMatrix& a, AhpMethod method = AhpMethod::ColumnMean);

enum class IndicatorKind { Maximal, Interval };

struct IndicatorSpec {
  IndicatorKind kind = IndicatorKind::Maximal;
  double center = 0.0;
  double up = 0.0;
  double down = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double k1 = 1.0;
  double k2 = 1.0;
};

enum class Level : std::size_t { Strength, ForceDirection, Velocity, VelocityDirection, Posture };

/// Indicator i belongs to level i / 3, axis i % 3.
using IndicatorVector = std::array<double, kNumIndicators>;

struct StandardProfile {
  StrokeLabel stroke = StrokeLabel::ForehandAttack;
  std::array<IndicatorSpec, kNumIndicators> indicators{};
  std::size_t reference_count = 0;
};

struct ScoreReport {
  LevelVector q{};
  double total = 0.0;
  LevelVector weights{};
};

/// Mean-removed acceleration integrated by the cumulative trapezoid rule, v(0) = 0.
std::array<std::vector<double>, 3> derive_velocity(const MotionWindow& window);

/// The 15 raw indicator values of one window:
///   strength       mean |a - mean(a)| per axis
///   force dir.     direction angles (deg) of the window-mean acceleration
///   velocity       mean |v| per axis
///   velocity dir.  direction angles (deg) of the window-mean velocity
///   posture        window-mean Euler angles
IndicatorVector window_indicators(const MotionWindow& window);

/// Throws TooFew (< 2 windows) or MixedLabels.
StandardProfile build_profile(std::span<const MotionWindow> reference, StrokeLabel stroke);
StandardProfile build_profile(std::span<const IndicatorVector> reference, StrokeLabel stroke);

/// Floor for ranges and loss coefficients.
double profile_epsilon(double center) noexcept;

/// 1 - 1 / (1 + exp((value - center) / (up - down))). Throws DegenerateRange.
double score_maximal(double value, const IndicatorSpec& spec);

/// 1 on [lo, hi]; exp(-d / k) outside, or 1 - exp(-d / k) when `literal`.
double score_interval(double value, const IndicatorSpec& spec, bool literal = false);

LevelVector level_scores(const IndicatorVector& indicators, const StandardProfile& profile,
                         bool literal = false);
LevelVector level_scores(const MotionWindow& window, const StandardProfile& profile,
                         bool literal = false);

/// Throws BadWeights unless weights are non-negative and sum to 1 (+-1e-9).
double total_score(const LevelVector& q, const LevelVector& weights);

ScoreReport score_window(const MotionWindow& window, const StandardProfile& profile,
                         const LevelVector& weights, bool literal = false);

/// Scores every window against profiles[stroke of window]; OpenMP-parallel.
std::vector<ScoreReport> score_windows(std::span<const MotionWindow> windows,
                                       std::span<const StrokeLabel> strokes,
                                       std::span<const StandardProfile> profiles,
                                       const LevelVector& weights, bool literal = false);

}  // namespace ttskill
