#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace ttskill {

enum class StrokeLabel : int {
  ForehandAttack = 0,
  BackhandAttack = 1,
  ForehandPush = 2,
  BackhandPush = 3,
  ForehandChop = 4,
  BackhandChop = 5,
};

inline constexpr std::size_t kNumStrokes = 6;

inline constexpr std::array<StrokeLabel, kNumStrokes> kAllStrokes{
    StrokeLabel::ForehandAttack, StrokeLabel::BackhandAttack, StrokeLabel::ForehandPush,
    StrokeLabel::BackhandPush,   StrokeLabel::ForehandChop,   StrokeLabel::BackhandChop};

constexpr int code(StrokeLabel label) noexcept { return static_cast<int>(label); }
constexpr std::size_t index(StrokeLabel label) noexcept { return static_cast<std::size_t>(label); }

/// Throws Error(BadLabel) outside 0..5.
StrokeLabel stroke_from_code(int code);

std::string_view stroke_name(StrokeLabel label) noexcept;
std::optional<StrokeLabel> stroke_from_name(std::string_view name) noexcept;

}  // namespace ttskill
