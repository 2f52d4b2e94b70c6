#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ttskill/error.hpp"
#include "ttskill/labels.hpp"
#include "ttskill/matrix.hpp"
#include "ttskill/rng.hpp"

namespace ttskill {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::InsufficientSupport: return "InsufficientSupport";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::NotReciprocal: return "NotReciprocal";
    case ErrorCode::MixedLabels: return "MixedLabels";
    case ErrorCode::TooFew: return "TooFew";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::BadWeights: return "BadWeights";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::BadLabel: return "BadLabel";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::BadModel: return "BadModel";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

// --- rng --------------------------------------------------------------------

std::uint64_t mix64(std::uint64_t x) noexcept {
  // splitmix64 finalizer
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(mix64(mix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL))) {}

std::uint64_t CounterRng::next() noexcept {
  return mix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_);
}

double CounterRng::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

__extension__ using Uint128 = unsigned __int128;

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
  if (n <= 1) return 0;
  // Lemire's multiply-shift with rejection of the biased low range.
  const std::uint64_t threshold = (0 - n) % n;
  while (true) {
    const Uint128 product = static_cast<Uint128>(next()) * n;
    if (static_cast<std::uint64_t>(product) >= threshold) {
      return static_cast<std::uint64_t>(product >> 64);
    }
  }
}

// --- matrix -----------------------------------------------------------------

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) {
      throw Error(ErrorCode::DimensionMismatch, "ragged rows in matrix construction");
    }
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
  return out;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// --- labels -----------------------------------------------------------------

namespace {
constexpr std::array<std::string_view, kNumStrokes> kStrokeNames{
    "forehand_attack", "backhand_attack", "forehand_push",
    "backhand_push",   "forehand_chop",   "backhand_chop"};
}

StrokeLabel stroke_from_code(int code) {
  if (code < 0 || code >= static_cast<int>(kNumStrokes)) {
    throw Error(ErrorCode::BadLabel, "stroke code " + std::to_string(code) + " outside 0..5");
  }
  return static_cast<StrokeLabel>(code);
}

std::string_view stroke_name(StrokeLabel label) noexcept { return kStrokeNames[index(label)]; }

std::optional<StrokeLabel> stroke_from_name(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kNumStrokes; ++i) {
    if (kStrokeNames[i] == name) return static_cast<StrokeLabel>(i);
  }
  return std::nullopt;
}

}  // namespace ttskill
