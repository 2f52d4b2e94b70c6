#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ttskill {

enum class ErrorCode {
  MalformedRow,
  NonMonotonicTime,
  EmptyInput,
  TooShort,
  InsufficientSupport,
  SingleClass,
  NoConvergence,
  DimensionMismatch,
  DegenerateInput,
  NonFinite,
  EmptyClass,
  NotReciprocal,
  MixedLabels,
  TooFew,
  DegenerateRange,
  BadWeights,
  LengthMismatch,
  BadLabel,
  BadConfig,
  BadModel,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Data error raised by every pipeline stage. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ttskill
