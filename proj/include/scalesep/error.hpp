#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scalesep {

enum class ErrorKind {
  // input / contract errors
  MissingColumn,
  NonUniformGrid,
  MalformedNumber,
  GridMismatch,
  ColumnOutOfRange,
  EmptyGauge,
  IoFailure,
  TooFewSamples,
  TooFewColumns,
  InvalidPolicyParameter,
  ShapeMismatch,
  RankTooLarge,
  InvalidSpan,
  InvalidStep,
  OutOfRange,
  InvalidArgument,
  // numeric failures
  SingularTruncation,
  EigenFailure,
  NumericOverflow,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for failures of the numerics themselves rather than of the input.
bool is_numeric(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace scalesep
