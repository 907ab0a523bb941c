#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mrnews {

enum class ErrorKind {
  MissingColumn,
  NonPositivePrice,
  EmptyPanel,
  WeightMismatch,
  IntervalNotDivisor,
  WindowTooShort,
  SizeMismatch,
  SeriesTooShort,
  EmptyDay,
  TooFewReturns,
  InvalidRange,
  AxisMismatch,
  InsufficientHistory,
  WindowTooLong,
  ParseError,
  ConfigInvalid,
  DataError,
  ComputeError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::NonPositivePrice: return "NonPositivePrice";
    case ErrorKind::EmptyPanel: return "EmptyPanel";
    case ErrorKind::WeightMismatch: return "WeightMismatch";
    case ErrorKind::IntervalNotDivisor: return "IntervalNotDivisor";
    case ErrorKind::WindowTooShort: return "WindowTooShort";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::SeriesTooShort: return "SeriesTooShort";
    case ErrorKind::EmptyDay: return "EmptyDay";
    case ErrorKind::TooFewReturns: return "TooFewReturns";
    case ErrorKind::InvalidRange: return "InvalidRange";
    case ErrorKind::AxisMismatch: return "AxisMismatch";
    case ErrorKind::InsufficientHistory: return "InsufficientHistory";
    case ErrorKind::WindowTooLong: return "WindowTooLong";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::DataError: return "DataError";
    case ErrorKind::ComputeError: return "ComputeError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mrnews
