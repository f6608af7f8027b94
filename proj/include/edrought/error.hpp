#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace edrought {

enum class ErrorKind {
  BadMagic,
  CorruptPayload,
  InvalidCalendarDate,
  NonMonotonicTime,
  InvalidDataset,
  IoFailure,
  EmptyRegion,
  AllCellsMissing,
  InvalidBounds,
  NonFiniteInput,
  IncompleteDay,
  EmptySeries,
  NonFiniteValue,
  InvalidQuantile,
  DateMismatch,
  GridMismatch,
  EmptyGroup,
  MemberMismatch,
  SubsetTooLarge,
  InvalidConfig,
  PointOutsideGrid,
  ManifestError,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; `kind()` is the
// stable part, the message carries context (path, index, date).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace edrought
