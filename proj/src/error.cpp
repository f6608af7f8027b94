#include "edrought/error.hpp"

namespace edrought {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::CorruptPayload: return "CorruptPayload";
    case ErrorKind::InvalidCalendarDate: return "InvalidCalendarDate";
    case ErrorKind::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorKind::InvalidDataset: return "InvalidDataset";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::EmptyRegion: return "EmptyRegion";
    case ErrorKind::AllCellsMissing: return "AllCellsMissing";
    case ErrorKind::InvalidBounds: return "InvalidBounds";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::IncompleteDay: return "IncompleteDay";
    case ErrorKind::EmptySeries: return "EmptySeries";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::InvalidQuantile: return "InvalidQuantile";
    case ErrorKind::DateMismatch: return "DateMismatch";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::EmptyGroup: return "EmptyGroup";
    case ErrorKind::MemberMismatch: return "MemberMismatch";
    case ErrorKind::SubsetTooLarge: return "SubsetTooLarge";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::PointOutsideGrid: return "PointOutsideGrid";
    case ErrorKind::ManifestError: return "ManifestError";
  }
  return "Unknown";
}

}  // namespace edrought
