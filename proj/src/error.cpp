#include "hetsel/error.hpp"

namespace hetsel {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PartitionNotDisjoint: return "PartitionNotDisjoint";
    case ErrorKind::PartitionIncomplete: return "PartitionIncomplete";
    case ErrorKind::ConstraintExceedsSet: return "ConstraintExceedsSet";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonpositiveSigma: return "NonpositiveSigma";
    case ErrorKind::ZeroRow: return "ZeroRow";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::CandidateNotAvailable: return "CandidateNotAvailable";
    case ErrorKind::EmptySubset: return "EmptySubset";
    case ErrorKind::NotEnoughCandidates: return "NotEnoughCandidates";
    case ErrorKind::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::ZeroReference: return "ZeroReference";
    case ErrorKind::ZeroSignalPower: return "ZeroSignalPower";
    case ErrorKind::DegenerateOptimum: return "DegenerateOptimum";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::DeltaExceedsD: return "DeltaExceedsD";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::BadConfig: return "BadConfig";
  }
  return "UnknownError";
}

}  // namespace hetsel
