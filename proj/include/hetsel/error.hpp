#pragma once

#include <stdexcept>
#include <string>

namespace hetsel {

// Every failure mode exposed by the library. The CLI maps these onto its
// exit-code contract: validation -> 1, numerical -> 2, search-space cap -> 3.
enum class ErrorKind {
  PartitionNotDisjoint,
  PartitionIncomplete,
  ConstraintExceedsSet,
  DimensionMismatch,
  NonpositiveSigma,
  ZeroRow,
  IndexOutOfRange,
  CandidateNotAvailable,
  EmptySubset,
  NotEnoughCandidates,
  SearchSpaceTooLarge,
  RankDeficient,
  ZeroReference,
  ZeroSignalPower,
  DegenerateOptimum,
  DomainViolation,
  DeltaExceedsD,
  NumericalFailure,
  BadConfig,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind),
        detail_(message) {}

  ErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

  // Exit-code class for the CLI contract.
  int exit_code() const {
    switch (kind_) {
      case ErrorKind::SearchSpaceTooLarge:
        return 3;
      case ErrorKind::RankDeficient:
      case ErrorKind::NumericalFailure:
        return 2;
      default:
        return 1;
    }
  }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace hetsel
