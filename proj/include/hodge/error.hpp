#pragma once
#include <stdexcept>
#include <string>
#include <string_view>

namespace hodge {

enum class ErrorCode {
  MissingFace,
  DuplicateSimplex,
  NonSortedTuple,
  KNotFaceClosed,
  DimOutOfRange,
  ScopeMismatch,
  NoAmbient,
  SpanningTreeBlocked,
  H2Mismatch,
  OrderInfeasible,
  CannotReorder,
  SequenceNotNormalized,
  OrderMismatch,
  DependentInput,
  RankDeficient,
  EpsilonUnderflow,
  NotACycle,
  SingularM,
  SolveDiverged,
  IterationStalled,
  TooLarge,
  NotSymmetric,
  InvalidParams,
  InvalidInput,
  Io,
};

std::string_view to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(to_string(code)) + ": " + msg), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hodge
