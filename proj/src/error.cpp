#include "hodge/error.hpp"

namespace hodge {

std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::MissingFace: return "MissingFace";
    case ErrorCode::DuplicateSimplex: return "DuplicateSimplex";
    case ErrorCode::NonSortedTuple: return "NonSortedTuple";
    case ErrorCode::KNotFaceClosed: return "KNotFaceClosed";
    case ErrorCode::DimOutOfRange: return "DimOutOfRange";
    case ErrorCode::ScopeMismatch: return "ScopeMismatch";
    case ErrorCode::NoAmbient: return "NoAmbient";
    case ErrorCode::SpanningTreeBlocked: return "SpanningTreeBlocked";
    case ErrorCode::H2Mismatch: return "H2Mismatch";
    case ErrorCode::OrderInfeasible: return "OrderInfeasible";
    case ErrorCode::CannotReorder: return "CannotReorder";
    case ErrorCode::SequenceNotNormalized: return "SequenceNotNormalized";
    case ErrorCode::OrderMismatch: return "OrderMismatch";
    case ErrorCode::DependentInput: return "DependentInput";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::EpsilonUnderflow: return "EpsilonUnderflow";
    case ErrorCode::NotACycle: return "NotACycle";
    case ErrorCode::SingularM: return "SingularM";
    case ErrorCode::SolveDiverged: return "SolveDiverged";
    case ErrorCode::IterationStalled: return "IterationStalled";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace hodge
