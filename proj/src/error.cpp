#include "rio/error.hpp"

namespace rio {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonUnitary: return "NonUnitary";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::LocalityViolation: return "LocalityViolation";
    case ErrorKind::MissingClassicalDependency: return "MissingClassicalDependency";
    case ErrorKind::OverlappingBlocks: return "OverlappingBlocks";
    case ErrorKind::IncompleteBlocks: return "IncompleteBlocks";
    case ErrorKind::EmptyBlock: return "EmptyBlock";
    case ErrorKind::InvalidGroup: return "InvalidGroup";
    case ErrorKind::NotARepresentation: return "NotARepresentation";
    case ErrorKind::NonUnimodularFactor: return "NonUnimodularFactor";
    case ErrorKind::NonUnitaryTarget: return "NonUnitaryTarget";
    case ErrorKind::NonUnitaryM: return "NonUnitaryM";
    case ErrorKind::SingularTransform: return "SingularTransform";
    case ErrorKind::NotBlockDiagonal: return "NotBlockDiagonal";
    case ErrorKind::MultiplicityNotOne: return "MultiplicityNotOne";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace rio
