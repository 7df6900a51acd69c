#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rio {

/// Failure categories shared by every module. The CLI prints the kind name
/// verbatim so scripts can match on it.
enum class ErrorKind {
  DimensionMismatch,
  NonUnitary,
  NotNormalized,
  InvalidArgument,
  LocalityViolation,
  MissingClassicalDependency,
  OverlappingBlocks,
  IncompleteBlocks,
  EmptyBlock,
  InvalidGroup,
  NotARepresentation,
  NonUnimodularFactor,
  NonUnitaryTarget,
  NonUnitaryM,
  SingularTransform,
  NotBlockDiagonal,
  MultiplicityNotOne,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rio
