#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qcoh {

enum class ErrorCode {
  NotHermitian,
  NoConvergence,
  ShapeMismatch,
  DimMismatch,
  NonFinite,
  InvalidState,
  LengthMismatch,
  AmbiguousGrouping,
  NotPositive,
  TraceNotOne,
  BadProfile,
  BadBasis,
  BadParameter,
  BadDimension,
  InvalidObservable,
  InvalidPovm,
  ZeroProbabilityOutcome,
  IncompatibleFineGraining,
  VectorOutsideEigenspace,
  NonOrthonormal,
  InvalidChannel,
  NotTracePreserving,
  NotUnital,
  NotGIO,
  NotIOForm,
  NotPSD,
  DiagonalNotOne,
  InvalidModel,
  NotIsometry,
  UnsupportedClass,
  ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qcoh
