#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace frm {

enum class ErrorCode {
  // riskmodel
  CyclicTree,
  UnknownEventId,
  BranchProbabilitySumError,
  UnresolvedStep,
  InvalidDistribution,
  InvalidModel,
  // tolerance
  UnknownUnit,
  Oversubscribed,
  NonPositiveShare,
  MissingResidual,
  // indicators
  NoMeasurements,
  MissingKciMeasurement,
  NonMonotoneTable,
  InsufficientData,
  TooFewEstimates,
  InvalidIndicator,
  // identification
  DuplicateName,
  EmptyJustification,
  UnauthorizedRole,
  IllegalTransition,
  NotConfirmed,
  // register
  MissingField,
  UnknownOwner,
  ResidualExceedsInherent,
  ChainBroken,
  SchemaViolation,
  EmptyPeriod,
  // governance
  UnknownAction,
  UnknownSource,
  // lifecycle
  NotNextPhase,
  GateFailed,
  HoldActive,
  // gateway
  NotFound,
  InvalidArgument,
  VersionMismatch,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every domain failure in the engine is reported as an Error. `detail` carries
// the offending id, field path or sequence number when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

// Maps an error onto the HTTP status the API reports for it.
int http_status(ErrorCode code);

}  // namespace frm
