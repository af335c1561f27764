#include "frm/common/error.hpp"

namespace frm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::CyclicTree: return "CyclicTree";
    case ErrorCode::UnknownEventId: return "UnknownEventId";
    case ErrorCode::BranchProbabilitySumError: return "BranchProbabilitySumError";
    case ErrorCode::UnresolvedStep: return "UnresolvedStep";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::UnknownUnit: return "UnknownUnit";
    case ErrorCode::Oversubscribed: return "Oversubscribed";
    case ErrorCode::NonPositiveShare: return "NonPositiveShare";
    case ErrorCode::MissingResidual: return "MissingResidual";
    case ErrorCode::NoMeasurements: return "NoMeasurements";
    case ErrorCode::MissingKciMeasurement: return "MissingKciMeasurement";
    case ErrorCode::NonMonotoneTable: return "NonMonotoneTable";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::TooFewEstimates: return "TooFewEstimates";
    case ErrorCode::InvalidIndicator: return "InvalidIndicator";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::EmptyJustification: return "EmptyJustification";
    case ErrorCode::UnauthorizedRole: return "UnauthorizedRole";
    case ErrorCode::IllegalTransition: return "IllegalTransition";
    case ErrorCode::NotConfirmed: return "NotConfirmed";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::UnknownOwner: return "UnknownOwner";
    case ErrorCode::ResidualExceedsInherent: return "ResidualExceedsInherent";
    case ErrorCode::ChainBroken: return "ChainBroken";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::EmptyPeriod: return "EmptyPeriod";
    case ErrorCode::UnknownAction: return "UnknownAction";
    case ErrorCode::UnknownSource: return "UnknownSource";
    case ErrorCode::NotNextPhase: return "NotNextPhase";
    case ErrorCode::GateFailed: return "GateFailed";
    case ErrorCode::HoldActive: return "HoldActive";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string detail)
    : std::runtime_error(std::string(to_string(code)) +
                         (detail.empty() ? "" : ": " + detail)),
      code_(code),
      detail_(std::move(detail)) {}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::SchemaViolation:
    case ErrorCode::MissingField:
    case ErrorCode::InvalidArgument:
    case ErrorCode::UnknownUnit:
    case ErrorCode::UnknownAction:
    case ErrorCode::VersionMismatch:
      return 400;
    case ErrorCode::NotFound:
    case ErrorCode::UnknownEventId:
    case ErrorCode::UnknownSource:
      return 404;
    case ErrorCode::HoldActive:
    case ErrorCode::GateFailed:
    case ErrorCode::NotNextPhase:
      return 409;
    case ErrorCode::Io:
      return 500;
    default:
      return 422;
  }
}

}  // namespace frm
