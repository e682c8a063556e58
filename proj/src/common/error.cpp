#include "iotledger/common/error.hpp"

namespace iotledger {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyBlock: return "EmptyBlock";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::FinalityBroken: return "FinalityBroken";
    case ErrorCode::InvalidDifficulty: return "InvalidDifficulty";
    case ErrorCode::ZeroTotalStake: return "ZeroTotalStake";
    case ErrorCode::InvalidPbftConfig: return "InvalidPbftConfig";
    case ErrorCode::DuplicateVoter: return "DuplicateVoter";
    case ErrorCode::UnknownValidator: return "UnknownValidator";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::InsufficientReplicas: return "InsufficientReplicas";
    case ErrorCode::Unavailable: return "Unavailable";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::InvalidGasSchedule: return "InvalidGasSchedule";
    case ErrorCode::RoleViolation: return "RoleViolation";
    case ErrorCode::DuplicateFrame: return "DuplicateFrame";
    case ErrorCode::ClientRefused: return "ClientRefused";
    case ErrorCode::Malformed: return "Malformed";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

}  // namespace iotledger
