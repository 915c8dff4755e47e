#include "sac/error.hpp"

namespace sac {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAllZero: return "AllZero";
    case ErrorCode::kBadDistribution: return "BadDistribution";
    case ErrorCode::kTotalTooSmall: return "TotalTooSmall";
    case ErrorCode::kInvalidTable: return "InvalidTable";
    case ErrorCode::kInvalidPartition: return "InvalidPartition";
    case ErrorCode::kEmptyPartition: return "EmptyPartition";
    case ErrorCode::kSyntax: return "Syntax";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kZeroProbability: return "ZeroProbability";
    case ErrorCode::kZeroMassSet: return "ZeroMassSet";
    case ErrorCode::kDesync: return "Desync";
    case ErrorCode::kDigestMismatch: return "DigestMismatch";
    case ErrorCode::kTruncatedPayload: return "TruncatedPayload";
    case ErrorCode::kBadContainer: return "BadContainer";
    case ErrorCode::kMalformed: return "Malformed";
    case ErrorCode::kOddDimensions: return "OddDimensions";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace sac
