#include "netcca/error.hpp"

namespace netcca {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroVarianceColumn: return "ZeroVarianceColumn";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kDegenerateBasis: return "DegenerateBasis";
    case ErrorCode::kUnknownFeature: return "UnknownFeature";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kAllDegenerate: return "AllDegenerate";
    case ErrorCode::kDegenerateGrid: return "DegenerateGrid";
    case ErrorCode::kNotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorCode::kFoldFitFailure: return "FoldFitFailure";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace netcca
