#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace netcca {

enum class ErrorCode {
  kZeroVarianceColumn,
  kNonFinite,
  kDimensionMismatch,
  kInvalidArgument,
  kRankDeficient,
  kDegenerateBasis,
  kUnknownFeature,
  kSelfLoop,
  kParseError,
  kTooLarge,
  kInfeasible,
  kAllDegenerate,
  kDegenerateGrid,
  kNotPositiveSemidefinite,
  kFoldFitFailure,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; `code()` identifies the failure and
// `index()` carries the offending column, line or fold when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(message), code_(code), index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace netcca
