#ifndef SAC_ERROR_HPP_
#define SAC_ERROR_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sac {

enum class ErrorCode {
  kAllZero,
  kBadDistribution,
  kTotalTooSmall,
  kInvalidTable,
  kInvalidPartition,
  kEmptyPartition,
  kSyntax,
  kOutOfRange,
  kZeroProbability,
  kZeroMassSet,
  kDesync,
  kDigestMismatch,
  kTruncatedPayload,
  kBadContainer,
  kMalformed,
  kOddDimensions,
  kLengthMismatch,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every recoverable failure in the library is reported as an Error. `where`
// carries the sequence position, line number or byte offset when one applies.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::uint64_t> where = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        where_(where) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::uint64_t> where() const noexcept { return where_; }

 private:
  ErrorCode code_;
  std::optional<std::uint64_t> where_;
};

}  // namespace sac

#endif  // SAC_ERROR_HPP_
