#ifndef SAC_CODER_STREAM_HPP_
#define SAC_CODER_STREAM_HPP_

// Fixed-precision arithmetic (range) coder over synonymous sets, plus the
// self-describing container that carries everything the decoder needs.
//
// The coder keeps a 32-bit window of the code value: `low` is a 64-bit
// accumulator whose bit 32 is a pending carry, `range` is the window width in
// [2^24, 2^32]. Bytes leave the window once the range drops below 2^24; a run
// of 0xFF bytes that a later carry could still flip is held back as a
// counter. With table totals capped at 2^16 every positive count maps to a
// non-empty subinterval.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sac/model.hpp"
#include "sac/reconstruct.hpp"
#include "sac/synonymy.hpp"

namespace sac {

enum class CodingMode : std::uint8_t {
  kSyntactic = 0,  // plain arithmetic coding over symbols
  kSemantic = 1,   // arithmetic coding over synonymous sets
};

std::string_view to_string(CodingMode mode);

// Cumulative counts over the coding units of one mode: sets in semantic mode,
// symbols in syntactic mode. cum()[k] .. cum()[k+1] is unit k's bracket.
class CumulativeTable {
 public:
  CumulativeTable(const SynonymousPartition& partition, const ProbabilityTable& table,
                  CodingMode mode);

  std::span<const std::uint32_t> cum() const noexcept { return cum_; }
  std::uint32_t total() const noexcept { return cum_.back(); }
  std::size_t unit_count() const noexcept { return cum_.size() - 1; }
  std::uint32_t frequency(std::size_t unit) const { return cum_[unit + 1] - cum_[unit]; }

 private:
  std::vector<std::uint32_t> cum_;
};

class RangeEncoder {
 public:
  struct Output {
    std::vector<std::uint8_t> bytes;  // ceil(bit_count / 8) bytes, zero padded
    std::uint64_t bit_count = 0;
  };

  // Narrows to [cum_low, cum_high) / total. Requires cum_low < cum_high <=
  // total <= 2^16.
  void encode(std::uint32_t cum_low, std::uint32_t cum_high, std::uint32_t total);

  // Pins the value inside the final window with as few bits as possible and
  // drops trailing zero bits. The encoder must not be used afterwards.
  Output finish();

 private:
  void shift_low();

  std::uint64_t low_ = 0;
  std::uint64_t range_ = std::uint64_t{1} << 32;
  std::uint8_t cache_ = 0;
  bool has_cache_ = false;
  std::uint64_t pending_ = 0;  // held-back 0xFF bytes
  std::uint64_t shifts_ = 0;
  std::vector<std::uint8_t> out_;
};

class RangeDecoder {
 public:
  // Bytes past the end of `payload` read as zero.
  explicit RangeDecoder(std::span<const std::uint8_t> payload);

  // Returns the unit whose bracket holds the current value and consumes it.
  std::size_t decode(std::span<const std::uint32_t> cum);

  // Bytes pulled into the window so far, including the initial four.
  std::uint64_t bytes_consumed() const noexcept { return pos_; }

 private:
  std::uint8_t next_byte();

  std::span<const std::uint8_t> payload_;
  std::uint64_t pos_ = 0;
  std::uint64_t code_ = 0;
  std::uint64_t range_ = std::uint64_t{1} << 32;
};

inline constexpr std::uint8_t kContainerVersion = 1;

struct Container {
  CodingMode mode = CodingMode::kSemantic;
  std::uint64_t length = 0;  // m
  SynonymousPartition partition;
  ProbabilityTable table;
  std::uint64_t digest = 0;
  std::uint64_t payload_bits = 0;
  std::vector<std::uint8_t> payload;
};

// FNV-1a 64 over the fixed header fields (magic, version, mode, m) followed
// by the canonical partition text and the model sidecar text.
std::uint64_t container_digest(CodingMode mode, std::uint64_t length,
                               const SynonymousPartition& partition,
                               const ProbabilityTable& table);

// Big-endian layout: "SAC1", version u8, mode u8, m u64, alphabet u16, K u16,
// K x (u16 n, n x u16 member), total u32, alphabet x u16 count, digest u64,
// payload bit count u64, payload bytes.
std::vector<std::uint8_t> serialize_container(const Container& container);

// Throws kTruncatedPayload, kBadContainer or kDigestMismatch. A successful
// parse means every header field is consistent with the embedded digest.
Container parse_container(std::span<const std::uint8_t> bytes);

// Serialized size minus the payload bytes.
std::size_t header_bytes(const Container& container);

Container encode_stream(std::span<const Symbol> symbols,
                        const SynonymousPartition& partition,
                        const ProbabilityTable& table, CodingMode mode);

// Throws kDigestMismatch when `partition` or `table` differ from the
// container's, kDesync on a payload inconsistent with its length.
DecodedSequence decode_stream(const Container& container,
                              const SynonymousPartition& partition,
                              const ProbabilityTable& table,
                              const ExportPolicy& policy = {});

// Decodes with the partition and table carried by the container.
DecodedSequence decode_stream(const Container& container, const ExportPolicy& policy = {});

// Payload length in bits (sebits in semantic mode); header excluded.
std::uint64_t measure_code_length(const Container& container);

}  // namespace sac

#endif  // SAC_CODER_STREAM_HPP_
