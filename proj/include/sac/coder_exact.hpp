#ifndef SAC_CODER_EXACT_HPP_
#define SAC_CODER_EXACT_HPP_

// Reference arithmetic coder over synonymous sets in exact rational
// arithmetic. Slow by construction: state grows with the message length, so
// it is meant for messages of up to about a thousand symbols. It is the
// oracle the stream coder is checked against.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sac/model.hpp"
#include "sac/rational.hpp"
#include "sac/reconstruct.hpp"
#include "sac/synonymy.hpp"

namespace sac {

class BitString {
 public:
  BitString() = default;

  // Characters must be '0' or '1'.
  static BitString from_string(std::string_view text);
  // First `bit_count` bits of `bytes`, most significant bit first.
  static BitString from_bytes(std::span<const std::uint8_t> bytes,
                              std::uint64_t bit_count);

  void push_back(bool bit) { bits_.push_back(bit ? 1 : 0); }
  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }

  std::string to_string() const;
  // The binary fraction 0.b1 b2 ... bl.
  Rational value() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct ExactInterval {
  Rational low{0};
  Rational length{1};

  Rational high() const { return low + length; }
  friend bool operator==(const ExactInterval&, const ExactInterval&) = default;
};

// low' = low + length * cum_below, length' = length * p_set.
// Throws kZeroProbability when p_set == 0 and kOutOfRange when the bracket
// [cum_below, cum_below + p_set) leaves [0, 1].
ExactInterval update_interval(const ExactInterval& iv, const Rational& cum_below,
                              const Rational& p_set);

// Shortest bit string whose binary fraction lies in [low, high); the smallest
// such fraction when several of the minimum length exist. Requires
// 0 <= low < high <= 1.
BitString shortest_fraction(const Rational& low, const Rational& high);

// Partition in force at each position: either one partition for every
// position or an explicit per-position list.
class PartitionSequence {
 public:
  static PartitionSequence unified(SynonymousPartition partition);
  explicit PartitionSequence(std::vector<SynonymousPartition> per_position);

  // Per-position lists must cover position `i`.
  const SynonymousPartition& at(std::size_t i) const;
  bool is_unified() const noexcept { return unified_; }
  std::size_t size() const noexcept { return partitions_.size(); }

 private:
  PartitionSequence() = default;

  std::vector<SynonymousPartition> partitions_;
  bool unified_ = false;
};

struct ExactEncoding {
  BitString code;
  ExactInterval interval;        // final [L_m, H_m)
  std::vector<SetIndex> sets;    // encoded set sequence
};

ExactEncoding encode_exact_detailed(std::span<const Symbol> symbols,
                                    const PartitionSequence& partitions,
                                    const ProbabilityTable& table);

BitString encode_exact(std::span<const Symbol> symbols,
                       const PartitionSequence& partitions,
                       const ProbabilityTable& table);

// Decodes `length` positions. Throws kDesync when the codeword does not fall
// inside the final interval.
DecodedSequence decode_exact(const BitString& code, std::uint64_t length,
                             const PartitionSequence& partitions,
                             const ProbabilityTable& table,
                             const ExportPolicy& policy = {});

struct CodeLengthBound {
  std::int64_t code_length;  // |codeword| in bits
  double bound;              // -log2 q + 2
  bool holds;                // decided exactly, not from `bound`
  Rational q;                // final interval length
};

CodeLengthBound code_length_bound(std::span<const Symbol> symbols,
                               const PartitionSequence& partitions,
                               const ProbabilityTable& table);

}  // namespace sac

#endif  // SAC_CODER_EXACT_HPP_
