#ifndef SAC_EDGEMAP_HPP_
#define SAC_EDGEMAP_HPP_

// Binary edge maps and their 2x2-block symbol sequences.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sac/model.hpp"
#include "sac/synonymy.hpp"

namespace sac {

inline constexpr std::size_t kBlockAlphabetSize = 16;

// Row-major bits, 1 = edge pixel. Width and height are even.
struct EdgeMap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> bits;

  std::uint8_t at(std::size_t row, std::size_t col) const { return bits[row * width + col]; }
  std::uint8_t& at(std::size_t row, std::size_t col) { return bits[row * width + col]; }

  friend bool operator==(const EdgeMap&, const EdgeMap&) = default;
};

struct BlockSequence {
  std::vector<Symbol> symbols;
  std::size_t blocks_wide = 0;
  std::size_t blocks_high = 0;

  friend bool operator==(const BlockSequence&, const BlockSequence&) = default;
};

// Plain (P1) or raw (P4) PBM. Throws kMalformed with the byte offset, or
// kOddDimensions.
EdgeMap parse_pbm(std::span<const std::uint8_t> bytes);

// P1 with rows wrapped at 70 characters.
std::string serialize_pbm_plain(const EdgeMap& map);
// P4, rows padded to whole bytes.
std::vector<std::uint8_t> serialize_pbm_raw(const EdgeMap& map);

// Row-major blocks; the block anchored at (r, c) becomes
// 8*b(r,c) + 4*b(r,c+1) + 2*b(r+1,c) + b(r+1,c+1).
BlockSequence tokenize_blocks(const EdgeMap& map);

// Inverse of tokenize_blocks. Throws kLengthMismatch or kOutOfRange.
EdgeMap detokenize(const BlockSequence& blocks);

// Pooled block frequencies quantized to a total of 2^16. When a single block
// value is observed the table degenerates to a total of 1 (a lone count of
// 2^16 does not fit the container's 16-bit count field). Throws kAllZero.
ProbabilityTable estimate_model(std::span<const BlockSequence> sequences);

// Raw block frequencies, 16 entries.
std::vector<std::uint64_t> block_histogram(std::span<const BlockSequence> sequences);

// Random polygon outlines drawn with 1-pixel 8-connected lines. Deterministic
// in `seed`.
EdgeMap generate_synthetic(std::size_t width, std::size_t height, std::uint64_t seed);

// The shipped 11-set example partition over the 16 block symbols (same
// content as partitions/edge2x2-11.txt).
SynonymousPartition edge2x2_partition();
std::string edge2x2_partition_text();

}  // namespace sac

#endif  // SAC_EDGEMAP_HPP_
