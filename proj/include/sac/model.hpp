#ifndef SAC_MODEL_HPP_
#define SAC_MODEL_HPP_

// Static probability models shared by encoder and decoder. Probabilities are
// integer counts over an explicit total so that both ends compute identical
// interval arithmetic.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sac {

using Symbol = std::uint32_t;

// Largest table total the stream coder accepts. Also the default total used
// when estimating a model from data.
inline constexpr std::uint32_t kMaxTableTotal = 1u << 16;

class Alphabet {
 public:
  explicit Alphabet(std::size_t size);

  std::size_t size() const noexcept { return size_; }
  bool contains(Symbol s) const noexcept { return s < size_; }

 private:
  std::size_t size_;
};

// Per-symbol counts over `total`. Construction does not validate; use
// validate() or require_valid() before coding with an externally supplied
// table. Tables returned by the factory functions below are always valid.
class ProbabilityTable {
 public:
  ProbabilityTable() = default;
  ProbabilityTable(std::vector<std::uint32_t> counts, std::uint64_t total)
      : counts_(std::move(counts)), total_(total) {}

  // Total is the sum of `counts`.
  static ProbabilityTable from_counts(std::vector<std::uint32_t> counts);

  std::span<const std::uint32_t> counts() const noexcept { return counts_; }
  std::uint32_t count(Symbol s) const { return counts_.at(s); }
  std::uint64_t total() const noexcept { return total_; }
  std::size_t size() const noexcept { return counts_.size(); }
  double probability(Symbol s) const {
    return static_cast<double>(counts_.at(s)) / static_cast<double>(total_);
  }

  friend bool operator==(const ProbabilityTable&,
                         const ProbabilityTable&) = default;

 private:
  std::vector<std::uint32_t> counts_;
  std::uint64_t total_ = 0;
};

// Uses the frequencies verbatim when they sum to at most kMaxTableTotal,
// otherwise rescales them with quantize(). Throws kAllZero.
ProbabilityTable build_from_frequencies(std::span<const std::uint64_t> freqs);

// Largest-remainder quantization of a real distribution onto `total` units.
// Remaining units go to the largest fractional parts (ties: lowest index).
// Every symbol with positive probability ends up with a count of at least
// one, stealing from the largest counts when needed.
// Throws kBadDistribution or kTotalTooSmall.
ProbabilityTable quantize(std::span<const double> probs, std::uint64_t total);

struct TableIssue {
  enum class Kind {
    kLengthMismatch,
    kTotalMismatch,
    kAllZero,
    kTotalTooLarge,
  };
  Kind kind;
  std::string detail;
};

std::vector<TableIssue> validate(const ProbabilityTable& table,
                                 const Alphabet& alphabet);

// Throws kInvalidTable listing the first issue, if any.
void require_valid(const ProbabilityTable& table, const Alphabet& alphabet);

// Sidecar text format: a `total <T>` header line, then one
// `<symbol_index> <count>` line per symbol.
std::string serialize_model(const ProbabilityTable& table);
ProbabilityTable parse_model(std::string_view text);

}  // namespace sac

#endif  // SAC_MODEL_HPP_
