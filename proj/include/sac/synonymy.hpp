#ifndef SAC_SYNONYMY_HPP_
#define SAC_SYNONYMY_HPP_

// Synonymous partitions: a disjoint cover of the symbol alphabet where each
// set groups the syntactic symbols that carry one meaning.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sac/error.hpp"
#include "sac/model.hpp"
#include "sac/rational.hpp"

namespace sac {

using SetIndex = std::uint32_t;

class SynonymousPartition {
 public:
  SynonymousPartition() = default;
  // `names` is optional; missing names default to "s<k>". No validation is
  // performed here, see validate_partition().
  explicit SynonymousPartition(std::vector<std::vector<Symbol>> sets,
                               std::vector<std::string> names = {});

  // One set per symbol.
  static SynonymousPartition singletons(std::size_t alphabet_size);
  // A single set holding the whole alphabet.
  static SynonymousPartition whole(std::size_t alphabet_size);

  std::size_t set_count() const noexcept { return sets_.size(); }
  std::span<const Symbol> members(SetIndex k) const { return sets_.at(k); }
  const std::vector<std::vector<Symbol>>& sets() const noexcept { return sets_; }
  const std::string& name(SetIndex k) const { return names_.at(k); }

  // Number of symbols the partition can map (one past the largest member).
  std::size_t alphabet_size() const noexcept { return lookup_.size(); }

  // Throws kOutOfRange when `s` is not covered.
  SetIndex set_index_of(Symbol s) const;

  friend bool operator==(const SynonymousPartition& a,
                         const SynonymousPartition& b) {
    return a.sets_ == b.sets_;
  }

 private:
  static constexpr SetIndex kNoSet = std::numeric_limits<SetIndex>::max();

  std::vector<std::vector<Symbol>> sets_;
  std::vector<std::string> names_;
  std::vector<SetIndex> lookup_;
};

struct PartitionIssue {
  enum class Kind { kOverlap, kMissing, kEmptySet, kUnsorted, kOutOfRange };
  Kind kind;
  std::uint64_t value;  // symbol for Overlap/Missing/OutOfRange, set for the rest

  friend bool operator==(const PartitionIssue&, const PartitionIssue&) = default;
};

std::string describe(const PartitionIssue& issue);

// Validation failure carrying every issue found.
class PartitionError : public Error {
 public:
  explicit PartitionError(std::vector<PartitionIssue> issues)
      : Error(ErrorCode::kInvalidPartition, summarize(issues)),
        issues_(std::move(issues)) {}

  const std::vector<PartitionIssue>& issues() const noexcept { return issues_; }

 private:
  static std::string summarize(const std::vector<PartitionIssue>& issues) {
    std::string out;
    for (const auto& issue : issues) {
      if (!out.empty()) out += ", ";
      out += describe(issue);
    }
    return out;
  }

  std::vector<PartitionIssue> issues_;
};

std::vector<PartitionIssue> validate_partition(const SynonymousPartition& partition,
                                               const Alphabet& alphabet);

// Throws kInvalidPartition describing every issue.
void require_valid(const SynonymousPartition& partition, const Alphabet& alphabet);

SetIndex set_index_of(const SynonymousPartition& partition, Symbol symbol);

// Sum of member counts for every set, in set order.
std::vector<std::uint64_t> set_counts(const SynonymousPartition& partition,
                                      const ProbabilityTable& table);

// Exact probability of set k under `table`.
Rational set_probability(const SynonymousPartition& partition,
                         const ProbabilityTable& table, SetIndex k);

// Throws kOutOfRange carrying the offending position.
std::vector<SetIndex> to_set_sequence(std::span<const Symbol> symbols,
                                      const SynonymousPartition& partition);

// Entropy of the set distribution, in bits (sebits per symbol).
double semantic_entropy(const SynonymousPartition& partition,
                        const ProbabilityTable& table);

double shannon_entropy(const ProbabilityTable& table);

// Parses the line-oriented `set <name>: <idx> ...` format and validates the
// result. When `alphabet` is absent the alphabet is taken to be
// 0..max_index. Throws kSyntax, kEmptyPartition or kInvalidPartition.
SynonymousPartition parse_partition_file(std::string_view text,
                                         std::optional<Alphabet> alphabet = std::nullopt);

std::string serialize_partition(const SynonymousPartition& partition);

// Name-independent form used for digests: `set <k>: ...` lines.
std::string canonical_partition_text(const SynonymousPartition& partition);

}  // namespace sac

#endif  // SAC_SYNONYMY_HPP_
