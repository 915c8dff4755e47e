#ifndef SAC_RECONSTRUCT_HPP_
#define SAC_RECONSTRUCT_HPP_

// Decoder-side choice of a concrete symbol from a decoded synonymous set.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sac/model.hpp"
#include "sac/synonymy.hpp"

namespace sac {

// SplitMix64. Output i for seed s is mix(s + (i + 1) * kGamma), so a draw at
// any position can be produced without replaying the stream.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  static std::uint64_t at(std::uint64_t seed, std::uint64_t index) {
    return mix(seed + (index + 1) * kGamma);
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

enum class ExportKind { kCanonical, kArgmax, kWeightedRandom };

struct ExportPolicy {
  ExportKind kind = ExportKind::kCanonical;
  std::uint64_t seed = 0;  // kWeightedRandom only
};

// Output of either decoder: the exported symbols and the set sequence they
// were exported from.
struct DecodedSequence {
  std::vector<Symbol> symbols;
  std::vector<SetIndex> sets;
};

// Accepts "canonical", "argmax" and "random" (or "weighted-random").
std::optional<ExportKind> parse_export_kind(std::string_view name);
std::string_view to_string(ExportKind kind);

// Precomputes per-set choices for one (partition, table, policy). A weighted
// draw at sequence position i consumes SplitMix64 output i of the seed.
class Exporter {
 public:
  Exporter(const SynonymousPartition& partition, const ProbabilityTable& table,
           ExportPolicy policy);

  // Throws kZeroMassSet for argmax/weighted on a set whose counts are all 0,
  // kOutOfRange for an unknown set.
  Symbol operator()(SetIndex k, std::uint64_t position) const;

 private:
  SynonymousPartition partition_;
  ProbabilityTable table_;
  ExportPolicy policy_;
  std::vector<std::uint64_t> set_mass_;
  std::vector<std::optional<Symbol>> fixed_;  // canonical/argmax answer per set
};

Symbol export_value(SetIndex k, const SynonymousPartition& partition,
                    const ProbabilityTable& table, const ExportPolicy& policy,
                    std::uint64_t position);

}  // namespace sac

#endif  // SAC_RECONSTRUCT_HPP_
