#include "sac/reconstruct.hpp"

#include "sac/error.hpp"

namespace sac {

std::optional<ExportKind> parse_export_kind(std::string_view name) {
  if (name == "canonical") return ExportKind::kCanonical;
  if (name == "argmax") return ExportKind::kArgmax;
  if (name == "random" || name == "weighted-random") return ExportKind::kWeightedRandom;
  return std::nullopt;
}

std::string_view to_string(ExportKind kind) {
  switch (kind) {
    case ExportKind::kCanonical: return "canonical";
    case ExportKind::kArgmax: return "argmax";
    case ExportKind::kWeightedRandom: return "random";
  }
  return "canonical";
}

Exporter::Exporter(const SynonymousPartition& partition, const ProbabilityTable& table,
                   ExportPolicy policy)
    : partition_(partition),
      table_(table),
      policy_(policy),
      set_mass_(set_counts(partition, table)),
      fixed_(partition.set_count()) {
  for (std::size_t k = 0; k < partition.set_count(); ++k) {
    const auto members = partition.members(static_cast<SetIndex>(k));
    if (members.empty()) continue;
    if (policy_.kind == ExportKind::kCanonical) {
      fixed_[k] = members.front();
    } else if (policy_.kind == ExportKind::kArgmax && set_mass_[k] > 0) {
      Symbol best = members.front();
      for (Symbol s : members) {
        if (table.count(s) > table.count(best) ||
            (table.count(s) == table.count(best) && s < best)) {
          best = s;
        }
      }
      fixed_[k] = best;
    }
  }
}

Symbol Exporter::operator()(SetIndex k, std::uint64_t position) const {
  if (k >= fixed_.size()) {
    throw Error(ErrorCode::kOutOfRange, "set index " + std::to_string(k) + " out of range");
  }
  if (fixed_[k]) return *fixed_[k];
  if (policy_.kind == ExportKind::kCanonical) {
    throw Error(ErrorCode::kOutOfRange, "set " + std::to_string(k) + " is empty");
  }
  const std::uint64_t mass = set_mass_[k];
  if (mass == 0) {
    throw Error(ErrorCode::kZeroMassSet,
                "set " + std::to_string(k) + " has no probability mass");
  }
  // Multiply-shift maps the 64-bit draw onto [0, mass).
  const std::uint64_t draw = SplitMix64::at(policy_.seed, position);
  const auto target = static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(draw) * mass) >> 64);
  std::uint64_t cum = 0;
  const auto members = partition_.members(k);
  for (Symbol s : members) {
    cum += table_.count(s);
    if (target < cum) return s;
  }
  return members.back();
}

Symbol export_value(SetIndex k, const SynonymousPartition& partition,
                    const ProbabilityTable& table, const ExportPolicy& policy,
                    std::uint64_t position) {
  return Exporter(partition, table, policy)(k, position);
}

}  // namespace sac
