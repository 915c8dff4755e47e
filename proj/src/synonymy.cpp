#include "sac/synonymy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sac/error.hpp"
#include "text_util.hpp"

namespace sac {

SynonymousPartition::SynonymousPartition(std::vector<std::vector<Symbol>> sets,
                                         std::vector<std::string> names)
    : sets_(std::move(sets)), names_(std::move(names)) {
  names_.resize(sets_.size());
  for (std::size_t k = 0; k < sets_.size(); ++k) {
    if (names_[k].empty()) names_[k] = "s" + std::to_string(k);
  }
  Symbol max_member = 0;
  bool any = false;
  for (const auto& set : sets_) {
    for (Symbol s : set) {
      max_member = std::max(max_member, s);
      any = true;
    }
  }
  lookup_.assign(any ? std::size_t{max_member} + 1 : 0, kNoSet);
  for (std::size_t k = 0; k < sets_.size(); ++k) {
    for (Symbol s : sets_[k]) {
      if (lookup_[s] == kNoSet) lookup_[s] = static_cast<SetIndex>(k);
    }
  }
}

SynonymousPartition SynonymousPartition::singletons(std::size_t alphabet_size) {
  std::vector<std::vector<Symbol>> sets(alphabet_size);
  for (std::size_t n = 0; n < alphabet_size; ++n) sets[n] = {static_cast<Symbol>(n)};
  return SynonymousPartition(std::move(sets));
}

SynonymousPartition SynonymousPartition::whole(std::size_t alphabet_size) {
  std::vector<Symbol> all(alphabet_size);
  for (std::size_t n = 0; n < alphabet_size; ++n) all[n] = static_cast<Symbol>(n);
  return SynonymousPartition({std::move(all)});
}

SetIndex SynonymousPartition::set_index_of(Symbol s) const {
  if (s >= lookup_.size() || lookup_[s] == kNoSet) {
    throw Error(ErrorCode::kOutOfRange,
                "symbol " + std::to_string(s) + " is not in the partition");
  }
  return lookup_[s];
}

std::string describe(const PartitionIssue& issue) {
  const std::string v = std::to_string(issue.value);
  switch (issue.kind) {
    case PartitionIssue::Kind::kOverlap: return "Overlap(" + v + ")";
    case PartitionIssue::Kind::kMissing: return "Missing(" + v + ")";
    case PartitionIssue::Kind::kEmptySet: return "EmptySet(" + v + ")";
    case PartitionIssue::Kind::kUnsorted: return "Unsorted(" + v + ")";
    case PartitionIssue::Kind::kOutOfRange: return "OutOfRange(" + v + ")";
  }
  return "Unknown(" + v + ")";
}

std::vector<PartitionIssue> validate_partition(const SynonymousPartition& partition,
                                               const Alphabet& alphabet) {
  using Kind = PartitionIssue::Kind;
  std::vector<PartitionIssue> issues;
  std::vector<std::uint8_t> seen(alphabet.size(), 0);
  std::vector<std::uint8_t> reported(alphabet.size(), 0);

  for (std::size_t k = 0; k < partition.set_count(); ++k) {
    const auto members = partition.members(static_cast<SetIndex>(k));
    if (members.empty()) {
      issues.push_back({Kind::kEmptySet, k});
      continue;
    }
    bool unsorted = false;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const Symbol s = members[i];
      if (i > 0 && s < members[i - 1]) unsorted = true;
      if (!alphabet.contains(s)) {
        issues.push_back({Kind::kOutOfRange, s});
        continue;
      }
      if (seen[s] && !reported[s]) {
        issues.push_back({Kind::kOverlap, s});
        reported[s] = 1;
      }
      seen[s] = 1;
    }
    if (unsorted) issues.push_back({Kind::kUnsorted, k});
  }
  for (std::size_t s = 0; s < alphabet.size(); ++s) {
    if (!seen[s]) issues.push_back({Kind::kMissing, s});
  }
  return issues;
}

void require_valid(const SynonymousPartition& partition, const Alphabet& alphabet) {
  auto issues = validate_partition(partition, alphabet);
  if (!issues.empty()) throw PartitionError(std::move(issues));
}

SetIndex set_index_of(const SynonymousPartition& partition, Symbol symbol) {
  return partition.set_index_of(symbol);
}

std::vector<std::uint64_t> set_counts(const SynonymousPartition& partition,
                                      const ProbabilityTable& table) {
  std::vector<std::uint64_t> out(partition.set_count(), 0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (Symbol s : partition.members(static_cast<SetIndex>(k))) {
      out[k] += table.count(s);
    }
  }
  return out;
}

Rational set_probability(const SynonymousPartition& partition,
                         const ProbabilityTable& table, SetIndex k) {
  if (k >= partition.set_count()) {
    throw Error(ErrorCode::kOutOfRange, "set index " + std::to_string(k) + " out of range");
  }
  std::uint64_t sum = 0;
  for (Symbol s : partition.members(k)) sum += table.count(s);
  return Rational(BigInt(sum), BigInt(table.total()));
}

std::vector<SetIndex> to_set_sequence(std::span<const Symbol> symbols,
                                      const SynonymousPartition& partition) {
  std::vector<SetIndex> out(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const Symbol s = symbols[i];
    if (s >= partition.alphabet_size()) {
      throw Error(ErrorCode::kOutOfRange,
                  "symbol " + std::to_string(s) + " at position " + std::to_string(i), i);
    }
    out[i] = partition.set_index_of(s);
  }
  return out;
}

namespace {

double entropy_of_counts(std::span<const std::uint64_t> counts, std::uint64_t total) {
  double h = 0.0;
  const auto t = static_cast<double>(total);
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / t;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

double semantic_entropy(const SynonymousPartition& partition,
                        const ProbabilityTable& table) {
  const auto counts = set_counts(partition, table);
  return entropy_of_counts(counts, table.total());
}

double shannon_entropy(const ProbabilityTable& table) {
  std::vector<std::uint64_t> counts(table.counts().begin(), table.counts().end());
  return entropy_of_counts(counts, table.total());
}

SynonymousPartition parse_partition_file(std::string_view text,
                                         std::optional<Alphabet> alphabet) {
  std::vector<std::vector<Symbol>> sets;
  std::vector<std::string> names;
  std::size_t line_no = 0;
  for (std::string_view line : detail::split_lines(text)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (line.size() < 4 || line.substr(0, 3) != "set" || !detail::is_space(line[3])) {
      throw Error(ErrorCode::kSyntax, "expected `set <name>: <idx> ...`", line_no);
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::kSyntax, "missing ':' after set name", line_no);
    }
    const std::string_view name = detail::trim(line.substr(3, colon - 3));
    if (name.empty() || name.find_first_of(" \t") != std::string_view::npos) {
      throw Error(ErrorCode::kSyntax, "set name must be a single word", line_no);
    }
    std::vector<Symbol> members;
    for (std::string_view field : detail::split_fields(line.substr(colon + 1))) {
      std::uint64_t v = 0;
      if (!detail::parse_uint(field, v) || v > std::numeric_limits<Symbol>::max() - 1) {
        throw Error(ErrorCode::kSyntax,
                    "bad symbol index `" + std::string(field) + "`", line_no);
      }
      members.push_back(static_cast<Symbol>(v));
    }
    sets.push_back(std::move(members));
    names.emplace_back(name);
  }
  if (sets.empty()) throw Error(ErrorCode::kEmptyPartition, "partition defines no sets");

  SynonymousPartition partition(std::move(sets), std::move(names));
  const Alphabet effective =
      alphabet ? *alphabet : Alphabet(std::max<std::size_t>(partition.alphabet_size(), 1));
  require_valid(partition, effective);
  return partition;
}

namespace {

std::string serialize_with(const SynonymousPartition& partition, bool use_names) {
  std::ostringstream out;
  for (std::size_t k = 0; k < partition.set_count(); ++k) {
    out << "set ";
    if (use_names) {
      out << partition.name(static_cast<SetIndex>(k));
    } else {
      out << k;
    }
    out << ':';
    for (Symbol s : partition.members(static_cast<SetIndex>(k))) out << ' ' << s;
    out << '\n';
  }
  return out.str();
}

}  // namespace

std::string serialize_partition(const SynonymousPartition& partition) {
  return serialize_with(partition, true);
}

std::string canonical_partition_text(const SynonymousPartition& partition) {
  return serialize_with(partition, false);
}

}  // namespace sac
