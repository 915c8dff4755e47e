#include "sac/coder_exact.hpp"

#include <map>

#include "sac/error.hpp"

namespace sac {

namespace mp = boost::multiprecision;

BitString BitString::from_string(std::string_view text) {
  BitString out;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw Error(ErrorCode::kSyntax, "bit strings hold only '0' and '1'");
    }
    out.push_back(c == '1');
  }
  return out;
}

BitString BitString::from_bytes(std::span<const std::uint8_t> bytes,
                                std::uint64_t bit_count) {
  if (bit_count > std::uint64_t{bytes.size()} * 8) {
    throw Error(ErrorCode::kTruncatedPayload, "bit count exceeds byte buffer");
  }
  BitString out;
  out.bits_.reserve(bit_count);
  for (std::uint64_t i = 0; i < bit_count; ++i) {
    out.push_back((bytes[i / 8] >> (7 - i % 8)) & 1);
  }
  return out;
}

std::string BitString::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) s[i] = '1';
  }
  return s;
}

Rational BitString::value() const {
  BigInt num = 0;
  for (auto b : bits_) num = (num << 1) | b;
  return Rational(num, BigInt(1) << bits_.size());
}

ExactInterval update_interval(const ExactInterval& iv, const Rational& cum_below,
                              const Rational& p_set) {
  if (p_set == 0) throw Error(ErrorCode::kZeroProbability, "set probability is zero");
  if (cum_below < 0 || p_set < 0 || cum_below + p_set > 1) {
    throw Error(ErrorCode::kOutOfRange, "cumulative bracket leaves [0, 1]");
  }
  return ExactInterval{iv.low + iv.length * cum_below, iv.length * p_set};
}

BitString shortest_fraction(const Rational& low, const Rational& high) {
  if (low < 0 || high > 1 || !(low < high)) {
    throw Error(ErrorCode::kOutOfRange, "shortest_fraction needs 0 <= low < high <= 1");
  }
  const BigInt low_num = mp::numerator(low);
  const BigInt low_den = mp::denominator(low);
  const BigInt high_num = mp::numerator(high);
  const BigInt high_den = mp::denominator(high);

  // At level l the first grid point at or above low is k = ceil(low * 2^l);
  // it is the answer once k / 2^l < high.
  for (unsigned level = 0;; ++level) {
    const BigInt scaled = low_num << level;
    BigInt k = scaled / low_den;
    if (k * low_den != scaled) ++k;
    if (k * high_den < (high_num << level)) {
      BitString out;
      for (unsigned j = level; j-- > 0;) out.push_back(mp::bit_test(k, j));
      return out;
    }
  }
}

PartitionSequence PartitionSequence::unified(SynonymousPartition partition) {
  PartitionSequence seq;
  seq.partitions_.push_back(std::move(partition));
  seq.unified_ = true;
  return seq;
}

PartitionSequence::PartitionSequence(std::vector<SynonymousPartition> per_position)
    : partitions_(std::move(per_position)), unified_(false) {}

const SynonymousPartition& PartitionSequence::at(std::size_t i) const {
  if (unified_) return partitions_.front();
  if (i >= partitions_.size()) {
    throw Error(ErrorCode::kOutOfRange,
                "no partition for position " + std::to_string(i), i);
  }
  return partitions_[i];
}

namespace {

void check_table(const ProbabilityTable& table) {
  for (const auto& issue : validate(table, Alphabet(std::max<std::size_t>(table.size(), 1)))) {
    // The exact coder has no precision limit on the total.
    if (issue.kind != TableIssue::Kind::kTotalTooLarge) {
      throw Error(ErrorCode::kInvalidTable, issue.detail);
    }
  }
}

// Cumulative set counts for one partition: cum[k] = sum of counts of sets
// before k; cum has set_count() + 1 entries.
class CumulativeCache {
 public:
  CumulativeCache(const PartitionSequence& partitions, const ProbabilityTable& table)
      : partitions_(partitions), table_(table) {}

  const std::vector<std::uint64_t>& at(std::size_t i) {
    const SynonymousPartition& p = partitions_.at(i);
    auto it = cache_.find(&p);
    if (it != cache_.end()) return it->second;
    require_valid(p, Alphabet(table_.size()));
    const auto counts = set_counts(p, table_);
    std::vector<std::uint64_t> cum(counts.size() + 1, 0);
    for (std::size_t k = 0; k < counts.size(); ++k) cum[k + 1] = cum[k] + counts[k];
    return cache_.emplace(&p, std::move(cum)).first->second;
  }

 private:
  const PartitionSequence& partitions_;
  const ProbabilityTable& table_;
  std::map<const SynonymousPartition*, std::vector<std::uint64_t>> cache_;
};

}  // namespace

ExactEncoding encode_exact_detailed(std::span<const Symbol> symbols,
                                    const PartitionSequence& partitions,
                                    const ProbabilityTable& table) {
  check_table(table);
  CumulativeCache cumulative(partitions, table);
  const BigInt total(table.total());

  ExactEncoding out;
  out.sets.reserve(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const SynonymousPartition& partition = partitions.at(i);
    if (symbols[i] >= table.size()) {
      throw Error(ErrorCode::kOutOfRange,
                  "symbol " + std::to_string(symbols[i]) + " at position " +
                      std::to_string(i),
                  i);
    }
    const auto& cum = cumulative.at(i);
    const SetIndex r = partition.set_index_of(symbols[i]);
    const std::uint64_t mass = cum[r + 1] - cum[r];
    if (mass == 0) {
      throw Error(ErrorCode::kZeroProbability,
                  "set " + std::to_string(r) + " at position " + std::to_string(i) +
                      " has zero probability",
                  i);
    }
    out.interval = update_interval(out.interval, Rational(BigInt(cum[r]), total),
                                   Rational(BigInt(mass), total));
    out.sets.push_back(r);
  }
  out.code = shortest_fraction(out.interval.low, out.interval.high());
  return out;
}

BitString encode_exact(std::span<const Symbol> symbols, const PartitionSequence& partitions,
                       const ProbabilityTable& table) {
  return encode_exact_detailed(symbols, partitions, table).code;
}

DecodedSequence decode_exact(const BitString& code, std::uint64_t length,
                             const PartitionSequence& partitions,
                             const ProbabilityTable& table, const ExportPolicy& policy) {
  check_table(table);
  CumulativeCache cumulative(partitions, table);
  const BigInt total(table.total());
  const Rational c = code.value();

  std::map<const SynonymousPartition*, Exporter> exporters;
  DecodedSequence out;
  out.symbols.reserve(length);
  out.sets.reserve(length);
  ExactInterval iv;
  for (std::uint64_t i = 0; i < length; ++i) {
    const SynonymousPartition& partition = partitions.at(i);
    const auto& cum = cumulative.at(i);

    // Scaled position of c inside the current interval, in count units.
    const Rational scaled = (c - iv.low) * total / iv.length;
    if (scaled < 0 || scaled >= total) {
      throw Error(ErrorCode::kDesync, "codeword left the interval at position " +
                                          std::to_string(i), i);
    }
    const BigInt unit = mp::numerator(scaled) / mp::denominator(scaled);
    const auto point = unit.convert_to<std::uint64_t>();
    SetIndex r = 0;
    while (!(cum[r] <= point && point < cum[r + 1])) ++r;

    out.sets.push_back(r);
    auto exporter = exporters.find(&partition);
    if (exporter == exporters.end()) {
      exporter = exporters.emplace(&partition, Exporter(partition, table, policy)).first;
    }
    out.symbols.push_back(exporter->second(r, i));
    iv = update_interval(iv, Rational(BigInt(cum[r]), total),
                         Rational(BigInt(cum[r + 1] - cum[r]), total));
  }
  if (c < iv.low || c >= iv.high()) {
    throw Error(ErrorCode::kDesync, "codeword outside the final interval");
  }
  return out;
}

CodeLengthBound code_length_bound(std::span<const Symbol> symbols,
                               const PartitionSequence& partitions,
                               const ProbabilityTable& table) {
  const ExactEncoding enc = encode_exact_detailed(symbols, partitions, table);
  CodeLengthBound out;
  out.code_length = static_cast<std::int64_t>(enc.code.size());
  out.q = enc.interval.length;
  out.bound = -log2_rational(out.q) + 2.0;
  // len <= -log2 q + 2  <=>  2^(len - 2) * q <= 1.
  if (out.code_length <= 2) {
    out.holds = true;
  } else {
    out.holds = (mp::numerator(out.q) << (out.code_length - 2)) <= mp::denominator(out.q);
  }
  return out;
}

}  // namespace sac
