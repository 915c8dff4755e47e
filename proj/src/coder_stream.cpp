#include "sac/coder_stream.hpp"

#include <algorithm>
#include <limits>

#include "sac/error.hpp"

namespace sac {

namespace {

constexpr std::uint64_t kWindowTop = std::uint64_t{1} << 32;
constexpr std::uint64_t kRenormBelow = std::uint64_t{1} << 24;
constexpr char kMagic[4] = {'S', 'A', 'C', '1'};

class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void raw(std::span<const std::uint8_t> bytes) {
    out_.insert(out_.end(), bytes.begin(), bytes.end());
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void put(std::uint64_t v, int width) {
    for (int i = width - 1; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  std::size_t offset() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }

 private:
  std::uint64_t get(int width) {
    if (remaining() < static_cast<std::size_t>(width)) {
      throw Error(ErrorCode::kTruncatedPayload, "container ends inside the header", pos_);
    }
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 8) | bytes_[pos_++];
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

class Fnv1a64 {
 public:
  void update(std::span<const std::uint8_t> bytes) {
    for (auto b : bytes) {
      hash_ ^= b;
      hash_ *= 0x100000001B3ull;
    }
  }
  void update(std::string_view text) {
    update(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  }
  std::uint64_t value() const noexcept { return hash_; }

 private:
  std::uint64_t hash_ = 0xCBF29CE484222325ull;
};

void require_stream_inputs(const SynonymousPartition& partition,
                           const ProbabilityTable& table) {
  const Alphabet alphabet(std::max<std::size_t>(table.size(), 1));
  require_valid(table, alphabet);
  require_valid(partition, alphabet);
  if (table.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorCode::kInvalidTable, "alphabet exceeds 65535 symbols");
  }
  for (auto c : table.counts()) {
    if (c > std::numeric_limits<std::uint16_t>::max()) {
      throw Error(ErrorCode::kInvalidTable,
                  "count " + std::to_string(c) + " does not fit the container's u16 field");
    }
  }
}

}  // namespace

std::string_view to_string(CodingMode mode) {
  return mode == CodingMode::kSemantic ? "semantic" : "syntactic";
}

CumulativeTable::CumulativeTable(const SynonymousPartition& partition,
                                 const ProbabilityTable& table, CodingMode mode) {
  if (mode == CodingMode::kSemantic) {
    const auto counts = set_counts(partition, table);
    cum_.assign(counts.size() + 1, 0);
    for (std::size_t k = 0; k < counts.size(); ++k) {
      cum_[k + 1] = cum_[k] + static_cast<std::uint32_t>(counts[k]);
    }
  } else {
    cum_.assign(table.size() + 1, 0);
    for (std::size_t n = 0; n < table.size(); ++n) cum_[n + 1] = cum_[n] + table.counts()[n];
  }
}

void RangeEncoder::encode(std::uint32_t cum_low, std::uint32_t cum_high,
                          std::uint32_t total) {
  const std::uint64_t a = range_ * cum_low / total;
  const std::uint64_t b = range_ * cum_high / total;
  low_ += a;
  range_ = b - a;
  while (range_ < kRenormBelow) {
    shift_low();
    range_ <<= 8;
  }
}

void RangeEncoder::shift_low() {
  if (low_ < 0xFF000000u || low_ >= kWindowTop) {
    const auto carry = static_cast<std::uint8_t>(low_ >> 32);
    if (has_cache_) out_.push_back(static_cast<std::uint8_t>(cache_ + carry));
    for (; pending_ > 0; --pending_) out_.push_back(static_cast<std::uint8_t>(0xFF + carry));
    cache_ = static_cast<std::uint8_t>(low_ >> 24);
    has_cache_ = true;
  } else {
    ++pending_;
  }
  low_ = (low_ & 0x00FFFFFFu) << 8;
  ++shifts_;
}

RangeEncoder::Output RangeEncoder::finish() {
  // Fewest leading window bits j that still name a point of [low, low + range).
  unsigned j = 0;
  std::uint64_t value = low_;
  for (; j <= 32; ++j) {
    const std::uint64_t unit = std::uint64_t{1} << (32 - j);
    const std::uint64_t candidate = (low_ + unit - 1) / unit * unit;
    if (candidate < low_ + range_) {
      value = candidate;
      break;
    }
  }
  const std::uint64_t settled_bits = shifts_ * 8;
  low_ = value;
  // A carry out of the window still has to reach the held-back bytes.
  const unsigned flush_shifts = std::max((j + 7) / 8, value >= kWindowTop ? 1u : 0u);
  for (unsigned n = 0; n < flush_shifts; ++n) shift_low();
  if (has_cache_) out_.push_back(cache_);
  for (; pending_ > 0; --pending_) out_.push_back(0xFF);

  Output result;
  result.bit_count = settled_bits + j;
  while (result.bit_count > 0) {
    const std::uint64_t i = result.bit_count - 1;
    if ((out_[i / 8] >> (7 - i % 8)) & 1) break;
    --result.bit_count;
  }
  out_.resize((result.bit_count + 7) / 8);
  result.bytes = std::move(out_);
  return result;
}

RangeDecoder::RangeDecoder(std::span<const std::uint8_t> payload) : payload_(payload) {
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
}

std::uint8_t RangeDecoder::next_byte() {
  const std::uint64_t i = pos_++;
  return i < payload_.size() ? payload_[i] : 0;
}

std::size_t RangeDecoder::decode(std::span<const std::uint32_t> cum) {
  const std::uint64_t total = cum.back();
  auto bound = [&](std::size_t k) { return range_ * cum[k] / total; };
  // Largest unit whose lower bound is <= code; zero-width units never win.
  std::size_t lo = 0;
  std::size_t hi = cum.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (bound(mid) <= code_) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const std::uint64_t a = bound(lo);
  const std::uint64_t b = bound(lo + 1);
  code_ -= a;
  range_ = b - a;
  while (range_ < kRenormBelow) {
    code_ = (code_ << 8) | next_byte();
    range_ <<= 8;
  }
  return lo;
}

std::uint64_t container_digest(CodingMode mode, std::uint64_t length,
                               const SynonymousPartition& partition,
                               const ProbabilityTable& table) {
  ByteWriter prefix;
  prefix.raw(std::span(reinterpret_cast<const std::uint8_t*>(kMagic), 4));
  prefix.u8(kContainerVersion);
  prefix.u8(static_cast<std::uint8_t>(mode));
  prefix.u64(length);
  Fnv1a64 hash;
  hash.update(prefix.take());
  hash.update(canonical_partition_text(partition));
  hash.update(serialize_model(table));
  return hash.value();
}

std::vector<std::uint8_t> serialize_container(const Container& c) {
  ByteWriter w;
  w.raw(std::span(reinterpret_cast<const std::uint8_t*>(kMagic), 4));
  w.u8(kContainerVersion);
  w.u8(static_cast<std::uint8_t>(c.mode));
  w.u64(c.length);
  w.u16(static_cast<std::uint16_t>(c.table.size()));
  w.u16(static_cast<std::uint16_t>(c.partition.set_count()));
  for (const auto& set : c.partition.sets()) {
    w.u16(static_cast<std::uint16_t>(set.size()));
    for (Symbol s : set) w.u16(static_cast<std::uint16_t>(s));
  }
  w.u32(static_cast<std::uint32_t>(c.table.total()));
  for (auto count : c.table.counts()) w.u16(static_cast<std::uint16_t>(count));
  w.u64(c.digest);
  w.u64(c.payload_bits);
  w.raw(c.payload);
  return w.take();
}

Container parse_container(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  Container c;
  for (char expected : kMagic) {
    if (r.u8() != static_cast<std::uint8_t>(expected)) {
      throw Error(ErrorCode::kBadContainer, "bad magic", r.offset() - 1);
    }
  }
  if (const auto version = r.u8(); version != kContainerVersion) {
    throw Error(ErrorCode::kBadContainer,
                "unsupported version " + std::to_string(version), r.offset() - 1);
  }
  const auto mode = r.u8();
  if (mode > 1) throw Error(ErrorCode::kBadContainer, "unknown mode", r.offset() - 1);
  c.mode = static_cast<CodingMode>(mode);
  c.length = r.u64();
  const std::uint16_t alphabet = r.u16();
  const std::uint16_t set_count = r.u16();
  if (alphabet == 0 || set_count == 0 || set_count > alphabet) {
    throw Error(ErrorCode::kBadContainer, "bad alphabet or set count", r.offset());
  }
  std::vector<std::vector<Symbol>> sets(set_count);
  std::size_t members = 0;
  for (auto& set : sets) {
    const std::uint16_t n = r.u16();
    members += n;
    if (members > alphabet) {
      throw Error(ErrorCode::kBadContainer, "partition lists too many members", r.offset());
    }
    set.resize(n);
    for (auto& s : set) s = r.u16();
  }
  const std::uint32_t total = r.u32();
  std::vector<std::uint32_t> counts(alphabet);
  for (auto& count : counts) count = r.u16();
  c.partition = SynonymousPartition(std::move(sets));
  c.table = ProbabilityTable(std::move(counts), total);
  c.digest = r.u64();
  c.payload_bits = r.u64();

  const std::uint64_t payload_bytes = c.payload_bits / 8 + (c.payload_bits % 8 != 0);
  if (r.remaining() < payload_bytes) {
    throw Error(ErrorCode::kTruncatedPayload,
                "payload needs " + std::to_string(payload_bytes) + " bytes, " +
                    std::to_string(r.remaining()) + " present",
                r.offset());
  }
  if (r.remaining() > payload_bytes) {
    throw Error(ErrorCode::kBadContainer, "trailing bytes after payload",
                r.offset() + payload_bytes);
  }
  const auto payload = r.rest();
  c.payload.assign(payload.begin(), payload.end());
  if (c.payload_bits > 0) {
    // The encoder trims trailing zeros, so the last counted bit is set and
    // the padding is clear.
    const std::uint64_t last = c.payload_bits - 1;
    const std::uint8_t tail = c.payload.back();
    const unsigned used = static_cast<unsigned>(last % 8) + 1;
    const std::uint8_t padding_mask = static_cast<std::uint8_t>(0xFFu >> used);
    if ((tail & padding_mask) != 0 || ((tail >> (8 - used)) & 1) == 0) {
      throw Error(ErrorCode::kBadContainer, "payload bit count disagrees with payload");
    }
  }

  if (container_digest(c.mode, c.length, c.partition, c.table) != c.digest) {
    throw Error(ErrorCode::kDigestMismatch, "header does not match its digest");
  }
  require_stream_inputs(c.partition, c.table);
  return c;
}

std::size_t header_bytes(const Container& c) {
  return 4 + 1 + 1 + 8 + 2 + 2 + 2 * c.partition.set_count() + 2 * c.table.size() + 4 +
         2 * c.table.size() + 8 + 8;
}

Container encode_stream(std::span<const Symbol> symbols,
                        const SynonymousPartition& partition,
                        const ProbabilityTable& table, CodingMode mode) {
  require_stream_inputs(partition, table);
  const CumulativeTable cumulative(partition, table, mode);
  const auto cum = cumulative.cum();
  const std::uint32_t total = cumulative.total();

  RangeEncoder encoder;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const Symbol s = symbols[i];
    if (s >= table.size()) {
      throw Error(ErrorCode::kOutOfRange,
                  "symbol " + std::to_string(s) + " at position " + std::to_string(i), i);
    }
    const std::size_t unit = mode == CodingMode::kSemantic ? partition.set_index_of(s) : s;
    if (cum[unit] == cum[unit + 1]) {
      throw Error(ErrorCode::kZeroProbability,
                  "zero-probability unit at position " + std::to_string(i), i);
    }
    encoder.encode(cum[unit], cum[unit + 1], total);
  }
  auto out = encoder.finish();

  Container c;
  c.mode = mode;
  c.length = symbols.size();
  c.partition = partition;
  c.table = table;
  c.digest = container_digest(mode, c.length, partition, table);
  c.payload_bits = out.bit_count;
  c.payload = std::move(out.bytes);
  return c;
}

DecodedSequence decode_stream(const Container& container,
                              const SynonymousPartition& partition,
                              const ProbabilityTable& table, const ExportPolicy& policy) {
  if (!(partition == container.partition)) {
    throw Error(ErrorCode::kDigestMismatch, "partition differs from the encoder's");
  }
  if (!(table == container.table)) {
    throw Error(ErrorCode::kDigestMismatch, "model differs from the encoder's");
  }
  if (container_digest(container.mode, container.length, partition, table) !=
      container.digest) {
    throw Error(ErrorCode::kDigestMismatch, "partition or model digest mismatch");
  }
  require_stream_inputs(partition, table);

  const CumulativeTable cumulative(partition, table, container.mode);
  const Exporter exporter(partition, table, policy);
  RangeDecoder decoder(container.payload);

  DecodedSequence out;
  out.symbols.resize(container.length);
  out.sets.resize(container.length);
  for (std::uint64_t i = 0; i < container.length; ++i) {
    const std::size_t unit = decoder.decode(cumulative.cum());
    if (container.mode == CodingMode::kSemantic) {
      out.sets[i] = static_cast<SetIndex>(unit);
      out.symbols[i] = exporter(out.sets[i], i);
    } else {
      out.symbols[i] = static_cast<Symbol>(unit);
      out.sets[i] = partition.set_index_of(out.symbols[i]);
    }
  }
  if (container.payload.size() > decoder.bytes_consumed()) {
    throw Error(ErrorCode::kDesync, "payload extends past the decoded message");
  }
  return out;
}

DecodedSequence decode_stream(const Container& container, const ExportPolicy& policy) {
  return decode_stream(container, container.partition, container.table, policy);
}

std::uint64_t measure_code_length(const Container& container) {
  return container.payload_bits;
}

}  // namespace sac
