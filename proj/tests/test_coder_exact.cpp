#include <gtest/gtest.h>

#include "sac/coder_exact.hpp"
#include "sac/error.hpp"
#include "support.hpp"

namespace sac {
namespace {

using testing::Rng;

const ProbabilityTable kCoin({1, 1}, 2);
const ProbabilityTable kUniform4({1, 1, 1, 1}, 4);
const ProbabilityTable kSkewed({7, 3, 3, 3}, 16);
const SynonymousPartition kPairs({{0, 1}, {2, 3}});
const SynonymousPartition kThreeSets({{0}, {1, 2}, {3}});

PartitionSequence unified(const SynonymousPartition& p) { return PartitionSequence::unified(p); }

TEST(UpdateInterval, Examples) {
  const ExactInterval unit;
  EXPECT_EQ(update_interval(unit, 0, Rational(1, 2)), (ExactInterval{0, Rational(1, 2)}));
  const ExactInterval half{0, Rational(1, 2)};
  const auto next = update_interval(half, Rational(1, 2), Rational(1, 2));
  EXPECT_EQ(next.low, Rational(1, 4));
  EXPECT_EQ(next.high(), Rational(1, 2));
  const ExactInterval some{Rational(1, 3), Rational(1, 5)};
  EXPECT_EQ(update_interval(some, 0, 1), some);
}

TEST(UpdateInterval, Errors) {
  const ExactInterval unit;
  try {
    update_interval(unit, 0, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroProbability);
  }
  EXPECT_THROW(update_interval(unit, Rational(3, 4), Rational(1, 2)), Error);
}

TEST(ShortestFraction, Examples) {
  EXPECT_EQ(shortest_fraction(Rational(1, 4), Rational(1, 2)).to_string(), "01");
  EXPECT_EQ(shortest_fraction(0, 1).to_string(), "");
  EXPECT_EQ(shortest_fraction(Rational(3, 8), Rational(1, 2)).to_string(), "011");
  EXPECT_EQ(testing::oracle_shortest_fraction(Rational(1, 4), Rational(1, 2)), "01");
  EXPECT_EQ(testing::oracle_shortest_fraction(Rational(3, 8), Rational(1, 2)), "011");
}

TEST(ShortestFraction, MatchesBruteForce) {
  Rng rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint64_t den = rng.uniform(1, 5000);
    const std::uint64_t a = rng.uniform(0, den - 1);
    const std::uint64_t b = rng.uniform(a + 1, den);
    const Rational low(a, den), high(b, den);
    const auto got = shortest_fraction(low, high);
    EXPECT_EQ(got.to_string(), testing::oracle_shortest_fraction(low, high));
    EXPECT_GE(got.value(), low);
    EXPECT_LT(got.value(), high);
  }
}

TEST(BitString, Conversions) {
  const auto b = BitString::from_string("1011");
  EXPECT_EQ(b.value(), Rational(11, 16));
  const std::vector<std::uint8_t> bytes{0xB0};
  EXPECT_EQ(BitString::from_bytes(bytes, 4), b);
  EXPECT_THROW(BitString::from_string("10a"), Error);
}

TEST(EncodeExact, Examples) {
  const std::vector<Symbol> u{0, 1};
  EXPECT_EQ(encode_exact(u, unified(SynonymousPartition::singletons(2)), kCoin).to_string(),
            "01");
  const std::vector<Symbol> v{0, 2};
  EXPECT_EQ(encode_exact(v, unified(kPairs), kUniform4).to_string(), "01");
  EXPECT_EQ(encode_exact(std::vector<Symbol>{}, unified(kPairs), kUniform4).to_string(), "");
}

TEST(EncodeExact, Errors) {
  const ProbabilityTable zero({1, 0, 1}, 2);
  const std::vector<Symbol> u{0, 1};
  try {
    encode_exact(u, unified(SynonymousPartition::singletons(3)), zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroProbability);
    EXPECT_EQ(e.where(), std::optional<std::uint64_t>(1));
  }
  const std::vector<Symbol> w{0, 3};
  try {
    encode_exact(w, unified(SynonymousPartition::singletons(3)), zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfRange);
    EXPECT_EQ(e.where(), std::optional<std::uint64_t>(1));
  }
}

TEST(DecodeExact, Examples) {
  const auto singles = unified(SynonymousPartition::singletons(2));
  EXPECT_EQ(decode_exact(BitString::from_string("01"), 2, singles, kCoin).symbols,
            (std::vector<Symbol>{0, 1}));
  const auto d = decode_exact(BitString::from_string("01"), 2, unified(kPairs), kUniform4);
  EXPECT_EQ(d.symbols, (std::vector<Symbol>{0, 2}));
  EXPECT_EQ(d.sets, (std::vector<SetIndex>{0, 1}));
  EXPECT_TRUE(decode_exact(BitString{}, 0, unified(kPairs), kUniform4).symbols.empty());
}

TEST(ExactCoder, IntervalMatchesOracle) {
  Rng rng(32);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = rng.uniform(1, 8);
    const auto t = testing::random_table(rng, n, 20);
    const auto p = testing::random_partition(rng, n);
    const auto u = testing::random_sequence(rng, t, rng.uniform(0, 30));
    const auto enc = encode_exact_detailed(u, unified(p), t);
    const auto [low, high] = testing::oracle_interval(u, p, t);
    EXPECT_EQ(enc.interval.low, low);
    EXPECT_EQ(enc.interval.high(), high);
    EXPECT_EQ(enc.interval.length, testing::oracle_sequence_probability(u, p, t));
    EXPECT_EQ(enc.code.to_string(), testing::oracle_shortest_fraction(low, high));
    EXPECT_EQ(enc.sets, testing::oracle_sets(u, p));
  }
}

TEST(ExactCoder, SemanticRoundTrip) {
  Rng rng(33);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = rng.uniform(1, 10);
    const auto t = testing::random_table(rng, n, 30);
    const auto p = testing::random_partition(rng, n);
    const auto u = testing::random_sequence(rng, t, rng.uniform(0, 40));
    const auto code = encode_exact(u, unified(p), t);
    for (const auto kind : {ExportKind::kCanonical, ExportKind::kArgmax,
                            ExportKind::kWeightedRandom}) {
      const auto d = decode_exact(code, u.size(), unified(p), t, {kind, 99});
      EXPECT_EQ(to_set_sequence(d.symbols, p), to_set_sequence(u, p));
      EXPECT_EQ(d.sets, to_set_sequence(u, p));
    }
  }
}

TEST(ExactCoder, SingletonRoundTripIsExact) {
  Rng rng(34);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng.uniform(1, 10);
    const auto t = testing::random_table(rng, n, 30);
    const auto u = testing::random_sequence(rng, t, rng.uniform(0, 40));
    const auto singles = unified(SynonymousPartition::singletons(n));
    EXPECT_EQ(decode_exact(encode_exact(u, singles, t), u.size(), singles, t).symbols, u);
  }
}

TEST(ExactCoder, PerPositionPartitions) {
  const std::vector<SynonymousPartition> per{kPairs, SynonymousPartition::singletons(4),
                                             kThreeSets};
  const PartitionSequence seq(per);
  const std::vector<Symbol> u{1, 2, 2};
  const auto enc = encode_exact_detailed(u, seq, kUniform4);
  EXPECT_EQ(enc.sets, (std::vector<SetIndex>{0, 2, 1}));
  EXPECT_EQ(enc.interval.length, Rational(1, 2) * Rational(1, 4) * Rational(1, 2));
  const auto d = decode_exact(enc.code, 3, seq, kUniform4);
  EXPECT_EQ(d.sets, enc.sets);
  EXPECT_THROW(encode_exact(std::vector<Symbol>{0, 0, 0, 0}, seq, kUniform4), std::exception);
}

TEST(ExactCoder, DistinctSetSequencesGetDisjointIntervals) {
  const auto p = unified(kThreeSets);
  std::vector<std::pair<Rational, Rational>> seen;
  for (int code = 0; code < 81; ++code) {
    std::vector<Symbol> u;
    for (int c = code, i = 0; i < 4; ++i, c /= 3) u.push_back(c % 3 == 0 ? 0 : c % 3 == 1 ? 1 : 3);
    const auto enc = encode_exact_detailed(u, p, kSkewed);
    for (const auto& [lo, hi] : seen) {
      EXPECT_TRUE(enc.interval.high() <= lo || hi <= enc.interval.low);
    }
    seen.emplace_back(enc.interval.low, enc.interval.high());
    EXPECT_EQ(decode_exact(enc.code, 4, p, kSkewed).sets, enc.sets);
  }
}

TEST(CodeLengthBoundCheck, Examples) {
  const std::vector<Symbol> u{0, 1};
  const auto b = code_length_bound(u, unified(SynonymousPartition::singletons(2)), kCoin);
  EXPECT_EQ(b.code_length, 2);
  EXPECT_DOUBLE_EQ(b.bound, 4.0);
  EXPECT_EQ(b.q, Rational(1, 4));
  EXPECT_TRUE(b.holds);
  const auto e = code_length_bound(std::vector<Symbol>{}, unified(kPairs), kUniform4);
  EXPECT_EQ(e.code_length, 0);
  EXPECT_DOUBLE_EQ(e.bound, 2.0);
  EXPECT_TRUE(e.holds);
}

TEST(CodeLengthBoundCheck, RandomInstancesHold) {
  Rng rng(35);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = rng.uniform(1, 8);
    const auto t = testing::random_table(rng, n, 50);
    const auto p = testing::random_partition(rng, n);
    const auto u = testing::random_sequence(rng, t, rng.uniform(0, 60));
    const auto b = code_length_bound(u, unified(p), t);
    EXPECT_TRUE(b.holds);
    const Rational q = testing::oracle_sequence_probability(u, p, t);
    EXPECT_EQ(b.q, q);
    // Exact form of |code| <= -log2 q + 2: 2^(|code| - 2) * q <= 1.
    const Rational lhs =
        b.code_length >= 2 ? q * Rational(BigInt(1) << (b.code_length - 2))
                           : q / Rational(BigInt(1) << (2 - b.code_length));
    EXPECT_LE(lhs, Rational(1));
  }
}

}  // namespace
}  // namespace sac
