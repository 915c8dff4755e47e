#ifndef SAC_TESTS_SUPPORT_HPP_
#define SAC_TESTS_SUPPORT_HPP_

// Shared helpers for the test binaries: seeded generators for random models,
// partitions and sequences, and brute-force oracles written independently of
// the library code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sac/coder_exact.hpp"
#include "sac/model.hpp"
#include "sac/rational.hpp"
#include "sac/reconstruct.hpp"
#include "sac/synonymy.hpp"

namespace sac::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t next() { return gen_.next(); }
  // Uniform in [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    return lo + next() % (hi - lo + 1);
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool coin() { return next() & 1; }

 private:
  SplitMix64 gen_;
};

// Counts in [0, max_count] with at least one positive entry.
inline ProbabilityTable random_table(Rng& rng, std::size_t n, std::uint32_t max_count,
                                     bool allow_zero = true) {
  std::vector<std::uint32_t> counts(n);
  for (auto& c : counts) {
    c = static_cast<std::uint32_t>(rng.uniform(allow_zero ? 0 : 1, max_count));
  }
  if (std::all_of(counts.begin(), counts.end(), [](auto c) { return c == 0; })) {
    counts[rng.uniform(0, n - 1)] = 1;
  }
  return ProbabilityTable::from_counts(std::move(counts));
}

// Random assignment of n symbols to between 1 and n sets, set order shuffled.
inline SynonymousPartition random_partition(Rng& rng, std::size_t n) {
  const std::size_t k = rng.uniform(1, n);
  std::vector<std::vector<Symbol>> sets(k);
  std::vector<Symbol> order(n);
  std::iota(order.begin(), order.end(), Symbol{0});
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.uniform(0, i - 1)]);
  for (std::size_t i = 0; i < k; ++i) sets[i].push_back(order[i]);
  for (std::size_t i = k; i < n; ++i) sets[rng.uniform(0, k - 1)].push_back(order[i]);
  for (auto& s : sets) std::sort(s.begin(), s.end());
  return SynonymousPartition(std::move(sets));
}

// Symbols drawn with probability proportional to their counts.
inline std::vector<Symbol> random_sequence(Rng& rng, const ProbabilityTable& table,
                                           std::size_t m) {
  std::vector<Symbol> out(m);
  for (auto& s : out) {
    std::uint64_t target = rng.uniform(0, table.total() - 1);
    Symbol n = 0;
    while (target >= table.count(n)) target -= table.count(n++);
    s = n;
  }
  return out;
}

// Exact product of the set probabilities along the sequence.
inline Rational oracle_sequence_probability(const std::vector<Symbol>& u,
                                            const SynonymousPartition& partition,
                                            const ProbabilityTable& table) {
  Rational q = 1;
  for (const Symbol s : u) {
    std::uint64_t mass = 0;
    for (const auto& set : partition.sets()) {
      if (std::find(set.begin(), set.end(), s) != set.end()) {
        for (const Symbol t : set) mass += table.count(t);
      }
    }
    q *= Rational(mass, table.total());
  }
  return q;
}

// Final coding interval computed by walking the set brackets directly.
inline std::pair<Rational, Rational> oracle_interval(const std::vector<Symbol>& u,
                                                     const SynonymousPartition& partition,
                                                     const ProbabilityTable& table) {
  Rational low = 0, width = 1;
  for (const Symbol s : u) {
    std::uint64_t below = 0, mass = 0;
    bool found = false;
    for (const auto& set : partition.sets()) {
      std::uint64_t sum = 0;
      for (const Symbol t : set) sum += table.count(t);
      if (std::find(set.begin(), set.end(), s) != set.end()) {
        mass = sum;
        found = true;
        break;
      }
      below += sum;
    }
    if (!found) throw std::logic_error("symbol not covered");
    low += width * Rational(below, table.total());
    width *= Rational(mass, table.total());
  }
  return {low, low + width};
}

// Enumerates bit strings by length then value and returns the first one
// whose fraction lies in [low, high).
inline std::string oracle_shortest_fraction(const Rational& low, const Rational& high) {
  for (unsigned len = 0; len < 4096; ++len) {
    const BigInt scale = BigInt(1) << len;
    // Smallest grid point >= low at this length.
    const Rational scaled = low * Rational(scale);
    BigInt k = numerator(scaled) / denominator(scaled);
    if (Rational(k) < scaled) ++k;
    if (Rational(k, scale) < high) {
      std::string bits(len, '0');
      for (unsigned i = 0; i < len; ++i) {
        if (bit_test(k, len - 1 - i)) bits[i] = '1';
      }
      return bits;
    }
  }
  throw std::logic_error("no fraction found");
}

// Largest-remainder quantization over exact rational probabilities.
inline std::vector<std::uint32_t> oracle_largest_remainder(const std::vector<Rational>& probs,
                                                           std::uint64_t total) {
  const std::size_t n = probs.size();
  std::vector<std::uint32_t> counts(n);
  std::vector<Rational> frac(n);
  std::uint64_t used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational x = probs[i] * Rational(total);
    const BigInt f = numerator(x) / denominator(x);
    counts[i] = static_cast<std::uint32_t>(f);
    frac[i] = x - Rational(f);
    used += counts[i];
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t i = 0; used < total; ++i, ++used) ++counts[idx[i]];
  return counts;
}

inline double oracle_entropy(const std::vector<double>& probs) {
  long double h = 0;
  for (const double p : probs) {
    if (p > 0) h -= static_cast<long double>(p) * std::log2(static_cast<long double>(p));
  }
  return static_cast<double>(h);
}

inline std::vector<SetIndex> oracle_sets(const std::vector<Symbol>& u,
                                         const SynonymousPartition& partition) {
  std::vector<SetIndex> out;
  for (const Symbol s : u) {
    for (SetIndex k = 0; k < partition.set_count(); ++k) {
      const auto m = partition.members(k);
      if (std::find(m.begin(), m.end(), s) != m.end()) out.push_back(k);
    }
  }
  return out;
}

}  // namespace sac::testing

#endif  // SAC_TESTS_SUPPORT_HPP_
