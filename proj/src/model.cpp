#include "sac/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "sac/error.hpp"
#include "text_util.hpp"

namespace sac {

Alphabet::Alphabet(std::size_t size) : size_(size) {
  if (size == 0) throw Error(ErrorCode::kOutOfRange, "alphabet size must be positive");
}

ProbabilityTable ProbabilityTable::from_counts(std::vector<std::uint32_t> counts) {
  const std::uint64_t total =
      std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  return ProbabilityTable(std::move(counts), total);
}

ProbabilityTable build_from_frequencies(std::span<const std::uint64_t> freqs) {
  std::uint64_t sum = 0;
  for (auto f : freqs) {
    if (f > std::numeric_limits<std::uint64_t>::max() - sum) {
      throw Error(ErrorCode::kBadDistribution, "frequency sum overflows");
    }
    sum += f;
  }
  if (sum == 0) throw Error(ErrorCode::kAllZero, "every frequency is zero");

  if (sum <= kMaxTableTotal) {
    std::vector<std::uint32_t> counts(freqs.begin(), freqs.end());
    return ProbabilityTable(std::move(counts), sum);
  }
  std::vector<double> probs(freqs.size());
  const auto denom = static_cast<long double>(sum);
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    probs[i] = static_cast<double>(static_cast<long double>(freqs[i]) / denom);
  }
  return quantize(probs, kMaxTableTotal);
}

namespace {

// Index of the largest count, lowest index on ties.
std::size_t largest_count(const std::vector<std::uint32_t>& counts) {
  return static_cast<std::size_t>(
      std::max_element(counts.begin(), counts.end()) - counts.begin());
}

}  // namespace

ProbabilityTable quantize(std::span<const double> probs, std::uint64_t total) {
  if (probs.empty()) throw Error(ErrorCode::kBadDistribution, "empty distribution");
  if (total == 0 || total > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kTotalTooSmall, "total must be in [1, 2^32)");
  }
  long double sum = 0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = probs[i];
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw Error(ErrorCode::kBadDistribution,
                  "probability outside [0,1] at symbol " + std::to_string(i), i);
    }
    sum += p;
    if (p > 0.0) ++positives;
  }
  if (std::fabs(static_cast<double>(sum - 1.0L)) > 1e-9) {
    throw Error(ErrorCode::kBadDistribution, "probabilities do not sum to 1");
  }
  if (positives > total) {
    throw Error(ErrorCode::kTotalTooSmall,
                std::to_string(positives) + " positive symbols exceed total " +
                    std::to_string(total));
  }

  const std::size_t n = probs.size();
  std::vector<std::uint32_t> counts(n, 0);
  std::vector<double> frac(n, 0.0);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = probs[i] * static_cast<double>(total);
    const double nearest = std::round(x);
    // (c/T)*T can land a hair below c; treat it as the integer it encodes.
    if (std::fabs(x - nearest) <= 1e-9 * std::max(1.0, x)) x = nearest;
    const double fl = std::floor(x);
    counts[i] = static_cast<std::uint32_t>(fl);
    frac[i] = x - fl;
    assigned += static_cast<std::int64_t>(fl);
  }

  std::int64_t remaining = static_cast<std::int64_t>(total) - assigned;
  if (remaining > 0) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i) {
      if (probs[i] > 0.0) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    for (std::size_t k = 0; remaining > 0; ++k, --remaining) {
      ++counts[order[k % order.size()]];
    }
  }
  while (remaining < 0) {
    --counts[largest_count(counts)];
    ++remaining;
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (probs[i] > 0.0 && counts[i] == 0) {
      --counts[largest_count(counts)];
      ++counts[i];
    }
  }
  return ProbabilityTable(std::move(counts), total);
}

std::vector<TableIssue> validate(const ProbabilityTable& table,
                                 const Alphabet& alphabet) {
  std::vector<TableIssue> issues;
  if (table.size() != alphabet.size()) {
    issues.push_back({TableIssue::Kind::kLengthMismatch,
                      "table has " + std::to_string(table.size()) +
                          " counts, alphabet has " +
                          std::to_string(alphabet.size()) + " symbols"});
  }
  std::uint64_t sum = 0;
  bool any_positive = false;
  for (auto c : table.counts()) {
    sum += c;
    any_positive = any_positive || c > 0;
  }
  if (sum != table.total()) {
    issues.push_back({TableIssue::Kind::kTotalMismatch,
                      "counts sum to " + std::to_string(sum) + ", total is " +
                          std::to_string(table.total())});
  }
  if (!any_positive) {
    issues.push_back({TableIssue::Kind::kAllZero, "no symbol has a positive count"});
  }
  if (table.total() > kMaxTableTotal) {
    issues.push_back({TableIssue::Kind::kTotalTooLarge,
                      "total " + std::to_string(table.total()) + " exceeds 65536"});
  }
  return issues;
}

void require_valid(const ProbabilityTable& table, const Alphabet& alphabet) {
  const auto issues = validate(table, alphabet);
  if (!issues.empty()) throw Error(ErrorCode::kInvalidTable, issues.front().detail);
}

std::string serialize_model(const ProbabilityTable& table) {
  std::ostringstream out;
  out << "total " << table.total() << '\n';
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << i << ' ' << table.counts()[i] << '\n';
  }
  return out.str();
}

ProbabilityTable parse_model(std::string_view text) {
  std::vector<std::uint32_t> counts;
  std::optional<std::uint64_t> total;
  std::size_t line_no = 0;
  for (std::string_view line : detail::split_lines(text)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = detail::split_fields(line);
    if (!total) {
      std::uint64_t t = 0;
      if (fields.size() != 2 || fields[0] != "total" || !detail::parse_uint(fields[1], t)) {
        throw Error(ErrorCode::kSyntax, "expected `total <T>` header", line_no);
      }
      total = t;
      continue;
    }
    std::uint64_t index = 0;
    std::uint64_t count = 0;
    if (fields.size() != 2 || !detail::parse_uint(fields[0], index) ||
        !detail::parse_uint(fields[1], count) ||
        count > std::numeric_limits<std::uint32_t>::max()) {
      throw Error(ErrorCode::kSyntax, "expected `<symbol> <count>`", line_no);
    }
    if (index != counts.size()) {
      throw Error(ErrorCode::kSyntax,
                  "symbol indexes must run 0,1,2,... in order", line_no);
    }
    counts.push_back(static_cast<std::uint32_t>(count));
  }
  if (!total) throw Error(ErrorCode::kSyntax, "missing `total` header", line_no);
  if (counts.empty()) throw Error(ErrorCode::kSyntax, "model lists no symbols", line_no);
  ProbabilityTable table(std::move(counts), *total);
  require_valid(table, Alphabet(table.size()));
  return table;
}

}  // namespace sac
