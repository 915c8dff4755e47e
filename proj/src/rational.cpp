#include "sac/rational.hpp"

#include <cmath>

#include "sac/error.hpp"

namespace sac {

double log2_big(const BigInt& value) {
  if (value <= 0) throw Error(ErrorCode::kOutOfRange, "log2 of a non-positive value");
  const auto top = static_cast<std::int64_t>(boost::multiprecision::msb(value));
  if (top < 53) return std::log2(value.convert_to<double>());
  const std::int64_t shift = top - 52;
  const BigInt head = value >> shift;
  return std::log2(head.convert_to<double>()) + static_cast<double>(shift);
}

double log2_rational(const Rational& value) {
  return log2_big(boost::multiprecision::numerator(value)) -
         log2_big(boost::multiprecision::denominator(value));
}

std::int64_t ceil_neg_log2(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (num <= 0 || num > den) {
    throw Error(ErrorCode::kOutOfRange, "ceil_neg_log2 needs 0 < q <= 1");
  }
  auto n = static_cast<std::int64_t>(boost::multiprecision::msb(den)) -
           static_cast<std::int64_t>(boost::multiprecision::msb(num));
  if (n < 0) n = 0;
  while ((num << n) < den) ++n;
  while (n > 0 && (num << (n - 1)) >= den) --n;
  return n;
}

}  // namespace sac
