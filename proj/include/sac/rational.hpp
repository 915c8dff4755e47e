#ifndef SAC_RATIONAL_HPP_
#define SAC_RATIONAL_HPP_

#include <boost/multiprecision/cpp_int.hpp>

namespace sac {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// log2 of a positive big integer, accurate to double precision even when the
// value is far outside the range of double.
double log2_big(const BigInt& value);

// log2 of a positive rational.
double log2_rational(const Rational& value);

// Smallest integer n with 2^n >= 1/q, for 0 < q <= 1. Exact.
std::int64_t ceil_neg_log2(const Rational& q);

}  // namespace sac

#endif  // SAC_RATIONAL_HPP_
