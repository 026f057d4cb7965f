#pragma once

#include <gmpxx.h>

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vod {

/// Arbitrary-precision rational. GMP keeps every mpq_class result in
/// lowest terms with a positive denominator.
using Rational = mpq_class;
using Integer = mpz_class;
using RationalVector = std::vector<Rational>;

/// Parses "n", "n/d", or a finite decimal such as "-0.95" or "1.5e-2".
/// Decimals are converted exactly (0.95 -> 19/20).
Rational parse_rational(std::string_view text);

/// "num/den", or "num" when the denominator is 1.
std::string to_string(const Rational& value);
std::string to_string(const Integer& value);

/// Exact value of a finite double.
Rational from_double(double value);

inline double to_double(const Rational& value) { return value.get_d(); }

std::vector<double> to_doubles(std::span<const Rational> values);

/// Least common multiple of the denominators.
Integer denominator_lcm(std::span<const Rational> values);

Integer binomial(unsigned long n, unsigned long k);

/// Lexicographic three-way comparison of two equal-length vectors.
std::strong_ordering lex_compare(std::span<const Rational> a, std::span<const Rational> b);

struct LexLess {
  bool operator()(const RationalVector& a, const RationalVector& b) const {
    return lex_compare(a, b) < 0;
  }
};

Rational sum(std::span<const Rational> values);

}  // namespace vod
