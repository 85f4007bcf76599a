#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace sofic {

/// All distances, fractions and tolerances are exact.
using Rational = boost::rational<std::int64_t>;

inline Rational ratio(std::int64_t num, std::int64_t den) { return Rational(num, den); }

std::string to_string(const Rational& r);

/// Decimal rendering with a fixed number of digits, truncated toward zero.
std::string to_decimal(const Rational& r, int digits = 6);

/// Parses "p/q" or "p".
Rational parse_rational(const std::string& text);

}  // namespace sofic
