#ifndef GPTENT_RATIONAL_HPP
#define GPTENT_RATIONAL_HPP

#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace gptent {

/// Exact rational number in reduced form with positive denominator.
using Rational = boost::multiprecision::mpq_rational;
using RationalVector = std::vector<Rational>;

/// Parses "p/q", "p" or "-p/q". Throws std::invalid_argument on malformed
/// input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Formats as "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

inline bool is_zero(const Rational& value) { return value.sign() == 0; }

}  // namespace gptent

#endif  // GPTENT_RATIONAL_HPP
