#include "gptent/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace gptent {

namespace {

using Integer = boost::multiprecision::mpz_int;

Integer parse_integer(std::string_view text, std::string_view whole) {
  std::size_t start = (!text.empty() && (text[0] == '-' || text[0] == '+')) ? 1 : 0;
  if (start == text.size()) {
    throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
  }
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
    }
  }
  std::string digits(text[0] == '+' ? text.substr(1) : text);
  return Integer(digits);
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  return text;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = trim(text);
  auto slash = body.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_integer(body, text));
  }
  Integer num = parse_integer(trim(body.substr(0, slash)), text);
  Integer den = parse_integer(trim(body.substr(slash + 1)), text);
  if (den == 0) {
    throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  }
  return Rational(num, den);
}

std::string to_string(const Rational& value) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace gptent
