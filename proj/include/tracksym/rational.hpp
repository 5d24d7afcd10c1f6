#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace tracksym {

// All exact arithmetic in the library runs over arbitrary-precision rationals.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Canonical serialized form: "p" or "p/q", lowest terms, q > 0, no whitespace.
inline std::string format_rational(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += '/';
    s += denominator(r).str();
  }
  return s;
}

// Strict parser for the "p" / "p/q" wire format. Rejects anything else
// (decimals, whitespace, signs on the denominator, q == 0).
inline Rational parse_rational(std::string_view text) {
  const auto fail = [&]() -> Rational {
    throw std::invalid_argument("invalid rational literal: '" + std::string(text) + "'");
  };
  std::size_t pos = 0;
  const auto scan_integer = [&](bool allow_sign) -> std::string {
    std::string out;
    if (pos < text.size() && text[pos] == '-') {
      if (!allow_sign) fail();
      out += '-';
      ++pos;
    }
    const std::size_t digits_start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      out += text[pos];
      ++pos;
    }
    if (pos == digits_start) fail();
    return out;
  };

  const std::string num = scan_integer(true);
  std::string den = "1";
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    den = scan_integer(false);
  }
  if (pos != text.size()) fail();

  const BigInt d(den);
  if (d == 0) fail();
  return Rational(BigInt(num), d);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace tracksym
