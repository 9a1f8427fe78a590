#ifndef WREATH_RATIONAL_HPP
#define WREATH_RATIONAL_HPP

#include <cstdint>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "error.hpp"

namespace wreath {

// Expression templates off: values, not lazy expressions, flow through auto
// and std::max.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline Rational make_rational(BigInt num, BigInt den) {
  if (den == 0) {
    throw FormatError("rational with zero denominator");
  }
  return Rational(std::move(num), std::move(den));
}

inline double to_double(Rational const& r) {
  return r.convert_to<double>();
}

inline std::string to_string(Rational const& r) {
  return r.str();
}

namespace detail {

inline nlohmann::json big_to_json(BigInt const& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() &&
      v <= std::numeric_limits<std::int64_t>::max()) {
    return v.convert_to<std::int64_t>();
  }
  return v.str();
}

inline BigInt big_from_json(nlohmann::json const& j) {
  if (j.is_number_integer()) {
    return BigInt(j.get<std::int64_t>());
  }
  if (j.is_string()) {
    auto const s = j.get<std::string>();
    auto const digits = s.find_first_not_of("+-");
    if (s.empty() || digits == std::string::npos || digits > 1 ||
        s.find_first_not_of("0123456789", digits) != std::string::npos) {
      throw FormatError("not an integer: '" + s + "'");
    }
    return BigInt(s);
  }
  throw FormatError("expected an integer, got " + j.dump());
}

// Exact value of a decimal literal such as "0.125", "-3", "1e-3".
inline Rational parse_decimal(std::string const& text) {
  std::string mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string::npos) {
    mantissa = text.substr(0, e);
    try {
      exponent = std::stol(text.substr(e + 1));
    } catch (std::exception const&) {
      throw FormatError("bad exponent in '" + text + "'");
    }
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa.erase(0, 1);
  }
  std::string digits;
  bool seen_point = false;
  for (char c : mantissa) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_point) {
        --exponent;
      }
    } else {
      throw FormatError("not a decimal number: '" + text + "'");
    }
  }
  if (digits.empty()) {
    throw FormatError("not a decimal number: '" + text + "'");
  }
  BigInt num(digits);
  BigInt scale = boost::multiprecision::pow(BigInt(10),
                                            static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  Rational r = exponent < 0 ? Rational(num, scale) : Rational(num * scale);
  return negative ? Rational(-r) : r;
}

}  // namespace detail

/// {"num": p, "den": q}; components that overflow int64 are written as
/// decimal strings.
inline nlohmann::json rational_to_json(Rational const& r) {
  return {{"num", detail::big_to_json(boost::multiprecision::numerator(r))},
          {"den", detail::big_to_json(boost::multiprecision::denominator(r))}};
}

/// Accepts {"num","den"}, "p/q", a decimal string, or a JSON number. A JSON
/// float is read from its shortest round-trip text, so 0.1 becomes 1/10.
inline Rational rational_from_json(nlohmann::json const& j) {
  if (j.is_object()) {
    if (!j.contains("num") || !j.contains("den")) {
      throw FormatError("rational object needs 'num' and 'den'");
    }
    return make_rational(detail::big_from_json(j.at("num")),
                         detail::big_from_json(j.at("den")));
  }
  if (j.is_number_integer()) {
    return Rational(j.get<std::int64_t>());
  }
  if (j.is_number_float()) {
    return detail::parse_decimal(j.dump());
  }
  if (j.is_string()) {
    auto const s = j.get<std::string>();
    if (auto slash = s.find('/'); slash != std::string::npos) {
      return make_rational(detail::big_from_json(s.substr(0, slash)),
                           detail::big_from_json(s.substr(slash + 1)));
    }
    return detail::parse_decimal(s);
  }
  throw FormatError("expected a rational, got " + j.dump());
}

}  // namespace wreath

#endif  // WREATH_RATIONAL_HPP
