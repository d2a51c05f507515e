#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace qcoh {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "num/den" or a bare integer string into an exact rational.
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) {
    throw std::invalid_argument("rational: empty string");
  }
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(BigInt(text));
    }
    const BigInt num(text.substr(0, slash));
    const BigInt den(text.substr(slash + 1));
    if (den == 0) {
      throw std::invalid_argument("rational: zero denominator in \"" + text + "\"");
    }
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("rational: cannot parse \"" + text + "\"");
  }
}

/// Canonical "num/den" form with positive denominator, e.g. "-1/10", "3/1".
inline std::string format_rational(const Rational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace qcoh
