#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "bincat/interval.hpp"

namespace bincat {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "num/den", a decimal ("0.25") or scientific ("1e-6") literal
/// into the exact rational it denotes. Throws InvalidParams.
Rational parse_rational(std::string_view text);

/// Exact value of a binary floating point number.
Rational exact_rational(long double x);

/// Nearest long double.
long double to_long_double(const Rational& x);

/// Tightest long double bracket around x (a point when x is representable).
CertifiedInterval enclose(const Rational& x);

std::string to_string(const Rational& x);

}  // namespace bincat
