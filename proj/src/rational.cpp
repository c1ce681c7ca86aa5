#include "bincat/rational.hpp"

#include <cmath>
#include <limits>
#include <regex>

#include "bincat/errors.hpp"

namespace bincat {
namespace {

BigInt pow10(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 0; i < n; ++i) r *= 10;
  return r;
}

// cpp_int reads a leading 0 as an octal prefix
BigInt decimal_integer(const std::string& text) {
  std::size_t sign = (!text.empty() && (text[0] == '+' || text[0] == '-')) ? 1 : 0;
  std::size_t first = text.find_first_not_of('0', sign);
  const std::string digits = first == std::string::npos ? "0" : text.substr(first);
  const BigInt v(digits);
  return (sign && text[0] == '-') ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  static const std::regex kFraction(R"(^\s*([+-]?\d+)\s*/\s*([+-]?\d+)\s*$)");
  static const std::regex kDecimal(R"(^\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*$)");
  const std::string s(text);
  std::smatch m;
  if (std::regex_match(s, m, kFraction)) {
    const BigInt num = decimal_integer(m[1].str());
    const BigInt den = decimal_integer(m[2].str());
    if (den == 0) throw InvalidParams("zero denominator in '" + s + "'");
    return Rational(num, den);
  }
  if (std::regex_match(s, m, kDecimal) && (m[2].length() > 0 || m[3].length() > 0)) {
    const std::string digits = m[2].str() + m[3].str();
    const BigInt mantissa = decimal_integer(digits);
    long exponent = -static_cast<long>(m[3].length());
    if (m[4].matched) {
      const long e = std::stol(m[4].str());
      if (std::labs(e) > 10000) throw InvalidParams("exponent out of range in '" + s + "'");
      exponent += e;
    }
    Rational r = exponent >= 0 ? Rational(mantissa * pow10(static_cast<unsigned>(exponent)))
                               : Rational(mantissa, pow10(static_cast<unsigned>(-exponent)));
    return m[1].str() == "-" ? Rational(-r) : r;
  }
  throw InvalidParams("not a number: '" + s + "'");
}

Rational exact_rational(long double x) {
  if (!std::isfinite(x)) throw InvalidParams("non-finite value");
  if (x == 0) return Rational(0);
  int e = 0;
  const long double m = std::frexp(std::fabs(x), &e);  // m in [0.5, 1)
  constexpr int kBits = std::numeric_limits<long double>::digits;
  const auto mant = static_cast<unsigned long long>(std::ldexp(m, kBits));
  Rational r{BigInt(mant)};
  const int shift = e - kBits;
  if (shift >= 0) {
    r *= Rational(BigInt(1) << shift);
  } else {
    r /= Rational(BigInt(1) << -shift);
  }
  return x < 0 ? Rational(-r) : r;
}

long double to_long_double(const Rational& x) { return x.convert_to<long double>(); }

CertifiedInterval enclose(const Rational& x) {
  const long double inf = std::numeric_limits<long double>::infinity();
  const long double approx = to_long_double(x);
  long double lo = approx;
  long double hi = approx;
  while (exact_rational(lo) > x) lo = std::nextafter(lo, -inf);
  while (exact_rational(hi) < x) hi = std::nextafter(hi, inf);
  if (exact_rational(lo) != x && exact_rational(hi) == x) lo = hi;
  if (exact_rational(hi) != x && exact_rational(lo) == x) hi = lo;
  return {lo, hi};
}

std::string to_string(const Rational& x) { return x.str(); }

}  // namespace bincat
