#include "bincat/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bincat {

std::string to_string(const CertifiedInterval& x) {
  std::ostringstream os;
  os.precision(std::numeric_limits<long double>::max_digits10);
  os << '[' << x.lo << ", " << x.hi << ']';
  return os.str();
}

namespace interval {
namespace {

// Operands and results pass through volatile storage so that no
// arithmetic is moved across the rounding mode switch.
template <typename Op>
long double rounded(int mode, long double a, long double b, Op op) {
  RoundingModeGuard guard(mode);
  volatile long double va = a;
  volatile long double vb = b;
  volatile long double r = op(static_cast<long double>(va), static_cast<long double>(vb));
  return r;
}

constexpr auto kAdd = [](long double a, long double b) { return a + b; };
constexpr auto kSub = [](long double a, long double b) { return a - b; };
constexpr auto kMul = [](long double a, long double b) { return a * b; };
constexpr auto kDiv = [](long double a, long double b) { return a / b; };

template <typename Fn>
long double nearest(Fn fn, long double x) {
  RoundingModeGuard guard(FE_TONEAREST);
  volatile long double vx = x;
  volatile long double r = fn(static_cast<long double>(vx));
  return r;
}

}  // namespace

long double pad_down(long double x, int ulps) {
  const long double inf = std::numeric_limits<long double>::infinity();
  for (int i = 0; i < ulps; ++i) x = std::nextafter(x, -inf);
  return x;
}

long double pad_up(long double x, int ulps) {
  const long double inf = std::numeric_limits<long double>::infinity();
  for (int i = 0; i < ulps; ++i) x = std::nextafter(x, inf);
  return x;
}

double lower_double(long double x) {
  double d = static_cast<double>(x);
  if (static_cast<long double>(d) > x) d = std::nextafter(d, -std::numeric_limits<double>::infinity());
  return d;
}

double upper_double(long double x) {
  double d = static_cast<double>(x);
  if (static_cast<long double>(d) < x) d = std::nextafter(d, std::numeric_limits<double>::infinity());
  return d;
}

CertifiedInterval add(const CertifiedInterval& a, const CertifiedInterval& b) {
  return {rounded(FE_DOWNWARD, a.lo, b.lo, kAdd), rounded(FE_UPWARD, a.hi, b.hi, kAdd)};
}

CertifiedInterval sub(const CertifiedInterval& a, const CertifiedInterval& b) {
  return {rounded(FE_DOWNWARD, a.lo, b.hi, kSub), rounded(FE_UPWARD, a.hi, b.lo, kSub)};
}

CertifiedInterval neg(const CertifiedInterval& a) { return {-a.hi, -a.lo}; }

CertifiedInterval mul(const CertifiedInterval& a, const CertifiedInterval& b) {
  const long double lows[] = {
      rounded(FE_DOWNWARD, a.lo, b.lo, kMul), rounded(FE_DOWNWARD, a.lo, b.hi, kMul),
      rounded(FE_DOWNWARD, a.hi, b.lo, kMul), rounded(FE_DOWNWARD, a.hi, b.hi, kMul)};
  const long double highs[] = {
      rounded(FE_UPWARD, a.lo, b.lo, kMul), rounded(FE_UPWARD, a.lo, b.hi, kMul),
      rounded(FE_UPWARD, a.hi, b.lo, kMul), rounded(FE_UPWARD, a.hi, b.hi, kMul)};
  return {*std::min_element(std::begin(lows), std::end(lows)),
          *std::max_element(std::begin(highs), std::end(highs))};
}

CertifiedInterval div(const CertifiedInterval& a, const CertifiedInterval& b) {
  const long double lows[] = {
      rounded(FE_DOWNWARD, a.lo, b.lo, kDiv), rounded(FE_DOWNWARD, a.lo, b.hi, kDiv),
      rounded(FE_DOWNWARD, a.hi, b.lo, kDiv), rounded(FE_DOWNWARD, a.hi, b.hi, kDiv)};
  const long double highs[] = {
      rounded(FE_UPWARD, a.lo, b.lo, kDiv), rounded(FE_UPWARD, a.lo, b.hi, kDiv),
      rounded(FE_UPWARD, a.hi, b.lo, kDiv), rounded(FE_UPWARD, a.hi, b.hi, kDiv)};
  return {*std::min_element(std::begin(lows), std::end(lows)),
          *std::max_element(std::begin(highs), std::end(highs))};
}

CertifiedInterval sqrt(const CertifiedInterval& a) {
  // IEEE sqrt is correctly rounded in every mode.
  constexpr auto kSqrt = [](long double x, long double) { return std::sqrt(x); };
  const long double lo = std::max(a.lo, 0.0L);
  return {rounded(FE_DOWNWARD, lo, 0, kSqrt), rounded(FE_UPWARD, a.hi, 0, kSqrt)};
}

CertifiedInterval exp(const CertifiedInterval& a) {
  const auto f = [](long double x) { return std::exp(x); };
  return {std::max(pad_down(nearest(f, a.lo)), 0.0L), pad_up(nearest(f, a.hi))};
}

CertifiedInterval log1p(const CertifiedInterval& a) {
  const auto f = [](long double x) { return std::log1p(x); };
  return {pad_down(nearest(f, a.lo)), pad_up(nearest(f, a.hi))};
}

CertifiedInterval atanh(const CertifiedInterval& a) {
  const auto f = [](long double x) { return std::atanh(x); };
  return {pad_down(nearest(f, a.lo)), pad_up(nearest(f, a.hi))};
}

}  // namespace interval
}  // namespace bincat
