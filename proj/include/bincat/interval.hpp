#pragma once

#include <cfenv>
#include <string>

namespace bincat {

/// Closed bracket [lo, hi] that contains a true real value.
///
/// Arithmetic below rounds lo toward -inf and hi toward +inf, so the
/// containment survives every floating point operation. Transcendental
/// functions are evaluated in round-to-nearest and widened by a fixed
/// number of ulps, which covers the documented libm error.
struct CertifiedInterval {
  long double lo = 0;
  long double hi = 0;

  static CertifiedInterval point(long double x) { return {x, x}; }

  long double width() const { return hi - lo; }
  long double midpoint() const { return lo + (hi - lo) / 2; }
  bool contains(long double x) const { return lo <= x && x <= hi; }
  bool strictly_below(const CertifiedInterval& o) const { return hi < o.lo; }
  bool strictly_above(const CertifiedInterval& o) const { return lo > o.hi; }
};

std::string to_string(const CertifiedInterval& x);

/// Sets the floating point rounding mode for the current thread and
/// restores the previous one on scope exit.
class RoundingModeGuard {
 public:
  explicit RoundingModeGuard(int mode) : saved_(std::fegetround()) { std::fesetround(mode); }
  ~RoundingModeGuard() { std::fesetround(saved_); }
  RoundingModeGuard(const RoundingModeGuard&) = delete;
  RoundingModeGuard& operator=(const RoundingModeGuard&) = delete;

 private:
  int saved_;
};

namespace interval {

// Ulps added on each side of a libm result.
inline constexpr int kLibmPaddingUlps = 8;

CertifiedInterval add(const CertifiedInterval& a, const CertifiedInterval& b);
CertifiedInterval sub(const CertifiedInterval& a, const CertifiedInterval& b);
CertifiedInterval mul(const CertifiedInterval& a, const CertifiedInterval& b);
// b must not contain zero.
CertifiedInterval div(const CertifiedInterval& a, const CertifiedInterval& b);
// a.lo clamped at zero.
CertifiedInterval sqrt(const CertifiedInterval& a);

// Monotone increasing functions.
CertifiedInterval exp(const CertifiedInterval& a);
CertifiedInterval log1p(const CertifiedInterval& a);
CertifiedInterval atanh(const CertifiedInterval& a);

CertifiedInterval neg(const CertifiedInterval& a);

long double pad_down(long double x, int ulps = kLibmPaddingUlps);
long double pad_up(long double x, int ulps = kLibmPaddingUlps);

// Outward conversion to double for output.
double lower_double(long double x);
double upper_double(long double x);

}  // namespace interval
}  // namespace bincat
