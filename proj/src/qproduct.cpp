#include "bincat/qproduct.hpp"

#include <cfenv>
#include <cmath>
#include <string>

#include "bincat/errors.hpp"

namespace bincat {
namespace {

// Below this, 1 + x rounds to 1 in round-to-nearest long double.
constexpr long double kNegligible = 0x1p-70L;

struct PartialProduct {
  long double lo;     // <= prod_{k=0}^{M}
  long double hi;     // >= prod_{k=0}^{M}
  long double pM_hi;  // >= p^M
};

long double one_minus_p_down(const ModelParams& params) {
  RoundingModeGuard guard(FE_DOWNWARD);
  volatile long double r = 1.0L - params.p_enclosure().hi;
  return r;
}

PartialProduct partial_product(const ModelParams& params, int M) {
  if (M < 0) throw PreconditionViolated("truncation index M must be nonnegative");
  PartialProduct out{};
  {
    RoundingModeGuard guard(FE_DOWNWARD);
    const long double lambda = params.lambda_enclosure().lo;
    const long double p = params.p_enclosure().lo;
    volatile long double prod = 1.0L + lambda;
    volatile long double pk = 1.0L;
    for (int k = 1; k <= M; ++k) {
      pk = pk * p;
      const long double term = 1.0L + lambda * pk;
      if (term == 1.0L) break;
      prod = prod * term;
    }
    out.lo = prod;
  }
  {
    const long double one_minus_p = one_minus_p_down(params);
    RoundingModeGuard guard(FE_UPWARD);
    const long double lambda = params.lambda_enclosure().hi;
    const long double p = params.p_enclosure().hi;
    volatile long double prod = 1.0L + lambda;
    volatile long double pk = 1.0L;
    for (int k = 1; k <= M; ++k) {
      pk = pk * p;
      const long double rest = lambda * pk / one_minus_p;
      if (rest < kNegligible) {
        // prod_{j=k}^{M} (1 + lambda p^j) <= exp(rest) <= 1 + 2 rest.
        prod = prod * (1.0L + 2.0L * rest);
        break;
      }
      prod = prod * (1.0L + lambda * pk);
    }
    out.hi = prod;
    // After an early exit pk = p^k >= p^M, still an upper bound.
    out.pM_hi = pk;
  }
  return out;
}

long double mul_up(long double a, long double b) {
  RoundingModeGuard guard(FE_UPWARD);
  volatile long double r = a * b;
  return r;
}

}  // namespace

bool tail_bound_applies(const ModelParams& params, TailBound tail) {
  if (tail.a <= 0 || tail.b <= 0) throw PreconditionViolated("tail parameters a, b must be positive");
  const Rational a(tail.a);
  const Rational b(tail.b);
  return params.p_exact() * (b * params.lambda_exact() + a) < a;
}

CertifiedInterval product_bounds(const ModelParams& params, TailBound tail, int M) {
  if (!tail_bound_applies(params, tail)) {
    throw PreconditionViolated("tail bound (a=" + std::to_string(tail.a) + ", b=" + std::to_string(tail.b) +
                               ") needs p < a/(b*lambda + a)");
  }
  const PartialProduct partial = partial_product(params, M);
  long double exponent = 0;
  {
    RoundingModeGuard guard(FE_UPWARD);
    volatile long double ratio = static_cast<long double>(tail.a) / static_cast<long double>(tail.b);
    volatile long double x = ratio * partial.pM_hi;
    exponent = x;
  }
  const long double factor = interval::exp(CertifiedInterval::point(exponent)).hi;
  return {partial.lo, mul_up(partial.hi, factor)};
}

CertifiedInterval product_bounds_geometric_tail(const ModelParams& params, int M) {
  const PartialProduct partial = partial_product(params, M);
  const long double one_minus_p = one_minus_p_down(params);
  long double exponent = 0;
  {
    RoundingModeGuard guard(FE_UPWARD);
    volatile long double x = params.lambda_enclosure().hi * partial.pM_hi * params.p_enclosure().hi / one_minus_p;
    exponent = x;
  }
  const long double factor = interval::exp(CertifiedInterval::point(exponent)).hi;
  return {partial.lo, mul_up(partial.hi, factor)};
}

long double product_lower_bound(const ModelParams& params, int M) { return partial_product(params, M).lo; }

long double product_log_series(const ModelParams& params, int terms) {
  if (!(params.lambda_exact() * params.p_exact() < 1 - params.p_exact())) {
    throw PreconditionViolated("log series needs lambda*p < 1 - p");
  }
  if (terms < 1) throw PreconditionViolated("log series needs at least one term");
  const long double lambda = params.lambda();
  const long double p = params.p();
  const long double x = lambda * p;
  long double xn = 1.0L;
  long double pn = 1.0L;
  long double sum = 0;
  for (int n = 1; n <= terms; ++n) {
    xn *= x;
    pn *= p;
    const long double a = xn / (n * (1.0L - pn));
    sum += (n % 2 == 1) ? a : -a;
  }
  return (1.0L + lambda) * std::exp(sum);
}

long double log_series_tail_bound(const ModelParams& params, int terms) {
  const long double x = params.lambda() * params.p();
  const long double p = params.p();
  return std::pow(x, static_cast<long double>(terms + 1)) / ((terms + 1) * (1.0L - p) * (1.0L - x));
}

}  // namespace bincat
