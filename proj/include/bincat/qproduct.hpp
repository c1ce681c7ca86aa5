#pragma once

#include "bincat/interval.hpp"
#include "bincat/model.hpp"

namespace bincat {

/// Tail-control pair (a, b) for the truncation bound of
///   f(p, lambda) = prod_{k>=0} (1 + lambda p^k).
/// The upper bound exp((a/b) p^M) * prod_{k<=M} is valid when p < a/(b lambda + a).
struct TailBound {
  int a = 1;
  int b = 1;
};

/// Tails matching the comparison against each dispersion model.
inline constexpr TailBound kTailTree2{2, 1};
inline constexpr TailBound kTailTree3{3, 2};
inline constexpr TailBound kTailFree{1, 1};

/// True when p < a/(b lambda + a), decided exactly.
bool tail_bound_applies(const ModelParams& params, TailBound tail);

/// [P_M, exp((a/b) p^M) P_M] with P_M = prod_{k=0}^{M} (1 + lambda p^k), both ends
/// rounded outward. Throws PreconditionViolated when the tail bound does not apply.
CertifiedInterval product_bounds(const ModelParams& params, TailBound tail, int M);

/// [P_M, exp(lambda p^{M+1} / (1 - p)) P_M]. Valid for every p in (0, 1) and never
/// wider than product_bounds at the same M.
CertifiedInterval product_bounds_geometric_tail(const ModelParams& params, int M);

/// Certified lower bound P_M alone; defined for every p in (0, 1).
long double product_lower_bound(const ModelParams& params, int M);

/// (1 + lambda) exp(sum_{n=1}^{terms} (-1)^{n+1}/n (lambda p)^n / (1 - p^n)).
/// Requires lambda p < 1 - p for absolute convergence; throws PreconditionViolated.
long double product_log_series(const ModelParams& params, int terms);

/// Bound on the absolute value of the omitted log-series terms n > terms.
long double log_series_tail_bound(const ModelParams& params, int terms);

}  // namespace bincat
