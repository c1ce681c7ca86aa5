#pragma once

#include <optional>
#include <vector>

#include "bincat/interval.hpp"
#include "bincat/model.hpp"
#include "bincat/rational.hpp"

namespace bincat {

/// Law of the survivor count N right after a catastrophe, before dispersion:
///   P(N = 0) = beta,  P(N = n) = alpha c^n  for n >= 1.
struct SurvivorLaw {
  long double beta = 1;
  long double alpha = 0;
  long double c = 0;

  long double pmf(long long n) const;
  /// beta + alpha c / (1 - c); equals 1 for a proper law.
  long double total_mass() const;
  /// sum_n n alpha c^n = alpha c / (1 - c)^2.
  long double mean() const;
};

SurvivorLaw survivor_law(const ModelParams& params);

/// Offspring law of the colony branching process. For finite d the vector
/// holds p_0..p_d; for free dispersion (d = infinity) the law is the survivor
/// law itself and `probs` is empty.
struct OffspringPMF {
  std::optional<int> d;
  std::vector<long double> probs;
  std::optional<SurvivorLaw> geometric;

  long double mean() const;
  long double total() const;
};

/// Closed forms for d = 2, 3; truncated positive series for d >= 4.
/// Throws InvalidParams for d < 2.
OffspringPMF offspring_pmf(const ModelParams& params, int d);

/// Series evaluation p_k = alpha C(d,k) sum_{n>=k} T(n,k) (c/d)^n for every d >= 2,
/// truncated once the geometric tail bound drops below `tail_tolerance`.
OffspringPMF offspring_pmf_series(const ModelParams& params, int d, long double tail_tolerance = 1e-16L);

OffspringPMF offspring_pmf_free(const ModelParams& params);

/// Number of surjections from an n-set onto a k-set (inclusion-exclusion).
BigInt surjection_count(unsigned n, unsigned k);

/// Law of the number of distinct labels when n survivors each pick one of d
/// labels uniformly: p_{n,k} = C(d,k) T(n,k) / d^n. Index k runs 0..min(n,d).
std::vector<Rational> label_distribution_exact(unsigned n, unsigned d);
std::vector<long double> label_distribution(unsigned n, unsigned d);

/// g(lambda, p) appearing in the d = 3 extinction time.
struct AuxG {
  long double value = 0;
};
AuxG aux_g(const ModelParams& params);

/// (1/lambda) (f(p, lambda) - 1), certified.
struct ProductPrecision {
  /// Fixed truncation index; when empty M grows until the relative width target is met.
  std::optional<int> terms;
  long double relative_width = 1e-17L;
  int max_terms = 1 << 16;
};
CertifiedInterval mean_time_no_dispersion(const ModelParams& params, const ProductPrecision& precision = {});

MeanExtinction mean_time_tree2(const ModelParams& params);
MeanExtinction mean_time_tree3(const ModelParams& params);
MeanExtinction mean_time_free(const ModelParams& params);

/// Dispatch for tree d in {2, 3} and free dispersion.
MeanExtinction mean_time_dispersion(const ModelParams& params, const Topology& topo);

/// Mean extinction time of a rate-1 continuous time branching process started
/// from one particle.
///
/// Binary offspring law (p0, p1, p2) with p2 > 0.
MeanExtinction ctbp_mean_binary(long double p0, long double p1, long double p2);
/// Ternary offspring law (p0, p1, p2, p3) with p3 > 0.
MeanExtinction ctbp_mean_ternary(long double p0, long double p1, long double p2, long double p3);
/// Offspring law P(0) = beta, P(n) = alpha c^n. Finite exactly when c < beta.
MeanExtinction ctbp_mean_geometric(const SurvivorLaw& law);

}  // namespace bincat
