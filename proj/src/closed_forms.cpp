#include "bincat/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bincat/errors.hpp"
#include "bincat/qproduct.hpp"

namespace bincat {
namespace {

// Points closer than this (relative) to a critical threshold report Infinite:
// the log arguments lose all precision there.
constexpr long double kBoundaryBand = 1e-12L;
// Tolerance for probability vectors supplied by callers.
constexpr long double kMassTolerance = 1e-12L;

bool near_threshold(const ModelParams& params, const Topology& topo) {
  const auto threshold = survival_threshold(params.lambda_exact(), topo);
  if (!threshold) return false;
  const long double t = to_long_double(*threshold);
  return (t - params.p()) / t < kBoundaryBand;
}

// Shared regime gate for the dispersion models. Empty means "evaluate the formula".
std::optional<MeanExtinction> regime_gate(const ModelParams& params, const Topology& topo) {
  switch (classify(params, topo)) {
    case Regime::SupercriticalSurvival: return MeanExtinction::undefined_infinite();
    case Regime::CriticalInfiniteMean: return MeanExtinction::infinite();
    case Regime::SubcriticalFiniteMean: break;
  }
  if (near_threshold(params, topo)) return MeanExtinction::infinite();
  return std::nullopt;
}

void check_probability(long double q, const char* name) {
  if (!(q >= 0 && q <= 1)) throw PreconditionViolated(std::string(name) + " must be a probability");
}

// Classifies an offspring mean: -1 below one, 0 at one, throws above.
int mean_side(long double mean) {
  if (mean > 1 + kMassTolerance) throw MeanAboveOne("offspring mean " + std::to_string(static_cast<double>(mean)) + " exceeds 1");
  if (mean >= 1 - kMassTolerance) return 0;
  return -1;
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

}  // namespace

long double SurvivorLaw::pmf(long long n) const {
  if (n < 0) return 0;
  if (n == 0) return beta;
  return alpha * std::pow(c, static_cast<long double>(n));
}

long double SurvivorLaw::total_mass() const { return beta + alpha * c / (1 - c); }

long double SurvivorLaw::mean() const { return alpha * c / ((1 - c) * (1 - c)); }

SurvivorLaw survivor_law(const ModelParams& params) {
  const long double lambda = params.lambda();
  const long double p = params.p();
  const long double denom = lambda * p + 1;
  return {(1 - p) / denom, (lambda + 1) / (lambda * denom), lambda * p / denom};
}

long double OffspringPMF::mean() const {
  if (geometric) return geometric->mean();
  long double m = 0;
  for (std::size_t k = 1; k < probs.size(); ++k) m += static_cast<long double>(k) * probs[k];
  return m;
}

long double OffspringPMF::total() const {
  if (geometric) return geometric->total_mass();
  return std::accumulate(probs.begin(), probs.end(), 0.0L);
}

OffspringPMF offspring_pmf(const ModelParams& params, int d) {
  if (d < 2) throw InvalidParams("offspring law needs d >= 2");
  const SurvivorLaw law = survivor_law(params);
  const long double a = law.alpha;
  const long double c = law.c;
  if (d == 2) {
    // p_2 written without the cancellation in 1 - p_0 - p_1.
    return {2, {law.beta, 2 * a * c / (2 - c), a * c * c / ((1 - c) * (2 - c))}, std::nullopt};
  }
  if (d == 3) {
    return {3,
            {law.beta, 3 * a * c / (3 - c), 6 * a * c * c / ((3 - 2 * c) * (3 - c)),
             2 * a * c * c * c / ((1 - c) * (3 - c) * (3 - 2 * c))},
            std::nullopt};
  }
  return offspring_pmf_series(params, d);
}

OffspringPMF offspring_pmf_series(const ModelParams& params, int d, long double tail_tolerance) {
  if (d < 2) throw InvalidParams("offspring law needs d >= 2");
  const SurvivorLaw law = survivor_law(params);
  const long double step = law.c / d;
  // u[k] = T(n, k) (c/d)^n, advanced in n with T(n,k) = k (T(n-1,k) + T(n-1,k-1)).
  std::vector<long double> u(d + 1, 0.0L);
  std::vector<long double> sums(d + 1, 0.0L);
  std::vector<long double> choose(d + 1);
  for (int k = 0; k <= d; ++k) choose[k] = static_cast<long double>(binomial(d, k).convert_to<long double>());
  u[0] = 1;
  for (long n = 1;; ++n) {
    for (int k = std::min<long>(n, d); k >= 1; --k) u[k] = k * step * (u[k] + u[k - 1]);
    u[0] = 0;
    long double worst_tail = 0;
    for (int k = 1; k <= d; ++k) {
      sums[k] += u[k];
      // T(m,k) <= k^m, so the remaining terms sum to at most r^{n+1}/(1-r).
      const long double r = k * step;
      const long double tail = law.alpha * choose[k] * std::pow(r, static_cast<long double>(n + 1)) / (1 - r);
      worst_tail = std::max(worst_tail, tail);
    }
    if (n >= d && worst_tail < tail_tolerance) break;
  }
  OffspringPMF out{d, std::vector<long double>(d + 1), std::nullopt};
  out.probs[0] = law.beta;
  for (int k = 1; k <= d; ++k) out.probs[k] = law.alpha * choose[k] * sums[k];
  return out;
}

OffspringPMF offspring_pmf_free(const ModelParams& params) {
  return {std::nullopt, {}, survivor_law(params)};
}

BigInt surjection_count(unsigned n, unsigned k) {
  BigInt total = 0;
  for (unsigned j = 0; j <= k; ++j) {
    BigInt term = binomial(k, j) * boost::multiprecision::pow(BigInt(k - j), n);
    if (j % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
  }
  return total;
}

std::vector<Rational> label_distribution_exact(unsigned n, unsigned d) {
  if (n < 1) throw InvalidParams("label distribution needs n >= 1");
  if (d < 2) throw InvalidParams("label distribution needs d >= 2");
  const unsigned top = std::min(n, d);
  const BigInt all = boost::multiprecision::pow(BigInt(d), n);
  std::vector<Rational> out(top + 1, Rational(0));
  for (unsigned k = 1; k <= top; ++k) out[k] = Rational(binomial(d, k) * surjection_count(n, k), all);
  return out;
}

std::vector<long double> label_distribution(unsigned n, unsigned d) {
  const auto exact = label_distribution_exact(n, d);
  std::vector<long double> out(exact.size());
  std::transform(exact.begin(), exact.end(), out.begin(), [](const Rational& r) { return to_long_double(r); });
  return out;
}

AuxG aux_g(const ModelParams& params) {
  const long double l = params.lambda();
  const long double p = params.p();
  const long double radicand = l * l * p * p * p * (l + 1) * (6 + l * p - 3 * p) / ((l * p + 3) * (l * p + 1));
  return {std::sqrt(radicand)};
}

CertifiedInterval mean_time_no_dispersion(const ModelParams& params, const ProductPrecision& precision) {
  CertifiedInterval product;
  if (precision.terms) {
    product = product_bounds_geometric_tail(params, *precision.terms);
  } else {
    int M = 8;
    product = product_bounds_geometric_tail(params, M);
    while (product.width() > precision.relative_width * product.lo && M < precision.max_terms) {
      M *= 2;
      const CertifiedInterval next = product_bounds_geometric_tail(params, M);
      const bool improved = next.width() < product.width();
      product = next;
      if (!improved) break;
    }
  }
  const CertifiedInterval excess = interval::sub(product, CertifiedInterval::point(1));
  return interval::div(excess, params.lambda_enclosure());
}

MeanExtinction mean_time_tree2(const ModelParams& params) {
  if (auto gated = regime_gate(params, Topology::tree(2))) return *gated;
  const long double l = params.lambda();
  const long double p = params.p();
  const long double prefactor = (l * p + 1) * (l * p + 2) / (l * p * p * (l + 1));
  // ln[A / (A - B)] = -log1p(-B/A)
  const long double A = (1 - p) * (l * p + 2);
  const long double B = l * p * p * (l + 1);
  return MeanExtinction::finite(-prefactor * std::log1p(-B / A));
}

MeanExtinction mean_time_tree3(const ModelParams& params) {
  if (auto gated = regime_gate(params, Topology::tree(3))) return *gated;
  const long double l = params.lambda();
  const long double p = params.p();
  const long double g = aux_g(params).value;
  const long double A = 3 - 3 * p - l * p;
  // (1/(2g)) ln[(A+g)/(A-g)] = atanh(g/A)/g, which tends to 1/A as g -> 0.
  const long double t = g / A;
  const long double ratio = t == 0 ? 1 / A : std::atanh(t) / g;
  return MeanExtinction::finite((2 * l * p + 3) * ratio);
}

MeanExtinction mean_time_free(const ModelParams& params) {
  if (auto gated = regime_gate(params, Topology::free())) return *gated;
  const long double l = params.lambda();
  const long double p = params.p();
  return MeanExtinction::finite(1 - (l + 1) / l * std::log1p(-l * p / (1 - p)));
}

MeanExtinction mean_time_dispersion(const ModelParams& params, const Topology& topo) {
  switch (topo.kind()) {
    case Topology::Kind::Tree:
      if (topo.d() == 2) return mean_time_tree2(params);
      if (topo.d() == 3) return mean_time_tree3(params);
      throw InvalidParams("closed-form extinction time only for d = 2, 3");
    case Topology::Kind::Free:
      return mean_time_free(params);
    case Topology::Kind::NoDispersion:
      break;
  }
  throw InvalidParams("no-dispersion mean is an interval; use mean_time_no_dispersion");
}

MeanExtinction ctbp_mean_binary(long double p0, long double p1, long double p2) {
  check_probability(p0, "p0");
  check_probability(p1, "p1");
  check_probability(p2, "p2");
  if (std::fabs(p0 + p1 + p2 - 1) > kMassTolerance) throw PreconditionViolated("binary law must sum to 1");
  if (!(p2 > 0)) throw PreconditionViolated("binary law needs p2 > 0");
  if (mean_side(p1 + 2 * p2) == 0) return MeanExtinction::infinite();
  return MeanExtinction::finite(-std::log1p(-p2 / p0) / p2);
}

MeanExtinction ctbp_mean_ternary(long double p0, long double p1, long double p2, long double p3) {
  check_probability(p0, "p0");
  check_probability(p1, "p1");
  check_probability(p2, "p2");
  check_probability(p3, "p3");
  if (std::fabs(p0 + p1 + p2 + p3 - 1) > kMassTolerance) throw PreconditionViolated("ternary law must sum to 1");
  if (!(p3 > 0)) throw PreconditionViolated("ternary law needs p3 > 0");
  if (mean_side(p1 + 2 * p2 + 3 * p3) == 0) return MeanExtinction::infinite();
  const long double root = std::sqrt(4 * p0 * p3 + (p2 + p3) * (p2 + p3));
  const long double D = 2 * p0 - p2 - p3;
  // (1/R) ln[(D+R)/(D-R)] = 2 atanh(R/D)/R
  return MeanExtinction::finite(2 * std::atanh(root / D) / root);
}

MeanExtinction ctbp_mean_geometric(const SurvivorLaw& law) {
  if (!(law.beta > 0 && law.beta <= 1)) throw PreconditionViolated("beta must lie in (0, 1]");
  if (!(law.alpha > 0)) throw PreconditionViolated("alpha must be positive");
  if (!(law.c > 0 && law.c < 1)) throw PreconditionViolated("c must lie in (0, 1)");
  if (std::fabs(law.total_mass() - 1) > kMassTolerance) throw PreconditionViolated("survivor law must sum to 1");
  // For a proper law the mean is (1 - beta)/(1 - c), so mean < 1 iff c < beta.
  if (mean_side(law.mean()) == 0 || law.c >= law.beta) {
    if (law.c > law.beta * (1 + kMassTolerance)) throw MeanAboveOne("geometric offspring law with c > beta");
    return MeanExtinction::infinite();
  }
  return MeanExtinction::finite(1 - (1 - law.beta) / law.c * std::log1p(-law.c / law.beta));
}

}  // namespace bincat
