#pragma once
// Test-only reference implementations. None of these share code paths with
// the library: products and closed forms are evaluated in 50-digit software
// floating point, label laws by enumeration, and extinction times by a plain
// particle-count Monte Carlo.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_50;
using Rational = boost::multiprecision::cpp_rational;

/// prod_{k>=0} (1 + lambda p^k), truncated once the remaining factor is below 1e-55.
inline Big product(const Big& lambda, const Big& p) {
  Big prod = 1;
  Big pk = 1;
  const Big cutoff("1e-55");
  for (int k = 0; k < 2000000; ++k) {
    prod *= 1 + lambda * pk;
    pk *= p;
    if (lambda * pk / (1 - p) < cutoff) break;
  }
  return prod;
}

inline Big mean_no_dispersion(const Big& lambda, const Big& p) { return (product(lambda, p) - 1) / lambda; }

inline Big mean_tree2(const Big& l, const Big& p) {
  using boost::multiprecision::log;
  const Big A = (1 - p) * (l * p + 2);
  const Big B = l * p * p * (l + 1);
  return (l * p + 1) * (l * p + 2) / (l * p * p * (l + 1)) * log(A / (A - B));
}

inline Big aux_g(const Big& l, const Big& p) {
  using boost::multiprecision::sqrt;
  return sqrt(l * l * p * p * p * (l + 1) * (6 + l * p - 3 * p) / ((l * p + 3) * (l * p + 1)));
}

inline Big mean_tree3(const Big& l, const Big& p) {
  using boost::multiprecision::log;
  const Big g = aux_g(l, p);
  const Big A = 3 - 3 * p - l * p;
  return (2 * l * p + 3) / (2 * g) * log((A + g) / (A - g));
}

inline Big mean_free(const Big& l, const Big& p) {
  using boost::multiprecision::log;
  return 1 - (l + 1) / l * log(1 - l * p / (1 - p));
}

/// p_{n,k} by enumerating all d^n labelings.
inline std::vector<Rational> enumerate_labels(unsigned n, unsigned d) {
  std::vector<std::uint64_t> counts(std::min(n, d) + 1, 0);
  std::vector<unsigned> labels(n, 0);
  std::uint64_t total = 0;
  for (;;) {
    std::vector<bool> seen(d, false);
    unsigned distinct = 0;
    for (unsigned l : labels) {
      if (!seen[l]) {
        seen[l] = true;
        ++distinct;
      }
    }
    ++counts[distinct];
    ++total;
    unsigned i = 0;
    while (i < n && ++labels[i] == d) labels[i++] = 0;
    if (i == n) break;
  }
  std::vector<Rational> out;
  for (auto c : counts) out.emplace_back(Rational(c, total));
  return out;
}

struct McResult {
  double mean;
  double std_error;
};

/// Extinction time of a rate-1 branching process from one particle: with n
/// particles the next death is Exp(n) away and replaces one particle by a
/// draw from `offspring`.
inline McResult branching_extinction(const std::function<long(std::mt19937_64&)>& offspring, long reps,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double sum = 0;
  double sq = 0;
  for (long r = 0; r < reps; ++r) {
    long n = 1;
    double t = 0;
    while (n > 0) {
      t += std::exponential_distribution<double>(static_cast<double>(n))(rng);
      n += offspring(rng) - 1;
    }
    sum += t;
    sq += t * t;
  }
  const double mean = sum / reps;
  const double var = (sq - reps * mean * mean) / (reps - 1);
  return {mean, std::sqrt(var / reps)};
}

/// Sampler for a finite probability vector.
inline std::function<long(std::mt19937_64&)> finite_law(std::vector<double> probs) {
  return [dist = std::discrete_distribution<long>(probs.begin(), probs.end())](std::mt19937_64& rng) mutable {
    return dist(rng);
  };
}

}  // namespace oracle
