#pragma once

#include <string>
#include <vector>

#include "bincat/interval.hpp"
#include "bincat/model.hpp"

namespace bincat {

/// Which mean extinction time is smaller. A larger mean is the longer-lived
/// strategy, so NoDispersionShorter means dispersion lives longer.
enum class Verdict { NoDispersionShorter, DispersionShorter, Indeterminate };

std::string to_string(Verdict v);

/// Outcome of comparing f(p, lambda) against 1 + lambda E[tau_d].
/// E[tau_A] < E[tau_d] exactly when f < 1 + lambda E[tau_d].
struct ComparisonVerdict {
  Verdict outcome = Verdict::Indeterminate;
  /// Truncation index of the last product bracket evaluated.
  int terms = 0;
  /// Certified bracket of f(p, lambda) at `terms`.
  CertifiedInterval product;
  /// Certified bracket of 1 + lambda E[tau_d].
  CertifiedInterval rhs;
};

inline constexpr int kDefaultMaxTerms = 4096;
inline constexpr int kInitialTerms = 8;

/// Certified brackets of 1 + lambda E[tau_d] for the three dispersion models.
CertifiedInterval comparison_rhs_tree2(const ModelParams& params);
CertifiedInterval comparison_rhs_tree3(const ModelParams& params);
CertifiedInterval comparison_rhs_free(const ModelParams& params);

/// Doubles M from 8 until the product bracket and the closed-form bracket
/// separate, or M reaches max_terms (Indeterminate). Throws OutOfRegime unless
/// p lies strictly below the survival threshold of the model.
ComparisonVerdict compare_tree2(const ModelParams& params, int max_terms = kDefaultMaxTerms);
ComparisonVerdict compare_tree3(const ModelParams& params, int max_terms = kDefaultMaxTerms);
/// Never DispersionShorter; a certified contradiction raises ImpossibleVerdict.
ComparisonVerdict compare_free(const ModelParams& params, int max_terms = kDefaultMaxTerms);
ComparisonVerdict compare(const ModelParams& params, const Topology& topo, int max_terms = kDefaultMaxTerms);

enum class Region {
  Gray,          ///< E[tau_A] < E[tau_d]
  Yellow,        ///< E[tau_A] > E[tau_d]
  White,         ///< dispersion survives with positive probability
  BoundaryBand,  ///< certified comparison undecided at max_terms
};

std::string to_string(Region r);

struct RegionPoint {
  double lambda = 0;
  double p = 0;
  Region region = Region::BoundaryBand;

  bool operator==(const RegionPoint&) const = default;
};

/// Evenly spaced points from lo to hi inclusive; a single step yields lo.
struct GridAxis {
  double lo = 0;
  double hi = 0;
  int steps = 1;

  double at(int i) const;
};

Region classify_region(const ModelParams& params, const Topology& topo, int max_terms = kDefaultMaxTerms);

/// Row-major over lambda, then p. Grid points are evaluated in parallel;
/// the output is identical to scan_region_serial.
std::vector<RegionPoint> scan_region(const GridAxis& lambda_axis, const GridAxis& p_axis, const Topology& topo,
                                     int max_terms = kDefaultMaxTerms);
std::vector<RegionPoint> scan_region_serial(const GridAxis& lambda_axis, const GridAxis& p_axis,
                                            const Topology& topo, int max_terms = kDefaultMaxTerms);

/// A p at which the comparison changes sign, located to within tol.
struct Crossing {
  double p = 0;
  double bracket_lo = 0;
  double bracket_hi = 0;
  Verdict below = Verdict::Indeterminate;  ///< verdict just left of the crossing
};

/// Step of the sign scan that seeds the bisection.
inline constexpr double kCrossingScanStep = 1e-3;

/// Every sign change of the comparison along p in (0, threshold) at fixed lambda.
/// Empty when the scan finds none. Throws IndeterminateBand when the bisection
/// cannot reach tol because verdicts stay undecided around the root.
std::vector<Crossing> trace_crossings(double lambda, const Topology& topo, double tol,
                                      int max_terms = kDefaultMaxTerms);

struct CrossingPair {
  double p_l = 0;
  double p_u = 0;
  double lambda = 0;
  int d = 0;
  double tolerance = 0;
};

/// First two crossings for tree dispersion; throws NoCrossing when fewer exist.
CrossingPair trace_crossing_pair(double lambda, int d, double tol, int max_terms = kDefaultMaxTerms);

}  // namespace bincat
