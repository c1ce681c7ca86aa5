#include "bincat/comparator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "bincat/errors.hpp"
#include "bincat/qproduct.hpp"

namespace bincat {
namespace {

using interval::add;
using interval::div;
using interval::mul;
using interval::neg;
using interval::sub;

CertifiedInterval pt(long double x) { return CertifiedInterval::point(x); }

void require_subcritical(const ModelParams& params, const Topology& topo) {
  if (classify(params, topo) != Regime::SubcriticalFiniteMean) {
    throw OutOfRegime("comparison needs p strictly below the " + to_string(topo) + " survival threshold");
  }
}

ComparisonVerdict decide(const ModelParams& params, TailBound tail, const CertifiedInterval& rhs, int max_terms) {
  ComparisonVerdict out;
  out.rhs = rhs;
  int M = std::min(kInitialTerms, std::max(max_terms, 0));
  for (;;) {
    out.terms = M;
    out.product = product_bounds(params, tail, M);
    if (out.product.strictly_below(rhs)) {
      out.outcome = Verdict::NoDispersionShorter;
      return out;
    }
    if (out.product.strictly_above(rhs)) {
      out.outcome = Verdict::DispersionShorter;
      return out;
    }
    if (M >= max_terms) break;
    M = std::min(2 * M, max_terms);
  }
  out.outcome = Verdict::Indeterminate;
  return out;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::NoDispersionShorter: return "no-dispersion-shorter";
    case Verdict::DispersionShorter: return "dispersion-shorter";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

std::string to_string(Region r) {
  switch (r) {
    case Region::Gray: return "gray";
    case Region::Yellow: return "yellow";
    case Region::White: return "white";
    case Region::BoundaryBand: return "boundary";
  }
  return "?";
}

CertifiedInterval comparison_rhs_tree2(const ModelParams& params) {
  const CertifiedInterval l = params.lambda_enclosure();
  const CertifiedInterval p = params.p_enclosure();
  const CertifiedInterval lp = mul(l, p);
  const CertifiedInterval num = mul(add(lp, pt(1)), add(lp, pt(2)));
  const CertifiedInterval den = mul(mul(p, p), add(l, pt(1)));
  const CertifiedInterval A = mul(sub(pt(1), p), add(lp, pt(2)));
  const CertifiedInterval B = mul(mul(l, mul(p, p)), add(l, pt(1)));
  const CertifiedInterval log_term = neg(interval::log1p(neg(div(B, A))));
  return add(pt(1), mul(div(num, den), log_term));
}

CertifiedInterval comparison_rhs_tree3(const ModelParams& params) {
  const CertifiedInterval l = params.lambda_enclosure();
  const CertifiedInterval p = params.p_enclosure();
  const CertifiedInterval lp = mul(l, p);
  const CertifiedInterval p3 = mul(p, mul(p, p));
  const CertifiedInterval radicand_num =
      mul(mul(mul(mul(l, l), p3), add(l, pt(1))), sub(add(pt(6), lp), mul(pt(3), p)));
  const CertifiedInterval radicand_den = mul(add(lp, pt(3)), add(lp, pt(1)));
  const CertifiedInterval g = interval::sqrt(div(radicand_num, radicand_den));
  const CertifiedInterval A = sub(sub(pt(3), mul(pt(3), p)), lp);
  const CertifiedInterval t = div(g, A);
  // atanh(t)/g = atanh(t)/(t A), with atanh(t)/t in [1, 1/(1 - t^2)].
  CertifiedInterval ratio;
  if (g.lo > 0) {
    ratio = div(interval::atanh(t), g);
  } else {
    const CertifiedInterval bound = div(pt(1), sub(pt(1), mul(t, t)));
    ratio = div(CertifiedInterval{1, bound.hi}, A);
  }
  const CertifiedInterval prefactor = mul(l, add(mul(pt(2), lp), pt(3)));
  return add(pt(1), mul(prefactor, ratio));
}

CertifiedInterval comparison_rhs_free(const ModelParams& params) {
  const CertifiedInterval l = params.lambda_enclosure();
  const CertifiedInterval p = params.p_enclosure();
  const CertifiedInterval x = div(mul(l, p), sub(pt(1), p));
  return mul(add(l, pt(1)), sub(pt(1), interval::log1p(neg(x))));
}

ComparisonVerdict compare_tree2(const ModelParams& params, int max_terms) {
  require_subcritical(params, Topology::tree(2));
  return decide(params, kTailTree2, comparison_rhs_tree2(params), max_terms);
}

ComparisonVerdict compare_tree3(const ModelParams& params, int max_terms) {
  require_subcritical(params, Topology::tree(3));
  return decide(params, kTailTree3, comparison_rhs_tree3(params), max_terms);
}

ComparisonVerdict compare_free(const ModelParams& params, int max_terms) {
  require_subcritical(params, Topology::free());
  ComparisonVerdict out = decide(params, kTailFree, comparison_rhs_free(params), max_terms);
  if (out.outcome == Verdict::DispersionShorter) {
    throw ImpossibleVerdict("certified E[tau_A] > E[tau_*] at lambda=" + to_string(params.lambda_exact()) +
                           ", p=" + to_string(params.p_exact()));
  }
  return out;
}

ComparisonVerdict compare(const ModelParams& params, const Topology& topo, int max_terms) {
  switch (topo.kind()) {
    case Topology::Kind::Tree:
      if (topo.d() == 2) return compare_tree2(params, max_terms);
      if (topo.d() == 3) return compare_tree3(params, max_terms);
      throw InvalidParams("certified comparison only for d = 2, 3");
    case Topology::Kind::Free:
      return compare_free(params, max_terms);
    case Topology::Kind::NoDispersion:
      break;
  }
  throw InvalidParams("compare needs a dispersion topology");
}

double GridAxis::at(int i) const {
  if (steps <= 1) return lo;
  if (i == steps - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

Region classify_region(const ModelParams& params, const Topology& topo, int max_terms) {
  switch (classify(params, topo)) {
    case Regime::SupercriticalSurvival: return Region::White;
    // E[tau_d] is infinite while E[tau_A] is finite.
    case Regime::CriticalInfiniteMean: return Region::Gray;
    case Regime::SubcriticalFiniteMean: break;
  }
  switch (compare(params, topo, max_terms).outcome) {
    case Verdict::NoDispersionShorter: return Region::Gray;
    case Verdict::DispersionShorter: return Region::Yellow;
    case Verdict::Indeterminate: break;
  }
  return Region::BoundaryBand;
}

namespace {

void validate_scan(const GridAxis& lambda_axis, const GridAxis& p_axis, const Topology& topo) {
  if (lambda_axis.steps < 1 || p_axis.steps < 1) throw InvalidParams("grid needs at least one step per axis");
  if (topo.kind() == Topology::Kind::NoDispersion) throw InvalidParams("scan needs a dispersion topology");
  if (topo.kind() == Topology::Kind::Tree && topo.d() != 2 && topo.d() != 3) {
    throw InvalidParams("scan supports d = 2, 3 and free dispersion");
  }
  const auto check = [](const GridAxis& axis, double min_excl, double max_excl, const char* name) {
    for (const double v : {axis.at(0), axis.at(axis.steps - 1)}) {
      if (!(v > min_excl && v < max_excl)) throw InvalidParams(std::string(name) + " grid leaves the valid range");
    }
  };
  check(lambda_axis, 0.0, HUGE_VAL, "lambda");
  check(p_axis, 0.0, 1.0, "p");
}

RegionPoint scan_point(const GridAxis& lambda_axis, const GridAxis& p_axis, const Topology& topo, int max_terms,
                       long index) {
  const int i = static_cast<int>(index / p_axis.steps);
  const int j = static_cast<int>(index % p_axis.steps);
  RegionPoint point{lambda_axis.at(i), p_axis.at(j), Region::BoundaryBand};
  point.region = classify_region(ModelParams::from_float(point.lambda, point.p), topo, max_terms);
  return point;
}

}  // namespace

std::vector<RegionPoint> scan_region_serial(const GridAxis& lambda_axis, const GridAxis& p_axis,
                                            const Topology& topo, int max_terms) {
  validate_scan(lambda_axis, p_axis, topo);
  const long total = static_cast<long>(lambda_axis.steps) * p_axis.steps;
  std::vector<RegionPoint> out(total);
  for (long k = 0; k < total; ++k) out[k] = scan_point(lambda_axis, p_axis, topo, max_terms, k);
  return out;
}

std::vector<RegionPoint> scan_region(const GridAxis& lambda_axis, const GridAxis& p_axis, const Topology& topo,
                                     int max_terms) {
  validate_scan(lambda_axis, p_axis, topo);
  const long total = static_cast<long>(lambda_axis.steps) * p_axis.steps;
  std::vector<RegionPoint> out(total);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 64)
  for (long k = 0; k < total; ++k) {
    try {
      out[k] = scan_point(lambda_axis, p_axis, topo, max_terms, k);
    } catch (...) {
#pragma omp critical(bincat_scan_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {

// +1: E[tau_A] < E[tau_d], -1: the reverse, 0: undecided.
int verdict_sign(double lambda, double p, const Topology& topo, int max_terms) {
  switch (compare(ModelParams::from_float(lambda, p), topo, max_terms).outcome) {
    case Verdict::NoDispersionShorter: return 1;
    case Verdict::DispersionShorter: return -1;
    case Verdict::Indeterminate: return 0;
  }
  return 0;
}

Crossing bisect(double lambda, const Topology& topo, double tol, int max_terms, double a, int sign_a, double b) {
  while (b - a > 2 * tol) {
    const double mid = a + (b - a) / 2;
    if (mid <= a || mid >= b) break;
    const int s = verdict_sign(lambda, mid, topo, max_terms);
    if (s == sign_a) {
      a = mid;
    } else if (s == -sign_a) {
      b = mid;
    } else {
      // Undecided at mid: the root sits in a band around it. Probe its edges.
      const double h = tol / 2;
      const double left = std::max(a, mid - h);
      const double right = std::min(b, mid + h);
      const int sl = left == a ? sign_a : verdict_sign(lambda, left, topo, max_terms);
      const int sr = right == b ? -sign_a : verdict_sign(lambda, right, topo, max_terms);
      if (sl == sign_a && sr == -sign_a) {
        a = left;
        b = right;
        break;
      }
      throw IndeterminateBand("comparison undecided around p=" + std::to_string(mid), mid, right - left);
    }
  }
  Crossing c;
  c.p = a + (b - a) / 2;
  c.bracket_lo = a;
  c.bracket_hi = b;
  c.below = sign_a > 0 ? Verdict::NoDispersionShorter : Verdict::DispersionShorter;
  return c;
}

}  // namespace

std::vector<Crossing> trace_crossings(double lambda, const Topology& topo, double tol, int max_terms) {
  if (!(tol > 0)) throw InvalidParams("tolerance must be positive");
  if (!(lambda > 0)) throw InvalidParams("lambda must be positive");
  const auto threshold = survival_threshold(exact_rational(lambda), topo);
  if (!threshold) throw InvalidParams("crossings need a dispersion topology");
  const double limit = to_long_double(*threshold);

  std::vector<Crossing> found;
  double last_p = 0;
  int last_sign = 0;
  for (long i = 1;; ++i) {
    const double p = static_cast<double>(i) * kCrossingScanStep;
    if (!(p < limit) || classify(ModelParams::from_float(lambda, p), topo) != Regime::SubcriticalFiniteMean) break;
    const int s = verdict_sign(lambda, p, topo, max_terms);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) found.push_back(bisect(lambda, topo, tol, max_terms, last_p, last_sign, p));
    last_p = p;
    last_sign = s;
  }
  return found;
}

CrossingPair trace_crossing_pair(double lambda, int d, double tol, int max_terms) {
  const auto crossings = trace_crossings(lambda, Topology::tree(d), tol, max_terms);
  if (crossings.size() < 2) {
    throw NoCrossing("found " + std::to_string(crossings.size()) + " crossing(s) at lambda=" + std::to_string(lambda));
  }
  return {crossings[0].p, crossings[1].p, lambda, d, tol};
}

}  // namespace bincat
