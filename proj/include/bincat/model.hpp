#pragma once

#include <optional>
#include <string>

#include "bincat/interval.hpp"
#include "bincat/rational.hpp"

namespace bincat {

/// Growth rate lambda > 0 and per-individual survival probability p in (0, 1).
/// The catastrophe rate is 1 and every process starts from one colony holding
/// one individual.
///
/// The exact rational value is kept next to the floating point view so that
/// critical boundaries such as p = 15/17 are classified without rounding.
class ModelParams {
 public:
  /// Throws InvalidParams unless lambda > 0 and 0 < p < 1.
  ModelParams(Rational lambda, Rational p);

  /// Uses the exact binary value of the arguments.
  static ModelParams from_float(long double lambda, long double p);

  const Rational& lambda_exact() const { return lambda_exact_; }
  const Rational& p_exact() const { return p_exact_; }

  long double lambda() const { return lambda_; }
  long double p() const { return p_; }

  const CertifiedInterval& lambda_enclosure() const { return lambda_enclosure_; }
  const CertifiedInterval& p_enclosure() const { return p_enclosure_; }

 private:
  Rational lambda_exact_;
  Rational p_exact_;
  long double lambda_;
  long double p_;
  CertifiedInterval lambda_enclosure_;
  CertifiedInterval p_enclosure_;
};

/// How catastrophe survivors found new colonies.
class Topology {
 public:
  enum class Kind { NoDispersion, Tree, Free };

  static Topology no_dispersion() { return Topology(Kind::NoDispersion, 0); }
  /// Survivors pick one of d child vertices; collisions die. Requires d >= 2.
  static Topology tree(int d);
  static Topology free() { return Topology(Kind::Free, 0); }

  Kind kind() const { return kind_; }
  /// Number of child vertices; meaningful for Kind::Tree only.
  int d() const { return d_; }

  bool operator==(const Topology&) const = default;

 private:
  Topology(Kind kind, int d) : kind_(kind), d_(d) {}
  Kind kind_;
  int d_;
};

std::string to_string(const Topology& topo);

enum class Regime { SubcriticalFiniteMean, CriticalInfiniteMean, SupercriticalSurvival };

std::string to_string(Regime r);

/// p-threshold above which the process survives with positive probability:
/// d/(d + (d-1) lambda) on the d-ary tree, 1/(lambda + 1) for free dispersion.
/// Empty for the no-dispersion model, which always dies out.
std::optional<Rational> survival_threshold(const Rational& lambda, const Topology& topo);

/// Exact comparison of p against the topology threshold.
Regime classify(const ModelParams& params, const Topology& topo);

/// Mean extinction time: finite, infinite with certain extinction (critical),
/// or infinite because the process survives with positive probability.
class MeanExtinction {
 public:
  enum class Kind { Finite, Infinite, UndefinedInfinite };

  /// Requires t > 0.
  static MeanExtinction finite(long double t);
  static MeanExtinction infinite() { return MeanExtinction(Kind::Infinite, 0); }
  static MeanExtinction undefined_infinite() { return MeanExtinction(Kind::UndefinedInfinite, 0); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  /// Throws std::logic_error when not finite.
  long double value() const;

 private:
  MeanExtinction(Kind kind, long double t) : kind_(kind), value_(t) {}
  Kind kind_;
  long double value_;
};

}  // namespace bincat
