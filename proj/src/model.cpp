#include "bincat/model.hpp"

#include <stdexcept>

#include "bincat/errors.hpp"

namespace bincat {

ModelParams::ModelParams(Rational lambda, Rational p)
    : lambda_exact_(std::move(lambda)), p_exact_(std::move(p)) {
  if (lambda_exact_ <= 0) throw InvalidParams("lambda must be positive, got " + to_string(lambda_exact_));
  if (p_exact_ <= 0 || p_exact_ >= 1) throw InvalidParams("p must lie in (0, 1), got " + to_string(p_exact_));
  lambda_ = to_long_double(lambda_exact_);
  p_ = to_long_double(p_exact_);
  lambda_enclosure_ = enclose(lambda_exact_);
  p_enclosure_ = enclose(p_exact_);
}

ModelParams ModelParams::from_float(long double lambda, long double p) {
  return ModelParams(exact_rational(lambda), exact_rational(p));
}

Topology Topology::tree(int d) {
  if (d < 2) throw InvalidParams("tree dispersion needs d >= 2, got " + std::to_string(d));
  return Topology(Kind::Tree, d);
}

std::string to_string(const Topology& topo) {
  switch (topo.kind()) {
    case Topology::Kind::NoDispersion: return "A";
    case Topology::Kind::Tree: return "d" + std::to_string(topo.d());
    case Topology::Kind::Free: return "star";
  }
  return "?";
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::SubcriticalFiniteMean: return "subcritical";
    case Regime::CriticalInfiniteMean: return "critical";
    case Regime::SupercriticalSurvival: return "supercritical";
  }
  return "?";
}

std::optional<Rational> survival_threshold(const Rational& lambda, const Topology& topo) {
  switch (topo.kind()) {
    case Topology::Kind::NoDispersion:
      return std::nullopt;
    case Topology::Kind::Tree: {
      const Rational d(topo.d());
      return Rational(d / (d + (d - 1) * lambda));
    }
    case Topology::Kind::Free:
      return Rational(1 / (lambda + 1));
  }
  return std::nullopt;
}

Regime classify(const ModelParams& params, const Topology& topo) {
  const auto threshold = survival_threshold(params.lambda_exact(), topo);
  if (!threshold) return Regime::SubcriticalFiniteMean;
  if (params.p_exact() < *threshold) return Regime::SubcriticalFiniteMean;
  if (params.p_exact() == *threshold) return Regime::CriticalInfiniteMean;
  return Regime::SupercriticalSurvival;
}

MeanExtinction MeanExtinction::finite(long double t) {
  if (!(t > 0)) throw std::invalid_argument("finite mean extinction time must be positive");
  return MeanExtinction(Kind::Finite, t);
}

long double MeanExtinction::value() const {
  if (kind_ != Kind::Finite) throw std::logic_error("mean extinction time is not finite");
  return value_;
}

}  // namespace bincat
