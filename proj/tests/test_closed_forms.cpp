#include "doctest.h"

#include <cmath>
#include <random>

#include "bincat/closed_forms.hpp"
#include "bincat/errors.hpp"
#include "oracle.hpp"

using namespace bincat;
using Kind = MeanExtinction::Kind;

namespace {
ModelParams q(const char* lambda, const char* p) { return ModelParams(parse_rational(lambda), parse_rational(p)); }

long double rel(long double a, long double b) { return std::fabs(a - b) / std::fabs(b); }

// Frozen 40+ digit values (mpmath) for the examples.
constexpr long double kMeanA_1_half = 3.76846205806274344829979857735679448L;
constexpr long double kMeanA_half_06 = 3.97675595877729596961896547552263962L;
constexpr long double kMeanStar_1_quarter = 1.81093021621632876395602623092869827L;
constexpr long double kMean2_half_half = 2.73482335190931939317577037731771950L;
constexpr long double kMeanA_half_half = 2.76846205806274344829979857735679448L;
constexpr long double kMean3_fifth_07 = 4.36298390742974588192055955779469337L;
constexpr long double kMeanA_fifth_07 = 4.39791546118077588731131638573540328L;
constexpr long double kG_1_half = 0.487950036474266589677192318120050095L;  // sqrt(5/21)
}  // namespace

TEST_CASE("survivor law examples and total mass") {
  const SurvivorLaw a = survivor_law(q("1", "1/2"));
  CHECK(a.beta == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(a.alpha == doctest::Approx(4.0 / 3).epsilon(1e-15));
  CHECK(a.c == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(std::fabs(a.total_mass() - 1) < 1e-15L);

  const SurvivorLaw b = survivor_law(q("1/2", "0.5"));
  CHECK(b.beta == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(b.alpha == doctest::Approx(2.4).epsilon(1e-15));
  CHECK(b.c == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(std::fabs(b.total_mass() - 1) < 1e-15L);

  const SurvivorLaw tiny = survivor_law(ModelParams::from_float(1, 1e-12L));
  CHECK(tiny.beta == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(tiny.c < 1e-11L);
}

TEST_CASE("offspring_pmf examples") {
  const auto pmf = offspring_pmf(q("1", "1/2"), 2);
  REQUIRE(pmf.probs.size() == 3);
  CHECK(pmf.probs[0] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(pmf.probs[1] == doctest::Approx(8.0 / 15).epsilon(1e-15));
  CHECK(pmf.probs[2] == doctest::Approx(2.0 / 15).epsilon(1e-15));

  const auto dead = offspring_pmf(ModelParams::from_float(1, 1e-15L), 2);
  CHECK(dead.probs[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dead.probs[1] < 1e-14L);
  CHECK(dead.probs[2] < 1e-28L);

  const auto three = offspring_pmf(q("1", "0.3"), 3);
  CHECK(three.mean() < 1);
  CHECK_THROWS_AS(offspring_pmf(q("1", "0.3"), 1), InvalidParams);
}

TEST_CASE("offspring laws are normalized and the series matches the closed forms") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ul(0.01, 10);
  std::uniform_real_distribution<double> up(0.001, 0.999);
  for (int i = 0; i < 100; ++i) {
    const auto m = ModelParams::from_float(ul(rng), up(rng));
    for (int d : {2, 3}) {
      const auto closed = offspring_pmf(m, d);
      const auto series = offspring_pmf_series(m, d);
      CHECK(std::fabs(closed.total() - 1) < 1e-12L);
      for (int k = 0; k <= d; ++k) CHECK(std::fabs(closed.probs[k] - series.probs[k]) < 1e-14L);
    }
    for (int d : {4, 6, 9}) CHECK(std::fabs(offspring_pmf(m, d).total() - 1) < 1e-12L);
    CHECK(std::fabs(offspring_pmf_free(m).total() - 1) < 1e-12L);
  }
}

TEST_CASE("offspring mean crosses one exactly at the survival threshold") {
  for (double lambda : {0.1, 0.2, 0.5, 1.0, 3.0, 9.0}) {
    for (int d : {2, 3, 4, 7}) {
      const double thr = d / (d + (d - 1) * lambda);
      CHECK(offspring_pmf(ModelParams::from_float(lambda, thr - 1e-6), d).mean() < 1);
      CHECK(offspring_pmf(ModelParams::from_float(lambda, thr + 1e-6), d).mean() > 1);
    }
    const double thr = 1 / (lambda + 1);
    CHECK(offspring_pmf_free(ModelParams::from_float(lambda, thr - 1e-6)).mean() < 1);
    CHECK(offspring_pmf_free(ModelParams::from_float(lambda, thr + 1e-6)).mean() > 1);
  }
}

TEST_CASE("label distribution examples") {
  CHECK(label_distribution_exact(1, 5)[1] == Rational(1));
  const auto two = label_distribution_exact(2, 2);
  CHECK(two[1] == Rational(1, 2));
  CHECK(two[2] == Rational(1, 2));
  const auto three = label_distribution_exact(3, 2);
  CHECK(three[1] == Rational(1, 4));
  CHECK(three[2] == Rational(3, 4));
  CHECK(surjection_count(3, 2) == 6);
  CHECK(surjection_count(5, 3) == 150);
  CHECK(surjection_count(2, 3) == 0);

  const auto big = label_distribution(50, 3);
  CHECK(big[3] > 1 - 1e-7L);
  for (unsigned n : {1u, 7u, 30u, 64u}) {
    for (unsigned d : {2u, 5u, 64u}) {
      long double total = 0;
      for (auto v : label_distribution(n, d)) total += v;
      CHECK(std::fabs(total - 1) < 1e-15L);
    }
  }
  CHECK_THROWS_AS(label_distribution_exact(0, 3), InvalidParams);
}

TEST_CASE("aux_g examples") {
  CHECK(std::fabs(aux_g(q("1", "1/2")).value - kG_1_half) < 1e-18L);
  CHECK(aux_g(ModelParams::from_float(3, 1e-9L)).value < 1e-12L);
  const auto m = q("1/5", "0.7");
  const long double g = aux_g(m).value;
  CHECK(g > 0);
  CHECK(g < 3 - 3 * m.p() - m.lambda() * m.p());
}

TEST_CASE("mean_time_no_dispersion examples") {
  const auto a = mean_time_no_dispersion(q("1", "1/2"));
  CHECK(a.contains(kMeanA_1_half));
  CHECK(a.width() < 1e-16L);
  const auto b = mean_time_no_dispersion(q("1/2", "0.6"));
  CHECK(b.lo <= kMeanA_half_06 * (1 + 1e-18L));
  CHECK(b.hi >= kMeanA_half_06 * (1 - 1e-18L));
  const auto fixed = mean_time_no_dispersion(q("1", "1/2"), {.terms = 64});
  CHECK(fixed.contains(kMeanA_1_half));
  const auto small = mean_time_no_dispersion(ModelParams::from_float(2.5, 1e-12L));
  CHECK(small.lo == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("mean_time_tree2 examples") {
  CHECK(mean_time_tree2(q("1/2", "4/5")).kind() == Kind::Infinite);
  CHECK(mean_time_tree2(q("1/2", "0.9")).kind() == Kind::UndefinedInfinite);
  const auto e2 = mean_time_tree2(q("1/2", "0.5"));
  CHECK(rel(e2.value(), kMean2_half_half) < 1e-17L);
  CHECK(e2.value() < kMeanA_half_half);
  const auto pmf = offspring_pmf(q("1", "0.1"), 2);
  const auto route = ctbp_mean_binary(pmf.probs[0], pmf.probs[1], pmf.probs[2]);
  CHECK(rel(mean_time_tree2(q("1", "0.1")).value(), route.value()) < 1e-10L);
}

TEST_CASE("mean_time_tree3 examples") {
  CHECK(mean_time_tree3(q("1/5", "15/17")).kind() == Kind::Infinite);
  CHECK(mean_time_tree3(q("1/5", "0.9")).kind() == Kind::UndefinedInfinite);
  const auto e3 = mean_time_tree3(q("1/5", "0.7"));
  CHECK(rel(e3.value(), kMean3_fifth_07) < 1e-17L);
  CHECK(e3.value() < kMeanA_fifth_07);
  const auto pmf = offspring_pmf(q("1", "0.2"), 3);
  const auto route = ctbp_mean_ternary(pmf.probs[0], pmf.probs[1], pmf.probs[2], pmf.probs[3]);
  CHECK(rel(mean_time_tree3(q("1", "0.2")).value(), route.value()) < 1e-10L);
}

TEST_CASE("mean_time_free examples") {
  CHECK(mean_time_free(q("1", "1/2")).kind() == Kind::Infinite);
  CHECK(mean_time_free(q("1", "0.6")).kind() == Kind::UndefinedInfinite);
  const auto star = mean_time_free(q("1", "1/4"));
  CHECK(rel(star.value(), kMeanStar_1_quarter) < 1e-17L);
  CHECK(rel(star.value(), 1 + 2 * std::log(1.5L)) < 1e-17L);
  const auto m = q("2", "0.1");
  CHECK(rel(mean_time_free(m).value(), ctbp_mean_geometric(survivor_law(m)).value()) < 1e-10L);
}

TEST_CASE("points inside the 1e-12 boundary band report Infinite") {
  const double thr = 2.0 / 2.5;
  CHECK(mean_time_tree2(ModelParams::from_float(0.5, thr * (1 - 1e-14))).kind() == Kind::Infinite);
  CHECK(mean_time_tree2(ModelParams::from_float(0.5, thr * (1 - 1e-9))).kind() == Kind::Finite);
  CHECK(mean_time_dispersion(q("1", "1/2"), Topology::free()).kind() == Kind::Infinite);
  CHECK_THROWS_AS(mean_time_dispersion(q("1", "0.1"), Topology::tree(4)), InvalidParams);
}

TEST_CASE("closed forms agree with the branching-process formulas on 200 random points") {
  std::mt19937_64 rng(200);
  std::uniform_real_distribution<double> ul(0.01, 10);
  std::uniform_real_distribution<double> uu(0.001, 0.999);
  for (int i = 0; i < 200; ++i) {
    const double lambda = ul(rng);
    const double s = uu(rng);
    {
      const auto m = ModelParams::from_float(lambda, s * 2 / (lambda + 2));
      const auto pmf = offspring_pmf(m, 2);
      CHECK(rel(mean_time_tree2(m).value(), ctbp_mean_binary(pmf.probs[0], pmf.probs[1], pmf.probs[2]).value()) <
            1e-10L);
    }
    {
      const auto m = ModelParams::from_float(lambda, s * 3 / (2 * lambda + 3));
      const auto pmf = offspring_pmf(m, 3);
      CHECK(rel(mean_time_tree3(m).value(),
                ctbp_mean_ternary(pmf.probs[0], pmf.probs[1], pmf.probs[2], pmf.probs[3]).value()) < 1e-10L);
    }
    {
      const auto m = ModelParams::from_float(lambda, s / (lambda + 1));
      CHECK(rel(mean_time_free(m).value(), ctbp_mean_geometric(survivor_law(m)).value()) < 1e-10L);
    }
  }
}

TEST_CASE("closed forms match the 50-digit oracle") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ul(0.01, 10);
  std::uniform_real_distribution<double> uu(0.001, 0.99);
  for (int i = 0; i < 100; ++i) {
    const double l = ul(rng);
    const double s = uu(rng);
    const double p2 = s * 2 / (l + 2);
    const double p3 = s * 3 / (2 * l + 3);
    const double pf = s / (l + 1);
    CHECK(rel(mean_time_tree2(ModelParams::from_float(l, p2)).value(),
              oracle::mean_tree2(l, p2).convert_to<long double>()) < 1e-14L);
    CHECK(rel(mean_time_tree3(ModelParams::from_float(l, p3)).value(),
              oracle::mean_tree3(l, p3).convert_to<long double>()) < 1e-14L);
    CHECK(rel(mean_time_free(ModelParams::from_float(l, pf)).value(),
              oracle::mean_free(l, pf).convert_to<long double>()) < 1e-14L);
  }
}

TEST_CASE("every mean extinction time tends to one as p -> 0") {
  for (double lambda : {0.1, 1.0, 5.0}) {
    const auto m = ModelParams::from_float(lambda, 1e-8);
    CHECK(std::fabs(mean_time_no_dispersion(m).midpoint() - 1) < 1e-6L);
    CHECK(std::fabs(mean_time_tree2(m).value() - 1) < 1e-6L);
    CHECK(std::fabs(mean_time_tree3(m).value() - 1) < 1e-6L);
    CHECK(std::fabs(mean_time_free(m).value() - 1) < 1e-6L);
  }
}

TEST_CASE("smoke: mean extinction times increase with p") {
  for (double lambda : {0.2, 1.0, 4.0}) {
    long double last2 = 0, last3 = 0, lastf = 0, lastA = 0;
    for (int i = 1; i < 50; ++i) {
      const double s = i / 50.0;
      const long double e2 = mean_time_tree2(ModelParams::from_float(lambda, s * 2 / (lambda + 2))).value();
      const long double e3 = mean_time_tree3(ModelParams::from_float(lambda, s * 3 / (2 * lambda + 3))).value();
      const long double ef = mean_time_free(ModelParams::from_float(lambda, s / (lambda + 1))).value();
      const long double ea = mean_time_no_dispersion(ModelParams::from_float(lambda, s)).midpoint();
      CHECK(e2 > last2);
      CHECK(e3 > last3);
      CHECK(ef > lastf);
      CHECK(ea > lastA);
      last2 = e2, last3 = e3, lastf = ef, lastA = ea;
    }
  }
}

TEST_CASE("no-dispersion mean stays below the free-dispersion mean") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> ul(0.01, 10);
  std::uniform_real_distribution<double> uu(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double l = ul(rng);
    const double p = std::max(1e-6, uu(rng)) / (l + 1);
    const auto m = ModelParams::from_float(l, p);
    if (classify(m, Topology::free()) != Regime::SubcriticalFiniteMean) continue;
    const auto star = mean_time_free(m);
    if (!star.is_finite()) continue;
    CHECK(mean_time_no_dispersion(m).hi < star.value());
  }
}

TEST_CASE("ctbp_mean examples") {
  CHECK(ctbp_mean_binary(0.5L, 0, 0.5L).kind() == Kind::Infinite);
  CHECK(rel(ctbp_mean_binary(0.6L, 0.2L, 0.2L).value(), 5 * std::log(1.5L)) < 1e-17L);
  CHECK(ctbp_mean_ternary(2.0L / 3, 0, 0, 1.0L / 3).kind() == Kind::Infinite);
  CHECK(rel(ctbp_mean_ternary(0.75L, 0, 0, 0.25L).value(), 2.01900702055979118663690268949L) < 1e-17L);
  const SurvivorLaw law{0.9L, 0.1L * 0.95L / 0.05L, 0.05L};
  CHECK(rel(ctbp_mean_geometric(law).value(), 1.11431682767989722391637595486L) < 1e-16L);
  CHECK(ctbp_mean_geometric(survivor_law(q("3", "1/4"))).kind() == Kind::Infinite);

  const auto pmf = offspring_pmf(q("1", "1/2"), 2);
  CHECK(rel(ctbp_mean_binary(pmf.probs[0], pmf.probs[1], pmf.probs[2]).value(),
            mean_time_tree2(q("1", "1/2")).value()) < 1e-10L);
}

TEST_CASE("ctbp_mean rejects supercritical and malformed laws") {
  CHECK_THROWS_AS(ctbp_mean_binary(0.2L, 0.2L, 0.6L), MeanAboveOne);
  CHECK_THROWS_AS(ctbp_mean_binary(0.5L, 0.5L, 0), PreconditionViolated);
  CHECK_THROWS_AS(ctbp_mean_binary(0.5L, 0.2L, 0.2L), PreconditionViolated);
  CHECK_THROWS_AS(ctbp_mean_ternary(0.1L, 0.1L, 0.1L, 0.7L), MeanAboveOne);
  CHECK_THROWS_AS(ctbp_mean_geometric(survivor_law(q("1", "0.8"))), MeanAboveOne);
  CHECK_THROWS_AS(ctbp_mean_geometric(SurvivorLaw{0.5L, 1, 0.5L}), PreconditionViolated);
}

TEST_CASE("ctbp_mean formulas agree with a particle-count Monte Carlo") {
  SUBCASE("binary (0.6, 0.2, 0.2)") {
    const auto mc = oracle::branching_extinction(oracle::finite_law({0.6, 0.2, 0.2}), 200000, 1);
    CHECK(std::fabs(mc.mean - 5 * std::log(1.5)) < 3 * mc.std_error);
  }
  SUBCASE("ternary (3/4, 0, 0, 1/4)") {
    const auto mc = oracle::branching_extinction(oracle::finite_law({0.75, 0, 0, 0.25}), 200000, 2);
    const double expected = static_cast<double>(ctbp_mean_ternary(0.75L, 0, 0, 0.25L).value());
    CHECK(std::fabs(mc.mean - expected) < 3 * mc.std_error);
  }
  SUBCASE("geometric beta = 0.9, c = 0.05") {
    const auto draw = [](std::mt19937_64& rng) -> long {
      if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.9) return 0;
      // P(n | n >= 1) = (1 - c) c^{n-1}
      return 1 + std::geometric_distribution<long>(0.95)(rng);
    };
    const auto mc = oracle::branching_extinction(draw, 200000, 3);
    const double expected = static_cast<double>(ctbp_mean_geometric({0.9L, 1.9L, 0.05L}).value());
    CHECK(std::fabs(mc.mean - expected) < 3 * mc.std_error);
  }
  SUBCASE("free dispersion at lambda = 1, p = 1/4") {
    const auto law = survivor_law(q("1", "1/4"));
    const double beta = static_cast<double>(law.beta);
    const double c = static_cast<double>(law.c);
    const auto draw = [beta, c](std::mt19937_64& rng) -> long {
      if (std::uniform_real_distribution<double>(0, 1)(rng) < beta) return 0;
      return 1 + std::geometric_distribution<long>(1 - c)(rng);
    };
    const auto mc = oracle::branching_extinction(draw, 200000, 4);
    CHECK(std::fabs(mc.mean - 1.8109302162163288) < 3 * mc.std_error);
  }
}
