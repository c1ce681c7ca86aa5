#include "bincat/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "bincat/errors.hpp"

namespace bincat {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void validate(const SimConfig& config) {
  if (config.replicates < 1) throw InvalidParams("replicates must be >= 1");
  if (!(config.time_cap > 0)) throw InvalidParams("time cap must be positive");
  if (config.colony_cap && *config.colony_cap < 1) throw InvalidParams("colony cap must be positive");
}

std::int64_t binomial(Rng& rng, std::int64_t n, double p) {
  if (n <= 0) return 0;
  return std::binomial_distribution<std::int64_t>(n, p)(rng);
}

ReplicateOutcome run_no_dispersion(const SimConfig& config, Rng& rng) {
  const double lambda = static_cast<double>(config.params.lambda());
  const double p = static_cast<double>(config.params.p());
  std::exponential_distribution<double> clock(lambda + 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double birth_share = lambda / (lambda + 1);
  std::int64_t size = 1;
  double t = 0;
  for (;;) {
    t += clock(rng);
    if (t > config.time_cap) return {ReplicateOutcome::Status::TimeCapped, config.time_cap, 1};
    if (unit(rng) < birth_share) {
      ++size;
    } else {
      size = binomial(rng, size, p);
      if (size == 0) return {ReplicateOutcome::Status::Extinct, t, 1};
    }
  }
}

struct Colony {
  double death;
  double lifetime;
  bool operator>(const Colony& o) const { return death > o.death; }
};

ReplicateOutcome run_dispersal(const SimConfig& config, std::int64_t colony_cap, Rng& rng) {
  std::exponential_distribution<double> lifetime(1.0);
  std::priority_queue<Colony, std::vector<Colony>, std::greater<>> queue;
  const double j0 = lifetime(rng);
  queue.push({j0, j0});
  std::int64_t max_colonies = 1;
  const double lambda = static_cast<double>(config.params.lambda());
  const double p = static_cast<double>(config.params.p());
  const bool tree = config.topology.kind() == Topology::Kind::Tree;
  const int d = config.topology.d();
  const bool coupled = config.clock == ColonyClock::Coupled;
  std::vector<char> used(tree ? d : 0);
  std::uniform_int_distribution<int> label(0, std::max(d - 1, 0));
  for (;;) {
    const Colony colony = queue.top();
    queue.pop();
    if (colony.death > config.time_cap) {
      return {ReplicateOutcome::Status::TimeCapped, config.time_cap, max_colonies};
    }
    const double window = coupled ? colony.lifetime : lifetime(rng);
    const std::int64_t size = 1 + std::poisson_distribution<std::int64_t>(lambda * window)(rng);
    const std::int64_t survivors = binomial(rng, size, p);
    std::int64_t founded = survivors;
    if (tree && survivors > 0) {
      std::fill(used.begin(), used.end(), 0);
      founded = 0;
      for (std::int64_t s = 0; s < survivors && founded < d; ++s) {
        const int l = label(rng);
        if (!used[l]) {
          used[l] = 1;
          ++founded;
        }
      }
    }
    for (std::int64_t k = 0; k < founded; ++k) {
      const double j = lifetime(rng);
      queue.push({colony.death + j, j});
    }
    if (queue.empty()) return {ReplicateOutcome::Status::Extinct, colony.death, max_colonies};
    max_colonies = std::max<std::int64_t>(max_colonies, static_cast<std::int64_t>(queue.size()));
    if (max_colonies > colony_cap) {
      return {ReplicateOutcome::Status::ColonyCapped, colony.death, max_colonies};
    }
  }
}

}  // namespace

// seed ^ index alone maps every seed below the replicate count onto the same
// set of streams, so the seed is mixed first
std::string to_string(ColonyClock c) { return c == ColonyClock::Coupled ? "coupled" : "branching"; }

Rng replicate_rng(std::uint64_t seed, std::uint64_t index) { return Rng(splitmix64(splitmix64(seed) ^ index)); }

std::int64_t sample_survivors(Rng& rng, const ModelParams& params) {
  const double j = std::exponential_distribution<double>(1.0)(rng);
  const std::int64_t size =
      1 + std::poisson_distribution<std::int64_t>(static_cast<double>(params.lambda()) * j)(rng);
  return binomial(rng, size, static_cast<double>(params.p()));
}

std::int64_t sample_survivors_jump_chain(Rng& rng, const ModelParams& params) {
  const double lambda = static_cast<double>(params.lambda());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double birth_share = lambda / (lambda + 1);
  std::int64_t size = 1;
  while (unit(rng) < birth_share) ++size;
  return binomial(rng, size, static_cast<double>(params.p()));
}

std::int64_t sample_offspring(Rng& rng, const ModelParams& params, const Topology& topo) {
  const std::int64_t survivors = sample_survivors(rng, params);
  switch (topo.kind()) {
    case Topology::Kind::Free:
      return survivors;
    case Topology::Kind::Tree: {
      std::vector<char> used(topo.d(), 0);
      std::uniform_int_distribution<int> label(0, topo.d() - 1);
      std::int64_t distinct = 0;
      for (std::int64_t s = 0; s < survivors && distinct < topo.d(); ++s) {
        const int l = label(rng);
        if (!used[l]) {
          used[l] = 1;
          ++distinct;
        }
      }
      return distinct;
    }
    case Topology::Kind::NoDispersion:
      break;
  }
  throw InvalidParams("offspring colonies need a dispersion topology");
}

ReplicateOutcome simulate_replicate(const SimConfig& config, std::uint64_t index) {
  Rng rng = replicate_rng(config.seed, index);
  if (config.topology.kind() == Topology::Kind::NoDispersion) return run_no_dispersion(config, rng);
  return run_dispersal(config, effective_colony_cap(config), rng);
}

std::int64_t default_colony_cap(const ModelParams& params, const Topology& topo) {
  if (topo.kind() != Topology::Kind::NoDispersion && classify(params, topo) == Regime::SupercriticalSurvival) {
    return kColonyCapSupercritical;
  }
  return kColonyCapSubcritical;
}

std::int64_t effective_colony_cap(const SimConfig& config) {
  return config.colony_cap.value_or(default_colony_cap(config.params, config.topology));
}

std::vector<ReplicateOutcome> run_replicates_serial(const SimConfig& config) {
  validate(config);
  std::vector<ReplicateOutcome> out(static_cast<std::size_t>(config.replicates));
  for (std::int64_t i = 0; i < config.replicates; ++i) out[i] = simulate_replicate(config, i);
  return out;
}

std::vector<ReplicateOutcome> run_replicates(const SimConfig& config) {
  validate(config);
  std::vector<ReplicateOutcome> out(static_cast<std::size_t>(config.replicates));
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < config.replicates; ++i) out[i] = simulate_replicate(config, i);
  return out;
}

SimEstimate summarize(std::span<const ReplicateOutcome> outcomes) {
  SimEstimate est;
  if (outcomes.empty()) return est;
  double sum = 0;
  std::int64_t extinct = 0;
  std::int64_t escaped = 0;
  for (const auto& o : outcomes) {
    if (o.status == ReplicateOutcome::Status::Extinct) {
      sum += o.time;
      ++extinct;
    } else if (o.status == ReplicateOutcome::Status::ColonyCapped) {
      ++escaped;
    }
  }
  const double n = static_cast<double>(outcomes.size());
  est.replicates_used = extinct;
  est.censored_fraction = static_cast<double>(outcomes.size() - extinct) / n;
  est.survival_fraction = static_cast<double>(escaped) / n;
  if (extinct == 0) {
    est.mean = std::numeric_limits<double>::quiet_NaN();
    est.std_error = std::numeric_limits<double>::quiet_NaN();
    return est;
  }
  est.mean = sum / static_cast<double>(extinct);
  double squares = 0;
  for (const auto& o : outcomes) {
    if (o.status == ReplicateOutcome::Status::Extinct) squares += (o.time - est.mean) * (o.time - est.mean);
  }
  est.std_error = extinct > 1 ? std::sqrt(squares / static_cast<double>(extinct - 1) / static_cast<double>(extinct))
                              : std::numeric_limits<double>::quiet_NaN();
  return est;
}

SimEstimate simulate(const SimConfig& config) { return summarize(run_replicates(config)); }

SimEstimate simulate_no_dispersion(const SimConfig& config) {
  if (config.topology.kind() != Topology::Kind::NoDispersion) throw InvalidParams("expected no-dispersion topology");
  return simulate(config);
}

SimEstimate simulate_tree(const SimConfig& config) {
  if (config.topology.kind() != Topology::Kind::Tree) throw InvalidParams("expected tree topology");
  return simulate(config);
}

SimEstimate simulate_free(const SimConfig& config) {
  if (config.topology.kind() != Topology::Kind::Free) throw InvalidParams("expected free topology");
  return simulate(config);
}

}  // namespace bincat
