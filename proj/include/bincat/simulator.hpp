#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "bincat/model.hpp"

namespace bincat {

using Rng = std::mt19937_64;

/// How a colony's birth count relates to its own catastrophe time.
///  Branching: the count is 1 + Poisson(lambda J') with J' ~ Exp(1) independent of
///    the colony lifetime, the continuous time branching process whose mean
///    extinction time the closed forms give.
///  Coupled: births accrue over the colony's actual lifetime, so longer lived
///    colonies leave more survivors. Same offspring law, larger mean extinction time.
enum class ColonyClock { Branching, Coupled };

std::string to_string(ColonyClock c);

struct SimConfig {
  ModelParams params;
  Topology topology;
  std::int64_t replicates = 100000;
  std::uint64_t seed = 0;
  /// Runs still alive at this time are censored.
  double time_cap = 1e4;
  /// Runs exceeding this many simultaneous colonies are censored and counted
  /// as surviving. Empty means default_colony_cap.
  std::optional<std::int64_t> colony_cap;
  ColonyClock clock = ColonyClock::Branching;
};

inline constexpr std::int64_t kColonyCapSubcritical = 10'000'000;
inline constexpr std::int64_t kColonyCapSupercritical = 1'000;

/// 10^3 for supercritical dispersion, where a run this large dies out with
/// probability at most q^1000; 10^7 otherwise.
std::int64_t default_colony_cap(const ModelParams& params, const Topology& topo);
std::int64_t effective_colony_cap(const SimConfig& config);

struct ReplicateOutcome {
  enum class Status { Extinct, TimeCapped, ColonyCapped };

  Status status = Status::Extinct;
  /// Extinction time, or the time at which the run was stopped.
  double time = 0;
  std::int64_t max_colonies = 1;

  bool operator==(const ReplicateOutcome&) const = default;
};

struct SimEstimate {
  /// Mean and standard error over extinct (uncensored) runs.
  double mean = 0;
  double std_error = 0;
  double censored_fraction = 0;
  double survival_fraction = 0;
  std::int64_t replicates_used = 0;
};

/// Generator for replicate `index`: mt19937_64 seeded with splitmix64(splitmix64(seed) ^ index).
Rng replicate_rng(std::uint64_t seed, std::uint64_t index);

/// Survivors of the first catastrophe of a one-individual colony, sampled at
/// colony level: J ~ Exp(1), size 1 + Poisson(lambda J), Binomial(size, p).
std::int64_t sample_survivors(Rng& rng, const ModelParams& params);

/// Same quantity obtained by running the birth/catastrophe jump chain.
std::int64_t sample_survivors_jump_chain(Rng& rng, const ModelParams& params);

/// Colonies founded after one catastrophe: distinct labels among the survivors
/// on the d-ary tree, every survivor under free dispersion.
std::int64_t sample_offspring(Rng& rng, const ModelParams& params, const Topology& topo);

/// One independent run of replicate `index`.
ReplicateOutcome simulate_replicate(const SimConfig& config, std::uint64_t index);

/// All replicates, evaluated in parallel. Identical to run_replicates_serial.
std::vector<ReplicateOutcome> run_replicates(const SimConfig& config);
std::vector<ReplicateOutcome> run_replicates_serial(const SimConfig& config);

/// Deterministic reduction in replicate order.
SimEstimate summarize(std::span<const ReplicateOutcome> outcomes);

SimEstimate simulate(const SimConfig& config);
/// Topology-checked entry points; throw InvalidParams on a mismatch.
SimEstimate simulate_no_dispersion(const SimConfig& config);
SimEstimate simulate_tree(const SimConfig& config);
SimEstimate simulate_free(const SimConfig& config);

}  // namespace bincat
