#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ucblab/config.hpp"
#include "ucblab/env_gen.hpp"
#include "ucblab/ucbzero.hpp"

namespace ucblab {

/// One grid point of an experiment.
struct ExperimentPoint {
  std::size_t num_tasks;
  std::size_t episodes;
  double bonus_scale;
  std::uint64_t seed;
};

struct ExperimentSetup {
  Environment env;
  std::vector<RewardFamily> tasks;
  AlgoParams params;
};

/// The point taken from the config's scalar fields.
ExperimentPoint default_point(const ExperimentConfig& cfg);

/// Environment seed: env.seed when set explicitly, otherwise the point's seed.
std::uint64_t environment_seed(const ExperimentConfig& cfg, std::uint64_t seed);

/// Builds the MDP, the N reward families and the algorithm parameters.
/// Task kinds: random-bernoulli draws N tasks from the point's seed; default
/// repeats the environment's own task; hard draws a hard task family.
ExperimentSetup build_experiment(const ExperimentConfig& cfg, const ExperimentPoint& point);

/// Root stream of a run: exploration uses its "explore" child and task n
/// its "reward:task-<n>" child.
RngStream run_stream(std::uint64_t seed);

/// Stream root for the naive per-task baseline.
RngStream naive_stream(std::uint64_t seed);

struct ExperimentOutcome {
  ExperimentPoint point;
  TaskAgnosticResult result;
  std::optional<std::vector<double>> naive_gaps;
};

/// UCBZero on every task of the point, plus the naive baseline at the same
/// total budget when `with_naive` is set.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const ExperimentPoint& point,
                                 bool with_naive, std::size_t workers = 1);

}  // namespace ucblab
