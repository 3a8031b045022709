#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ucblab/analysis.hpp"
#include "ucblab/bandit_lb.hpp"
#include "ucblab/env_gen.hpp"

namespace ucblab {

/// Invalid or incomplete configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sectioned key-value file:
///
///   # comment
///   [section]
///   key = value
///
/// Keys are addressed as "section.key". Duplicate keys are an error.
class KeyValueFile {
 public:
  static KeyValueFile parse(const std::string& text, const std::string& origin = "<config>");
  static KeyValueFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get_string(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  double get_double(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<std::uint64_t> get_uint_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
  std::string origin_;

  const std::string& raw(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& expected) const;
};

struct TaskSpec {
  std::string kind = "random-bernoulli";  // random-bernoulli | default | hard
  std::size_t count = 1;                  // N
  double sparsity = 0.0;
};

struct AlgoSpec {
  std::size_t episodes = 0;  // K, required
  double failure_prob = 0.1;
  double bonus_scale = 1.0;
};

struct AnalysisSpec {
  std::vector<std::size_t> checkpoints;  // empty: geometric
  double reach_floor = 1e-3;
  std::vector<TransitionTarget> targets;  // stored 0-based
};

struct SweepSpec {
  std::vector<std::size_t> task_counts;
  std::vector<std::size_t> episodes;
  std::vector<double> bonus_scales;
  std::vector<std::uint64_t> seeds;
};

struct BanditSpec {
  std::size_t collision_episodes = 3;
  std::size_t collision_tasks = 10;
  std::size_t mc_trials = 100000;
  HardnessOptions hardness;
};

/// Everything a subcommand needs; parsed from one file.
struct ExperimentConfig {
  EnvSpec env;
  TaskSpec tasks;
  AlgoSpec algo;
  AnalysisSpec analysis;
  std::optional<SweepSpec> sweep;
  BanditSpec bandit;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  std::size_t workers = 1;
  /// Also run the naive per-task baseline in run and sweep.
  bool naive = true;

  /// Echo of the parsed key-value pairs, for manifests.
  std::map<std::string, std::string> source;
};

/// Recognized keys and their types:
///
///   [run]      seed:uint  output_dir:string  workers:uint  naive:bool
///   [env]      generator:string  states actions horizon grid_width grid_height:uint
///              slip sparsity epsilon:float  seed:uint (defaults to run.seed)
///   [tasks]    kind:string  count:uint  sparsity:float
///   [algo]     episodes:uint (required)  failure_prob bonus_scale:float
///   [analysis] checkpoints:uint-list  reach_floor:float
///              targets: "h:s:a:s'" entries separated by ',' with 1-based h
///   [sweep]    task_counts episodes seeds:uint-list  bonus_scales:float-list
///   [bandit]   collision_episodes collision_tasks mc_trials n_arms trials:uint
///              epsilon success_level:float  task_counts seeds budgets:uint-list
///
/// Unknown sections or keys raise ConfigError, as do values of the wrong type.
/// When `require_algo` is set, algo.episodes must be present.
ExperimentConfig parse_config(const KeyValueFile& file, bool require_algo = true);

}  // namespace ucblab
