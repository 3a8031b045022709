#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ucblab/baselines.hpp"
#include "ucblab/dataset.hpp"
#include "ucblab/solver.hpp"
#include "ucblab/ucbzero.hpp"

namespace ucblab {

struct GapPoint {
  std::size_t k;  // 1-based prefix length
  double gap;
};

/// {1, 2, 4, ...} up to and including K.
std::vector<std::size_t> geometric_checkpoints(std::size_t K);

/// Gap V*_1(s_1) - V^{mix(<=k)}_1(s_1) of the uniform mixture over the first
/// k components, at each checkpoint. Checkpoints must be ascending and lie in
/// [1, mix.size()].
std::vector<GapPoint> gap_curve(const TabularMdp& mdp, const RewardFamily& family,
                                const MixturePolicy& mix,
                                const std::vector<std::size_t>& checkpoints);

/// Least-squares slope of log(y) against log(x). Points with y <= 0 are
/// skipped; ParameterError if fewer than two remain.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct CoverageCell {
  std::size_t h, s, a;
  std::size_t count;
  double reach;
  std::optional<double> ratio;  // set only when reach >= floor
};

struct CoverageReport {
  std::size_t episodes = 0;
  double reach_floor = 0.0;
  std::vector<CoverageCell> cells;
  /// Over cells with reach >= floor; zero when no cell qualifies.
  double min_ratio = 0.0;
  double median_ratio = 0.0;
  std::size_t min_count = 0;
  std::size_t included_cells = 0;
};

/// Normalized visitation ratio N_h(s,a) H^2 S A / (K delta_h(s)^2) per cell.
/// `counts` is indexed by Shape::cell (e.g. LearnerState::counts()).
CoverageReport coverage_report(const std::vector<std::size_t>& counts, const TabularMdp& mdp,
                               std::size_t episodes, double reach_floor = 1e-3);
CoverageReport coverage_report(const ExplorationDataset& data, const TabularMdp& mdp,
                               double reach_floor = 1e-3);

struct ModelErrorCell {
  std::size_t h, s, a, next;
  double scaled_error;  // delta_h(s) |P-hat - P|
};

struct ModelErrorReport {
  std::size_t episodes = 0;
  std::vector<ModelErrorCell> cells;  // only cells with delta_h(s) > 0
  double max = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
  double p99 = 0.0;
};

ModelErrorReport model_error_report(const EmpiricalModel& model, const TabularMdp& mdp,
                                    std::size_t episodes);

struct TransitionTarget {
  std::size_t step, state, action, next_state;
};

struct ValueRatioEstimate {
  double estimate;          // clamped to [0, 1]
  double numerator_value;   // averaged V_1 under the (h*, s*, a*, s'*) indicator
  double denominator_value; // averaged V_1 under the (h*, s*) indicator
};

/// Estimates P_{h*}(s'* | s*, a*) as the ratio of the average optimistic
/// start values obtained by replaying the dataset under two indicator
/// rewards. Throws DegenerateTargetError if the denominator is zero.
ValueRatioEstimate value_ratio_transition_estimate(const ExplorationDataset& data,
                                                   const AlgoParams& params,
                                                   const TransitionTarget& target);

/// Builds the N reward families for one (N, seed) grid point.
using TaskGenerator = std::function<std::vector<RewardFamily>(std::size_t n, std::uint64_t seed)>;

struct NScalingRow {
  std::size_t num_tasks;
  std::size_t seeds;
  double median_max_gap;
  double min_max_gap;
  double max_max_gap;
  /// Median over seeds of the smallest geometric checkpoint whose max-task
  /// gap is <= target_gap; 0 when the median run never gets there.
  std::size_t median_k_to_target;
};

struct NScalingOptions {
  std::size_t episodes = 1 << 12;
  double failure_prob = 0.1;
  double bonus_scale = 1.0;
  double target_gap = 0.1;
  std::size_t workers = 1;
};

/// Runs run_task_agnostic for every (N, seed) and aggregates over seeds.
/// Seeds map to RngStream(seed, "n-scaling").
std::vector<NScalingRow> n_scaling_summary(const TabularMdp& mdp, const TaskGenerator& tasks,
                                           const std::vector<std::size_t>& task_counts,
                                           const std::vector<std::uint64_t>& seeds,
                                           const NScalingOptions& options);

/// Even-sized inputs average the two middle values.
double median(std::vector<double> values);

}  // namespace ucblab
