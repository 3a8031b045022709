#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ucblab/config.hpp"

namespace ucblab::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kIoError = 3,
  kShapeError = 4,
};

/// Output directory precedence: --out, then OUTPUT_DIR, then run.output_dir.
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg,
                                         const std::optional<std::filesystem::path>& flag);

struct CommandContext {
  ExperimentConfig cfg;
  std::filesystem::path out;
  std::size_t workers = 1;
};

/// dataset.csv, counts.csv, pseudo_values.csv.
void cmd_explore(const CommandContext& ctx);

/// mixture_task<i>.csv and gap_curve_task<i>.csv for 0-based task `task`.
void cmd_optimize(const CommandContext& ctx, const std::filesystem::path& dataset,
                  std::size_t task);

/// tasks.csv, gap_curves.csv, counts.csv, summary.csv.
void cmd_run(const CommandContext& ctx);

/// sweep.csv over the grid, one cached file per row under rows/.
void cmd_sweep(const CommandContext& ctx, bool resume);

/// coverage.csv and coverage_curve.csv; explores first when no dataset is given.
void cmd_coverage(const CommandContext& ctx, const std::optional<std::filesystem::path>& dataset);

/// model_error.csv, model_error_curve.csv and, with analysis.targets,
/// value_ratio.csv.
void cmd_model_error(const CommandContext& ctx,
                     const std::optional<std::filesystem::path>& dataset);

/// minimax.csv, collision.csv, collision_mc.csv, hypotheses.csv,
/// hardness.csv, hardness_thresholds.csv, lower_bound.csv.
void cmd_bandit_lb(const CommandContext& ctx);

/// Parses `args` (without the program name), dispatches, and maps
/// exceptions to exit codes.
int run(std::vector<std::string> args);

}  // namespace ucblab::cli
