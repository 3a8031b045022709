#include "ucblab/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ucblab/analysis.hpp"
#include "ucblab/bandit_lb.hpp"
#include "ucblab/baselines.hpp"
#include "ucblab/dataset.hpp"
#include "ucblab/errors.hpp"
#include "ucblab/experiment.hpp"
#include "ucblab/output.hpp"
#include "ucblab/parallel.hpp"

namespace ucblab::cli {

namespace fs = std::filesystem;

fs::path resolve_output_dir(const ExperimentConfig& cfg, const std::optional<fs::path>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("OUTPUT_DIR"); env && *env) return env;
  return cfg.output_dir;
}

namespace {

std::vector<std::size_t> checkpoints_for(const ExperimentConfig& cfg, std::size_t K) {
  if (cfg.analysis.checkpoints.empty()) return geometric_checkpoints(K);
  const auto& c = cfg.analysis.checkpoints;
  if (!std::is_sorted(c.begin(), c.end()) || std::adjacent_find(c.begin(), c.end()) != c.end() ||
      c.front() == 0 || c.back() > K) {
    throw ConfigError("field 'analysis.checkpoints' must be strictly ascending within [1, " +
                      std::to_string(K) + "]");
  }
  return c;
}

DatasetHeader header_for(const ExperimentSetup& setup, std::uint64_t seed) {
  return {setup.env.mdp.shape(), setup.params.episodes, seed, setup.params.bonus_scale,
          setup.params.failure_prob, setup.params.num_tasks};
}

ExploreResult explore_from_config(const ExperimentSetup& setup, std::uint64_t seed) {
  RngStream env_rng = run_stream(seed).child("explore");
  return explore(setup.env.mdp, setup.params, env_rng);
}

ExplorationDataset load_matching_dataset(const fs::path& path, const ExperimentSetup& setup) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read dataset '" + path.string() + "'");
  LoadedDataset loaded = read_dataset_csv(in);
  const Shape want = setup.env.mdp.shape();
  if (!(loaded.header.shape == want)) {
    throw ShapeError("dataset '" + path.string() + "' has " + to_string(loaded.header.shape) +
                     " but the config describes " + to_string(want));
  }
  if (loaded.header.episodes != setup.params.episodes) {
    throw ShapeError("dataset '" + path.string() + "' has K=" +
                     std::to_string(loaded.header.episodes) + " but algo.episodes is " +
                     std::to_string(setup.params.episodes));
  }
  return std::move(loaded.data);
}

ExplorationDataset prefix(const ExplorationDataset& data, std::size_t episodes) {
  ExplorationDataset out(data.shape());
  out.reserve(episodes);
  const std::size_t n = episodes * data.shape().horizon;
  for (std::size_t i = 0; i < n; ++i) out.push(data.steps()[i]);
  return out;
}

CsvTable counts_table(const Shape& shape, const std::vector<std::size_t>& counts) {
  CsvTable t({"h", "s", "a", "count"});
  for (std::size_t h = 0; h < shape.horizon; ++h)
    for (std::size_t s = 0; s < shape.states; ++s)
      for (std::size_t a = 0; a < shape.actions; ++a)
        t.add({h + 1, s, a, counts[shape.cell(h, s, a)]});
  return t;
}

CsvTable gap_table(const std::vector<std::vector<GapPoint>>& curves, std::size_t first_task = 0) {
  CsvTable t({"task", "k", "gap"});
  for (std::size_t n = 0; n < curves.size(); ++n)
    for (const auto& p : curves[n]) t.add({first_task + n, p.k, p.gap});
  return t;
}

std::vector<std::string> summary_columns(bool naive) {
  std::vector<std::string> c = {"num_tasks", "episodes", "bonus_scale", "seed", "max_gap",
                                "mean_gap"};
  if (naive) {
    c.push_back("naive_max_gap");
    c.push_back("naive_mean_gap");
  }
  return c;
}

std::vector<Cell> summary_row(const ExperimentOutcome& o) {
  std::vector<Cell> row = {o.point.num_tasks, o.point.episodes, o.point.bonus_scale,
                           o.point.seed,      o.result.max_gap(), o.result.mean_gap()};
  if (o.naive_gaps) {
    const auto& g = *o.naive_gaps;
    double sum = 0.0;
    for (double x : g) sum += x;
    row.emplace_back(*std::max_element(g.begin(), g.end()));
    row.emplace_back(sum / static_cast<double>(g.size()));
  }
  return row;
}

void finish(OutputSet& out, const CommandContext& ctx, std::uint64_t seed) {
  auto params = ctx.cfg.source;
  params["run.workers"] = std::to_string(ctx.workers);
  out.finish(params, seed);
  const auto n = out.digests().size();
  std::cout << "wrote " << n << (n == 1 ? " file" : " files") << " and manifest.json to "
            << out.dir().string() << "\n";
}

}  // namespace

void cmd_explore(const CommandContext& ctx) {
  const auto point = default_point(ctx.cfg);
  const auto setup = build_experiment(ctx.cfg, point);
  const auto run = explore_from_config(setup, point.seed);
  OutputSet out(ctx.out, "explore");

  std::ostringstream dataset;
  write_dataset_csv(dataset, header_for(setup, point.seed), run.dataset);
  out.write("dataset.csv", dataset.str());
  out.write("counts.csv", counts_table(setup.env.mdp.shape(), run.state.counts()));
  CsvTable trace({"k", "pseudo_value"});
  for (std::size_t k = 0; k < run.pseudo_value_trace.size(); ++k)
    trace.add({k + 1, run.pseudo_value_trace[k]});
  out.write("pseudo_values.csv", trace);
  finish(out, ctx, point.seed);
}

void cmd_optimize(const CommandContext& ctx, const fs::path& dataset_path, std::size_t task) {
  const auto point = default_point(ctx.cfg);
  const auto setup = build_experiment(ctx.cfg, point);
  if (task >= setup.tasks.size()) {
    throw ConfigError("task index " + std::to_string(task) + " out of range: tasks.count is " +
                      std::to_string(setup.tasks.size()));
  }
  const auto checkpoints = checkpoints_for(ctx.cfg, point.episodes);
  ExplorationDataset data = load_matching_dataset(dataset_path, setup);

  RngStream reward_rng = run_stream(point.seed).child("reward:task-" + std::to_string(task));
  const auto aug = instantiate_rewards(data, setup.tasks[task], reward_rng);
  const auto res = policy_optimize(aug, setup.params);

  const Shape shape = setup.env.mdp.shape();
  CsvTable mixture({"run", "first_k", "count", "h", "s", "action"});
  std::size_t first = 1;
  for (std::size_t r = 0; r < res.mixture.runs().size(); ++r) {
    const auto& run = res.mixture.runs()[r];
    for (std::size_t h = 0; h < shape.horizon; ++h)
      for (std::size_t s = 0; s < shape.states; ++s)
        mixture.add({r, first, run.count, h + 1, s, run.policy.action(h, s)});
    first += run.count;
  }
  OutputSet out(ctx.out, "optimize");
  const std::string suffix = "_task" + std::to_string(task) + ".csv";
  out.write("mixture" + suffix, mixture);
  out.write("gap_curve" + suffix,
            gap_table({gap_curve(setup.env.mdp, setup.tasks[task], res.mixture, checkpoints)}, task));
  finish(out, ctx, point.seed);
}

void cmd_run(const CommandContext& ctx) {
  const auto point = default_point(ctx.cfg);
  const auto setup = build_experiment(ctx.cfg, point);
  const auto checkpoints = checkpoints_for(ctx.cfg, point.episodes);
  const auto outcome = run_experiment(ctx.cfg, point, ctx.cfg.naive, ctx.workers);
  const auto& result = outcome.result;

  CsvTable tasks(ctx.cfg.naive ? std::vector<std::string>{"task", "optimal_value", "mixture_value",
                                                          "gap", "naive_gap"}
                               : std::vector<std::string>{"task", "optimal_value",
                                                          "mixture_value", "gap"});
  for (std::size_t n = 0; n < result.tasks.size(); ++n) {
    const auto& t = result.tasks[n];
    std::vector<Cell> row = {n, t.optimal_value, t.mixture_value, t.gap};
    if (outcome.naive_gaps) row.emplace_back((*outcome.naive_gaps)[n]);
    tasks.add(std::move(row));
  }
  std::vector<std::vector<GapPoint>> curves(result.tasks.size());
  parallel_for(curves.size(), ctx.workers, [&](std::size_t n) {
    curves[n] = gap_curve(setup.env.mdp, setup.tasks[n], result.tasks[n].mixture, checkpoints);
  });
  CsvTable summary(summary_columns(ctx.cfg.naive));
  summary.add(summary_row(outcome));

  OutputSet out(ctx.out, "run");
  out.write("tasks.csv", tasks);
  out.write("gap_curves.csv", gap_table(curves));
  out.write("counts.csv", counts_table(setup.env.mdp.shape(), result.exploration.state.counts()));
  out.write("summary.csv", summary);
  finish(out, ctx, point.seed);
}

void cmd_sweep(const CommandContext& ctx, bool resume) {
  if (!ctx.cfg.sweep) throw ConfigError("sweep needs a [sweep] section");
  const auto& grid = *ctx.cfg.sweep;
  std::vector<ExperimentPoint> points;
  for (std::size_t n : grid.task_counts)
    for (std::size_t k : grid.episodes)
      for (double c : grid.bonus_scales)
        for (std::uint64_t seed : grid.seeds) points.push_back({n, k, c, seed});

  const auto columns = summary_columns(ctx.cfg.naive);
  const std::string header = CsvTable(columns).str();
  auto row_path = [&](const ExperimentPoint& p) {
    return ctx.out / "rows" /
           ("row-N" + std::to_string(p.num_tasks) + "-K" + std::to_string(p.episodes) + "-c" +
            format_double(p.bonus_scale) + "-seed" + std::to_string(p.seed) + ".csv");
  };
  auto cached = [&](const fs::path& path) -> std::optional<std::string> {
    if (!resume || !fs::exists(path)) return std::nullopt;
    std::string text = read_file(path);
    if (text.rfind(header, 0) != 0 || std::count(text.begin(), text.end(), '\n') != 2) {
      return std::nullopt;
    }
    return text.substr(header.size());
  };

  std::vector<std::string> lines(points.size());
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (auto line = cached(row_path(points[i]))) {
      lines[i] = *line;
    } else {
      todo.push_back(i);
    }
  }
  parallel_for(todo.size(), ctx.workers, [&](std::size_t j) {
    const std::size_t i = todo[j];
    CsvTable row(columns);
    row.add(summary_row(run_experiment(ctx.cfg, points[i], ctx.cfg.naive, 1)));
    write_file_atomic(row_path(points[i]), row.str());
    lines[i] = row.str().substr(header.size());
  });

  std::string sweep = header;
  for (const auto& line : lines) sweep += line;
  OutputSet out(ctx.out, "sweep");
  out.write("sweep.csv", sweep);
  std::cerr << "sweep: " << todo.size() << " rows computed, " << points.size() - todo.size()
            << " reused\n";
  finish(out, ctx, ctx.cfg.seed);
}

void cmd_coverage(const CommandContext& ctx, const std::optional<fs::path>& dataset_path) {
  const auto point = default_point(ctx.cfg);
  const auto setup = build_experiment(ctx.cfg, point);
  const auto checkpoints = checkpoints_for(ctx.cfg, point.episodes);
  const ExplorationDataset data = dataset_path ? load_matching_dataset(*dataset_path, setup)
                                               : explore_from_config(setup, point.seed).dataset;
  const Shape shape = data.shape();
  const auto& mdp = setup.env.mdp;
  const double floor = ctx.cfg.analysis.reach_floor;

  CsvTable curve({"k", "included_cells", "min_count", "min_ratio", "median_ratio"});
  std::vector<std::size_t> counts(shape.cells(), 0);
  std::size_t next = 0;
  for (std::size_t k = 0; k < data.num_episodes(); ++k) {
    for (std::size_t h = 0; h < shape.horizon; ++h) {
      const auto& t = data.at(k, h);
      ++counts[shape.cell(h, t.state, t.action)];
    }
    if (next < checkpoints.size() && checkpoints[next] == k + 1) {
      const auto r = coverage_report(counts, mdp, k + 1, floor);
      curve.add({k + 1, r.included_cells, r.min_count, r.min_ratio, r.median_ratio});
      ++next;
    }
  }
  const auto report = coverage_report(counts, mdp, data.num_episodes(), floor);
  CsvTable cells({"h", "s", "a", "count", "reach", "ratio"});
  for (const auto& c : report.cells) {
    if (c.ratio) cells.add({c.h + 1, c.s, c.a, c.count, c.reach, *c.ratio});
  }
  OutputSet out(ctx.out, "coverage");
  out.write("coverage.csv", cells);
  out.write("coverage_curve.csv", curve);
  finish(out, ctx, point.seed);
}

void cmd_model_error(const CommandContext& ctx, const std::optional<fs::path>& dataset_path) {
  const auto point = default_point(ctx.cfg);
  const auto setup = build_experiment(ctx.cfg, point);
  const auto checkpoints = checkpoints_for(ctx.cfg, point.episodes);
  const ExplorationDataset data = dataset_path ? load_matching_dataset(*dataset_path, setup)
                                               : explore_from_config(setup, point.seed).dataset;
  const Shape shape = data.shape();
  const auto& mdp = setup.env.mdp;
  for (const auto& t : ctx.cfg.analysis.targets) {
    if (t.step >= shape.horizon || t.state >= shape.states || t.action >= shape.actions ||
        t.next_state >= shape.states) {
      throw ConfigError("field 'analysis.targets' entry " + std::to_string(t.step + 1) + ":" +
                        std::to_string(t.state) + ":" + std::to_string(t.action) + ":" +
                        std::to_string(t.next_state) + " lies outside " + to_string(shape));
    }
  }

  std::vector<ModelErrorReport> at_checkpoints(checkpoints.size());
  parallel_for(checkpoints.size(), ctx.workers, [&](std::size_t i) {
    const auto part = prefix(data, checkpoints[i]);
    at_checkpoints[i] = model_error_report(build_empirical_model(part), mdp, checkpoints[i]);
  });
  CsvTable curve({"k", "max", "p50", "p90", "p99"});
  for (const auto& r : at_checkpoints) curve.add({r.episodes, r.max, r.p50, r.p90, r.p99});

  const auto model = build_empirical_model(data);
  const auto report = model_error_report(model, mdp, data.num_episodes());
  CsvTable cells({"h", "s", "a", "s_next", "count", "scaled_error"});
  for (const auto& c : report.cells) {
    const auto visits = model.visits[mdp.shape().cell(c.h, c.s, c.a)];
    cells.add({c.h + 1, c.s, c.a, c.next, visits, c.scaled_error});
  }

  OutputSet out(ctx.out, "model-error");
  out.write("model_error.csv", cells);
  out.write("model_error_curve.csv", curve);
  if (!ctx.cfg.analysis.targets.empty()) {
    CsvTable ratios({"h", "s", "a", "s_next", "count_estimate", "ratio_estimate",
                     "abs_difference"});
    for (const auto& t : ctx.cfg.analysis.targets) {
      const double counted =
          model.transitions[shape.cell(t.step, t.state, t.action) * shape.states + t.next_state];
      try {
        const auto est = value_ratio_transition_estimate(data, setup.params, t);
        ratios.add({t.step + 1, t.state, t.action, t.next_state, counted, est.estimate,
                    std::abs(est.estimate - counted)});
      } catch (const DegenerateTargetError& e) {
        std::cerr << "warning: skipping target: " << e.what() << "\n";
      }
    }
    out.write("value_ratio.csv", ratios);
  }
  finish(out, ctx, point.seed);
}

void cmd_bandit_lb(const CommandContext& ctx) {
  const auto& b = ctx.cfg.bandit;
  OutputSet out(ctx.out, "bandit-lb");

  constexpr std::size_t kGridSteps = 1000;
  CsvTable minimax({"x", "gap_under_q", "gap_under_p", "worst"});
  for (std::size_t i = 0; i <= kGridSteps; ++i) {
    const double x = static_cast<double>(i) / kGridSteps;
    const auto g = minimax_gap(x);
    minimax.add({x, g.gap_under_q, g.gap_under_p, g.worst});
  }
  const auto best = minimax_gap_grid_search(kGridSteps);
  const auto two_arm = make_two_arm_construction(b.collision_episodes);
  CsvTable summary({"minimax_x", "minimax_worst_gap", "two_arm_episodes", "two_arm_num_tasks",
                    "two_arm_collision"});
  summary.add({best.best_x, best.best_worst_gap, two_arm.episodes, two_arm.num_tasks,
               collision_probability_analytic(two_arm.episodes, two_arm.num_tasks)});

  CsvTable collision({"episodes", "num_tasks", "analytic"});
  for (std::size_t k = 1; k <= 20; ++k) {
    const auto c = make_two_arm_construction(k);
    collision.add({k, c.num_tasks, collision_probability_analytic(k, c.num_tasks)});
  }

  std::vector<MonteCarloEstimate> mc(b.collision_episodes + 1);
  parallel_for(mc.size(), ctx.workers, [&](std::size_t t) {
    RngStream rng = RngStream(ctx.cfg.seed, "bandit/collision-mc").child("pulls=" + std::to_string(t));
    mc[t] = collision_probability_mc(t, b.collision_tasks, b.mc_trials, rng);
  });
  CsvTable collision_mc({"pulls", "num_tasks", "analytic", "estimate", "std_error", "trials"});
  for (std::size_t t = 0; t < mc.size(); ++t) {
    collision_mc.add({t, b.collision_tasks, collision_probability_analytic(t, b.collision_tasks),
                      mc[t].estimate, mc[t].std_error, mc[t].trials});
  }

  CsvTable hypotheses({"hypothesis", "arm", "mean"});
  const auto family = hypothesis_family(b.hardness.n_arms, b.hardness.epsilon);
  for (std::size_t l = 0; l < family.size(); ++l)
    for (std::size_t a = 0; a < family[l].size(); ++a) hypotheses.add({l, a, family[l][a]});

  const auto sweep = empirical_hardness_sweep(b.hardness);
  CsvTable hardness({"num_tasks", "seed", "budget", "success_fraction"});
  for (const auto& r : sweep.rows) hardness.add({r.num_tasks, r.seed, r.budget, r.success_fraction});
  CsvTable thresholds({"num_tasks", "median_budget", "seeds_reached", "seeds"});
  for (const auto& t : sweep.thresholds) {
    const auto reached = std::count_if(t.budget_per_seed.begin(), t.budget_per_seed.end(),
                                       [](std::size_t x) { return x != 0; });
    thresholds.add({t.num_tasks, t.median_budget, static_cast<std::size_t>(reached),
                    t.budget_per_seed.size()});
  }

  out.write("minimax.csv", minimax);
  out.write("lower_bound.csv", summary);
  out.write("collision.csv", collision);
  out.write("collision_mc.csv", collision_mc);
  out.write("hypotheses.csv", hypotheses);
  out.write("hardness.csv", hardness);
  out.write("hardness_thresholds.csv", thresholds);
  finish(out, ctx, ctx.cfg.seed);
}

int run(std::vector<std::string> args) {
  CLI::App app{"ucblab: reward-free exploration and multi-task policy optimization"};
  app.name("ucblab");
  app.require_subcommand(1);

  fs::path config_path;
  std::optional<fs::path> out_flag;
  std::optional<std::size_t> workers_flag;
  bool resume = false;
  fs::path dataset_required;
  std::optional<fs::path> dataset_optional;
  std::size_t task = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Config file")->required();
    sub->add_option("--out", out_flag, "Output directory (overrides OUTPUT_DIR and run.output_dir)");
    sub->add_option("--workers", workers_flag, "Worker threads")->check(CLI::PositiveNumber);
    return sub;
  };
  auto* explore_cmd = common(app.add_subcommand("explore", "Reward-free exploration"));
  auto* optimize_cmd = common(app.add_subcommand("optimize", "Policy optimization on a dataset"));
  optimize_cmd->add_option("--dataset", dataset_required, "dataset.csv from explore")->required();
  optimize_cmd->add_option("--task", task, "0-based task index");
  auto* run_cmd = common(app.add_subcommand("run", "Exploration plus every task"));
  auto* sweep_cmd = common(app.add_subcommand("sweep", "Grid over (N, K, c, seed)"));
  sweep_cmd->add_flag("--resume", resume, "Reuse finished rows");
  auto* coverage_cmd = common(app.add_subcommand("coverage", "Visitation coverage report"));
  coverage_cmd->add_option("--dataset", dataset_optional, "dataset.csv from explore");
  auto* model_cmd = common(app.add_subcommand("model-error", "Transition model error report"));
  model_cmd->add_option("--dataset", dataset_optional, "dataset.csv from explore");
  auto* bandit_cmd = common(app.add_subcommand("bandit-lb", "Lower-bound constructions"));

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const bool needs_episodes = !bandit_cmd->parsed();
    CommandContext ctx;
    ctx.cfg = parse_config(KeyValueFile::load(config_path), needs_episodes);
    ctx.out = resolve_output_dir(ctx.cfg, out_flag);
    ctx.workers = workers_flag.value_or(ctx.cfg.workers);
    if (explore_cmd->parsed()) cmd_explore(ctx);
    if (optimize_cmd->parsed()) cmd_optimize(ctx, dataset_required, task);
    if (run_cmd->parsed()) cmd_run(ctx);
    if (sweep_cmd->parsed()) cmd_sweep(ctx, resume);
    if (coverage_cmd->parsed()) cmd_coverage(ctx, dataset_optional);
    if (model_cmd->parsed()) cmd_model_error(ctx, dataset_optional);
    if (bandit_cmd->parsed()) cmd_bandit_lb(ctx);
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ShapeError& e) {
    std::cerr << "shape error: " << e.what() << "\n";
    return kShapeError;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const FormatError& e) {
    std::cerr << "I/O error: malformed input: " << e.what() << "\n";
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace ucblab::cli
