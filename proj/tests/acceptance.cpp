// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. All randomness is seeded; reruns print
// the same numbers.
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "support.hpp"
#include "ucblab/analysis.hpp"
#include "ucblab/bandit_lb.hpp"
#include "ucblab/cli.hpp"
#include "ucblab/experiment.hpp"
#include "ucblab/output.hpp"

using namespace ucblab;
namespace fs = std::filesystem;

namespace {

const std::vector<std::uint64_t> kSeeds{1, 2, 3, 4, 5};
const std::size_t kWorkers = std::max(1u, std::thread::hardware_concurrency());

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Verdict& v, double seconds) {
  if (!v.pass) ++failures;
  std::printf("%s [%d] %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", id, name.c_str(),
              v.detail.c_str(), seconds);
  std::fflush(stdout);
}

void info(const std::string& line) {
  std::printf("     info: %s\n", line.c_str());
  std::fflush(stdout);
}

template <class F>
void criterion(int id, const std::string& name, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v{false, ""};
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  report(id, name, v, dt.count());
}

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

template <class T>
std::string join(const std::vector<T>& xs, int digits = 4) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += " ";
    if constexpr (std::is_floating_point_v<T>)
      out += fmt(xs[i], digits);
    else if constexpr (std::is_same_v<T, std::string>)
      out += xs[i];
    else
      out += std::to_string(xs[i]);
  }
  return out;
}

// Desk setting: random dense MDP with S=5, A=3, H=5 and random Bernoulli tasks.
ExperimentConfig desk_config(std::size_t episodes, double bonus_scale) {
  std::ostringstream text;
  text << "[env]\ngenerator = random-dense\nstates = 5\nactions = 3\nhorizon = 5\n"
       << "[tasks]\nkind = random-bernoulli\n"
       << "[algo]\nepisodes = " << episodes << "\nbonus_scale = " << format_double(bonus_scale)
       << "\nfailure_prob = 0.1\n";
  return parse_config(KeyValueFile::parse(text.str(), "desk"));
}

ExperimentOutcome desk_run(std::size_t num_tasks, std::size_t episodes, double c,
                           std::uint64_t seed, bool with_naive) {
  const auto cfg = desk_config(episodes, c);
  return run_experiment(cfg, {num_tasks, episodes, c, seed}, with_naive, kWorkers);
}

struct DeskExploration {
  ExperimentSetup setup;
  ExploreResult result;
};

DeskExploration desk_explore(std::size_t episodes, double c, std::uint64_t seed) {
  const auto cfg = desk_config(episodes, c);
  auto setup = build_experiment(cfg, {1, episodes, c, seed});
  auto rng = run_stream(seed).child("explore");
  auto result = explore(setup.env.mdp, setup.params, rng);
  return {std::move(setup), std::move(result)};
}

// ---------------------------------------------------------------------------

Verdict oracle_equivalence() {
  RngStream fuzz(2024, "acceptance/oracle");
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto mdp = testing::fuzz_mdp(fuzz, 3, 2, 3);
    const auto family = testing::fuzz_rewards(fuzz, mdp.shape());
    worst = std::max(worst, std::abs(optimal_values(mdp, family).values.start_value() -
                                     brute_force_optimal(mdp, family)));
  }
  return {worst <= 1e-12, "50 instances, max |dp - brute force| = " + fmt(worst)};
}

Verdict zero_reward_equivalence() {
  int matched = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto mdp = gen_random_dense(5, 3, 5, seed);
    const auto task = gen_random_bernoulli_task(mdp.shape(), 0.0, seed);
    const auto params = AlgoParams::make(mdp.shape(), 10000, 1, 0.1, 1.0);
    RngStream env_a(seed, "acceptance/zero-reward"), env_b(seed, "acceptance/zero-reward");
    RngStream rewards(seed, "acceptance/zero-reward/rewards");
    const auto zero = ucb_h(mdp, task, params, env_a, rewards, {true, 2.0, false});
    const auto ucbzero = explore(mdp, params, env_b);
    if (zero.trajectory == ucbzero.dataset) ++matched;
  }
  return {matched == 10, std::to_string(matched) + "/10 seeds identical at K=10000"};
}

std::vector<std::size_t> rate_checkpoints() {
  std::vector<std::size_t> ks;
  for (int e = 8; e <= 18; ++e) ks.push_back(std::size_t{1} << e);
  return ks;
}

struct RateResult {
  double median_slope;
  std::vector<double> slopes;
  std::vector<double> first_gaps, final_gaps;
};

RateResult rate_shape(double c) {
  const auto ks = rate_checkpoints();
  RateResult out;
  for (auto seed : kSeeds) {
    const auto run = desk_run(1, ks.back(), c, seed, false);
    const auto cfg = desk_config(ks.back(), c);
    const auto setup = build_experiment(cfg, {1, ks.back(), c, seed});
    const auto curve =
        gap_curve(setup.env.mdp, setup.tasks[0], run.result.tasks[0].mixture, ks);
    std::vector<double> x, y;
    for (const auto& p : curve) {
      x.push_back(static_cast<double>(p.k));
      y.push_back(p.gap);
    }
    out.slopes.push_back(loglog_slope(x, y));
    out.first_gaps.push_back(curve.front().gap);
    out.final_gaps.push_back(curve.back().gap);
  }
  out.median_slope = median(out.slopes);
  return out;
}

Verdict rate_verdict(const RateResult& r) {
  bool decreased = true;
  for (std::size_t i = 0; i < r.slopes.size(); ++i)
    decreased = decreased && r.final_gaps[i] < r.first_gaps[i];
  const bool pass = r.median_slope >= -0.7 && r.median_slope <= -0.3 && decreased;
  return {pass, "median slope " + fmt(r.median_slope) + " (per seed " + join(r.slopes) +
                    "); gap K=2^8 " + join(r.first_gaps) + " -> K=2^18 " + join(r.final_gaps)};
}

Verdict n_scaling(double c) {
  constexpr std::size_t K = 1 << 16;
  std::vector<double> ratios, contrast;
  std::vector<double> g1s, g100s, naive100s;
  for (auto seed : kSeeds) {
    const double g1 = desk_run(1, K, c, seed, false).result.max_gap();
    const double g10 = desk_run(10, K, c, seed, false).result.max_gap();
    const auto big = desk_run(100, K, c, seed, true);
    const double g100 = big.result.max_gap();
    const double naive = *std::max_element(big.naive_gaps->begin(), big.naive_gaps->end());
    info("seed " + std::to_string(seed) + ": max gap N=1 " + fmt(g1) + ", N=10 " + fmt(g10) +
         ", N=100 " + fmt(g100) + ", naive N=100 " + fmt(naive));
    g1s.push_back(g1);
    g100s.push_back(g100);
    naive100s.push_back(naive);
    ratios.push_back(g100 / g1);
    contrast.push_back(naive / g100);
  }
  const double ratio = median(ratios);
  const double versus = median(naive100s) / median(g100s);
  const bool pass = ratio <= 3.0 && versus >= 2.0;
  return {pass, "median gap(N=100)/gap(N=1) " + fmt(ratio) + " (<= 3); naive/UCBZero max gap at N=100 " +
                    fmt(versus) + " (>= 2), per seed " + join(contrast)};
}

std::size_t min_included_count(const DeskExploration& d, double floor) {
  return coverage_report(d.result.dataset, d.setup.env.mdp, floor).min_count;
}

Verdict coverage(double c) {
  std::vector<double> ratios;
  std::size_t uncovered = 0, checked = 0;
  for (auto seed : kSeeds) {
    const auto half = desk_explore(1 << 15, c, seed);
    const auto full = desk_explore(1 << 16, c, seed);
    const auto a = min_included_count(half, 1e-3), b = min_included_count(full, 1e-3);
    ratios.push_back(a ? static_cast<double>(b) / static_cast<double>(a) : 0.0);

    const auto small = desk_explore(1 << 14, c, seed);
    const auto reach = all_reachabilities(small.setup.env.mdp);
    const Shape sh = small.setup.env.mdp.shape();
    const auto& counts = small.result.state.counts();
    for (std::size_t h = 0; h < sh.horizon; ++h)
      for (std::size_t s = 0; s < sh.states; ++s) {
        if (reach[h * sh.states + s] < 0.05) continue;
        for (std::size_t a2 = 0; a2 < sh.actions; ++a2) {
          ++checked;
          if (counts[sh.cell(h, s, a2)] == 0) ++uncovered;
        }
      }
  }
  const double r = median(ratios);
  const bool pass = r >= 1.6 && r <= 2.4 && uncovered == 0;
  return {pass, "median min-count ratio 2^16/2^15 " + fmt(r) + " (per seed " + join(ratios) +
                    "); unvisited cells with reach >= 0.05 at 2^14: " + std::to_string(uncovered) +
                    "/" + std::to_string(checked)};
}

Verdict model_recovery(double c) {
  std::vector<double> ratios;
  for (auto seed : kSeeds) {
    const auto small = desk_explore(1 << 14, c, seed);
    const auto large = desk_explore(1 << 16, c, seed);
    const double e14 = model_error_report(build_empirical_model(small.result.dataset),
                                          small.setup.env.mdp, 1 << 14)
                           .max;
    const double e16 = model_error_report(build_empirical_model(large.result.dataset),
                                          large.setup.env.mdp, 1 << 16)
                           .max;
    ratios.push_back(e14 > 0 ? e16 / e14 : 0.0);
  }
  const double r = median(ratios);

  // Ten targets drawn from visited cells with reach >= 0.05 on the seed-1 run.
  const auto run = desk_explore(1 << 16, c, 1);
  const auto& mdp = run.setup.env.mdp;
  const Shape sh = mdp.shape();
  const auto model = build_empirical_model(run.result.dataset);
  const auto reach = all_reachabilities(mdp);
  std::vector<TransitionTarget> pool;
  for (std::size_t h = 0; h < sh.horizon; ++h)
    for (std::size_t s = 0; s < sh.states; ++s)
      for (std::size_t a = 0; a < sh.actions; ++a)
        if (reach[h * sh.states + s] >= 0.05 && model.visits[sh.cell(h, s, a)] > 0)
          for (std::size_t n = 0; n < sh.states; ++n) pool.push_back({h, s, a, n});
  RngStream pick(1, "acceptance/value-ratio-targets");
  double worst = 0.0;
  std::vector<double> diffs;
  for (int i = 0; i < 10 && !pool.empty(); ++i) {
    const auto t = pool[pick.uniform_index(pool.size())];
    const double est = value_ratio_transition_estimate(run.result.dataset, run.setup.params, t)
                           .estimate;
    const double count_est = model.transitions[sh.cell(t.step, t.state, t.action) * sh.states +
                                               t.next_state];
    diffs.push_back(std::abs(est - count_est));
    worst = std::max(worst, diffs.back());
  }
  const bool pass = r >= 0.35 && r <= 0.75 && diffs.size() == 10 && worst <= 0.15;
  return {pass, "median max-error ratio 2^16/2^14 " + fmt(r) + " (per seed " + join(ratios) +
                    "); value-ratio vs count estimate on 10 targets: max |diff| " + fmt(worst) +
                    " (<= 0.15), all " + join(diffs, 3)};
}

Verdict exact_numbers() {
  const auto mm = minimax_gap_grid_search(1000);
  const bool minimax_ok = std::abs(mm.best_x - 0.2) <= 1e-9 && std::abs(mm.best_worst_gap - 0.08) <= 1e-9;
  double smallest = 1.0;
  for (std::size_t k = 1; k <= 20; ++k) {
    const auto n = static_cast<std::uint64_t>(
        std::ceil(1.0 + std::ldexp(1.0, static_cast<int>(k)) * std::log(2.0)));
    smallest = std::min(smallest, collision_probability_analytic(k, n));
  }
  auto rng = RngStream(1, "bandit/collision-mc").child("pulls=3");
  const auto mc = collision_probability_mc(3, 10, 100000, rng);
  const double analytic = collision_probability_analytic(3, 10);
  const bool pass = minimax_ok && smallest >= 0.5 && std::abs(mc.estimate - 0.699) <= 0.02;
  return {pass, "minimax " + fmt(mm.best_worst_gap, 6) + " at x=" + fmt(mm.best_x, 6) +
                    "; min collision K=1..20 " + fmt(smallest) + "; MC(3,10) " +
                    fmt(mc.estimate) + " vs analytic " + fmt(analytic)};
}

Verdict hardness() {
  HardnessOptions opt;
  opt.n_arms = 4;
  opt.epsilon = 0.1;
  opt.task_counts = {1, 8, 64};
  opt.seeds.clear();
  for (std::uint64_t s = 1; s <= 10; ++s) opt.seeds.push_back(s);
  opt.budgets.clear();
  for (int e = 12; e <= 68; ++e)
    opt.budgets.push_back(static_cast<std::size_t>(std::llround(std::exp2(e / 4.0))));
  opt.trials = 200;
  const auto sweep = empirical_hardness_sweep(opt);
  std::vector<std::size_t> medians;
  for (const auto& t : sweep.thresholds) medians.push_back(t.median_budget);
  bool increasing = medians.size() == 3 && medians[0] > 0;
  for (std::size_t i = 1; i < medians.size(); ++i)
    increasing = increasing && medians[i] > medians[i - 1];
  return {increasing, "median budget to 0.9 success for N=1,8,64: " + join(medians)};
}

// ---------------------------------------------------------------------------

struct Scratch {
  fs::path root;
  Scratch() {
    root = fs::temp_directory_path() / ("ucblab-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Scratch() { fs::remove_all(root); }
};

int quiet_cli(std::vector<std::string> args) {
  std::ostringstream sink;
  auto* old = std::cerr.rdbuf(sink.rdbuf());
  auto* old_out = std::cout.rdbuf(sink.rdbuf());
  const int code = cli::run(std::move(args));
  std::cerr.rdbuf(old);
  std::cout.rdbuf(old_out);
  return code;
}

std::map<std::string, std::string> csv_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.path().extension() == ".csv") out[fs::relative(e.path(), dir).string()] = read_file(e.path());
  return out;
}

Verdict determinism() {
  Scratch scratch;
  const auto config = scratch.root / "desk.ini";
  std::ofstream(config) << R"([run]
seed = 11
[env]
states = 5
actions = 3
horizon = 5
[tasks]
count = 4
[algo]
episodes = 2048
bonus_scale = 0.5
[analysis]
targets = 2:0:1:3, 3:1:2:0
[sweep]
task_counts = 1, 4
seeds = 1, 2
[bandit]
mc_trials = 20000
seeds = 1, 2, 3
budgets = 64, 256, 1024, 4096
trials = 50
)";
  const std::vector<std::string> commands{"explore", "run", "sweep", "coverage", "model-error",
                                          "bandit-lb"};
  std::size_t compared = 0;
  std::vector<std::string> differing;
  auto invoke = [&](const std::string& cmd, const fs::path& out,
                    std::vector<std::string> extra) {
    std::vector<std::string> args{cmd, "--config", config.string(), "--out", out.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    const int code = quiet_cli(args);
    if (code != 0) throw std::runtime_error(cmd + " exited with " + std::to_string(code));
  };
  auto compare = [&](const std::string& cmd, const fs::path& a, const fs::path& b) {
    const auto fa = csv_files(a), fb = csv_files(b);
    if (fa != fb || fa.empty()) differing.push_back(cmd);
    compared += fa.size();
  };
  for (const auto& cmd : commands) {
    const auto a = scratch.root / (cmd + "-a"), b = scratch.root / (cmd + "-b");
    invoke(cmd, a, {});
    invoke(cmd, b, {});
    compare(cmd, a, b);
  }
  const auto dataset = (scratch.root / "explore-a" / "dataset.csv").string();
  for (const char* tag : {"optimize-a", "optimize-b"})
    invoke("optimize", scratch.root / tag, {"--dataset", dataset, "--task", "2"});
  compare("optimize", scratch.root / "optimize-a", scratch.root / "optimize-b");
  // Resumed sweep after dropping cached rows must match the first sweep.
  fs::remove_all(scratch.root / "sweep-b" / "rows" / "row-N1-K2048-c0.5-seed1.csv");
  fs::remove(scratch.root / "sweep-b" / "sweep.csv");
  invoke("sweep", scratch.root / "sweep-b", {"--resume"});
  compare("sweep --resume", scratch.root / "sweep-a", scratch.root / "sweep-b");

  return {differing.empty(), std::to_string(commands.size() + 1) + " subcommands plus resumed sweep, " +
                                 std::to_string(compared) + " CSV files compared" +
                                 (differing.empty() ? "" : "; differing: " + join(differing))};
}

}  // namespace

int main() {
  std::printf("acceptance: workers=%zu, seeds 1..5 unless noted\n", kWorkers);

  criterion(1, "oracle equivalence", oracle_equivalence);
  criterion(2, "zero-reward equivalence", zero_reward_equivalence);
  criterion(3, "gap rate shape (c=0.5, N=1)", [] { return rate_verdict(rate_shape(0.5)); });
  {
    const auto v = rate_verdict(rate_shape(0.1));
    info(std::string("rate shape at c=0.1 would ") + (v.pass ? "pass" : "fail") + ": " + v.detail);
  }
  criterion(4, "task-count scaling (c=0.5, K=2^16)", [] { return n_scaling(0.5); });
  {
    const auto v = n_scaling(0.1);
    info(std::string("task-count scaling at c=0.1 would ") + (v.pass ? "pass" : "fail") + ": " +
         v.detail);
  }
  criterion(5, "coverage (c=0.5)", [] { return coverage(0.5); });
  {
    const auto v = coverage(0.1);
    info(std::string("coverage at c=0.1 would ") + (v.pass ? "pass" : "fail") + ": " + v.detail);
  }
  criterion(6, "model recovery (c=0.5)", [] { return model_recovery(0.5); });
  {
    const auto v = model_recovery(0.1);
    info(std::string("model recovery at c=0.1 would ") + (v.pass ? "pass" : "fail") + ": " +
         v.detail);
  }
  criterion(7, "exact lower-bound numbers", exact_numbers);
  criterion(8, "hardness grows with task count", hardness);
  criterion(9, "CLI determinism", determinism);

  std::printf("acceptance: %d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
