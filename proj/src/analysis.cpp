#include "ucblab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ucblab/errors.hpp"

namespace ucblab {

std::vector<std::size_t> geometric_checkpoints(std::size_t K) {
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k < K; k *= 2) out.push_back(k);
  if (K > 0) out.push_back(K);
  return out;
}

std::vector<GapPoint> gap_curve(const TabularMdp& mdp, const RewardFamily& family,
                                const MixturePolicy& mix,
                                const std::vector<std::size_t>& checkpoints) {
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1 || checkpoints[i] > mix.size() ||
        (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
      throw ParameterError("gap_curve: checkpoints must be ascending within [1, K]");
    }
  }
  const auto means = mean_reward_table(family, mdp);
  const double optimal = optimal_values(mdp, means).values.start_value();
  std::vector<GapPoint> out;
  out.reserve(checkpoints.size());
  std::vector<double> scratch;
  double prefix = 0.0;
  std::size_t consumed = 0;
  auto next = checkpoints.begin();
  for (const auto& run : mix.runs()) {
    if (next == checkpoints.end()) break;
    const double value = policy_start_value(mdp, means, run.policy, scratch);
    std::size_t remaining = run.count;
    while (next != checkpoints.end() && *next <= consumed + remaining) {
      const std::size_t take = *next - consumed;
      prefix += value * static_cast<double>(take);
      remaining -= take;
      consumed = *next;
      out.push_back({*next, optimal - prefix / static_cast<double>(*next)});
      ++next;
    }
    prefix += value * static_cast<double>(remaining);
    consumed += remaining;
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ParameterError("loglog_slope: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) throw ParameterError("loglog_slope: need two positive points");
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw ParameterError("loglog_slope: x values are all equal");
  return sxy / sxx;
}

double median(std::vector<double> values) {
  if (values.empty()) throw ParameterError("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  // Nearest-rank definition.
  if (sorted.empty()) return 0.0;
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

}  // namespace

CoverageReport coverage_report(const std::vector<std::size_t>& counts, const TabularMdp& mdp,
                               std::size_t episodes, double reach_floor) {
  const Shape& sh = mdp.shape();
  if (counts.size() != sh.cells()) throw ShapeError("coverage_report: count table shape");
  if (episodes == 0) throw ParameterError("coverage_report: K must be >= 1");
  const auto reach = all_reachabilities(mdp);
  const double scale = static_cast<double>(sh.horizon * sh.horizon * sh.states * sh.actions) /
                       static_cast<double>(episodes);
  CoverageReport rep;
  rep.episodes = episodes;
  rep.reach_floor = reach_floor;
  std::vector<double> ratios;
  std::size_t min_count = std::numeric_limits<std::size_t>::max();
  for (std::size_t h = 0; h < sh.horizon; ++h) {
    for (std::size_t s = 0; s < sh.states; ++s) {
      const double d = reach[h * sh.states + s];
      for (std::size_t a = 0; a < sh.actions; ++a) {
        CoverageCell cell{h, s, a, counts[sh.cell(h, s, a)], d, std::nullopt};
        if (d > 0.0 && d >= reach_floor) {
          cell.ratio = static_cast<double>(cell.count) * scale / (d * d);
          ratios.push_back(*cell.ratio);
          min_count = std::min(min_count, cell.count);
        }
        rep.cells.push_back(cell);
      }
    }
  }
  rep.included_cells = ratios.size();
  if (!ratios.empty()) {
    rep.min_ratio = *std::min_element(ratios.begin(), ratios.end());
    rep.median_ratio = median(ratios);
    rep.min_count = min_count;
  }
  return rep;
}

CoverageReport coverage_report(const ExplorationDataset& data, const TabularMdp& mdp,
                               double reach_floor) {
  if (!(data.shape() == mdp.shape())) throw ShapeError("coverage_report: dataset vs MDP shape");
  return coverage_report(build_empirical_model(data).visits, mdp, data.num_episodes(),
                         reach_floor);
}

ModelErrorReport model_error_report(const EmpiricalModel& model, const TabularMdp& mdp,
                                    std::size_t episodes) {
  const Shape& sh = mdp.shape();
  if (!(model.shape == sh)) throw ShapeError("model_error_report: model vs MDP shape");
  const auto reach = all_reachabilities(mdp);
  ModelErrorReport rep;
  rep.episodes = episodes;
  std::vector<double> errors;
  for (std::size_t h = 0; h < sh.horizon; ++h) {
    for (std::size_t s = 0; s < sh.states; ++s) {
      const double d = reach[h * sh.states + s];
      if (!(d > 0.0)) continue;
      for (std::size_t a = 0; a < sh.actions; ++a) {
        const std::size_t cell = sh.cell(h, s, a);
        for (std::size_t n = 0; n < sh.states; ++n) {
          const double e = d * std::abs(model.transitions[cell * sh.states + n] -
                                        mdp.transitions()[cell * sh.states + n]);
          rep.cells.push_back({h, s, a, n, e});
          errors.push_back(e);
        }
      }
    }
  }
  std::sort(errors.begin(), errors.end());
  if (!errors.empty()) {
    rep.max = errors.back();
    rep.p50 = quantile_sorted(errors, 0.5);
    rep.p90 = quantile_sorted(errors, 0.9);
    rep.p99 = quantile_sorted(errors, 0.99);
  }
  return rep;
}

ValueRatioEstimate value_ratio_transition_estimate(const ExplorationDataset& data,
                                                   const AlgoParams& params,
                                                   const TransitionTarget& target) {
  const Shape& sh = data.shape();
  sh.check(target.step, target.state, target.action);
  sh.check_state(target.next_state);
  const auto joint = RewardFamily::indicator(
      sh, {target.step, target.state, target.action, target.next_state});
  const auto marginal = RewardFamily::indicator(sh, {target.step, target.state, {}, {}});
  // Indicator rewards are deterministic given the transition, so the stream
  // is never consulted.
  RngStream unused(0, "value-ratio");
  auto averaged_start_value = [&](const RewardFamily& family) {
    const auto opt = policy_optimize(instantiate_rewards(data, family, unused), params);
    double total = 0.0;
    for (double v : opt.start_values) total += v;
    return total / static_cast<double>(opt.start_values.size());
  };
  ValueRatioEstimate out{};
  out.numerator_value = averaged_start_value(joint);
  out.denominator_value = averaged_start_value(marginal);
  if (!(out.denominator_value > 0.0)) {
    throw DegenerateTargetError("value_ratio_transition_estimate: denominator is zero");
  }
  out.estimate = std::clamp(out.numerator_value / out.denominator_value, 0.0, 1.0);
  return out;
}

std::vector<NScalingRow> n_scaling_summary(const TabularMdp& mdp, const TaskGenerator& tasks,
                                           const std::vector<std::size_t>& task_counts,
                                           const std::vector<std::uint64_t>& seeds,
                                           const NScalingOptions& options) {
  if (task_counts.empty() || seeds.empty()) {
    throw ParameterError("n_scaling_summary: empty grid");
  }
  const auto checkpoints = geometric_checkpoints(options.episodes);
  std::vector<NScalingRow> rows;
  for (std::size_t n : task_counts) {
    std::vector<double> gaps;
    std::vector<double> k_to_target;
    for (std::uint64_t seed : seeds) {
      const auto families = tasks(n, seed);
      const auto params = AlgoParams::make(mdp.shape(), options.episodes, families.size(),
                                           options.failure_prob, options.bonus_scale);
      const auto run =
          run_task_agnostic(mdp, families, params, RngStream(seed, "n-scaling"), options.workers);
      gaps.push_back(run.max_gap());
      std::vector<double> worst(checkpoints.size(), 0.0);
      for (std::size_t t = 0; t < families.size(); ++t) {
        const auto curve = gap_curve(mdp, families[t], run.tasks[t].mixture, checkpoints);
        for (std::size_t i = 0; i < curve.size(); ++i) worst[i] = std::max(worst[i], curve[i].gap);
      }
      double reached = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (worst[i] <= options.target_gap) {
          reached = static_cast<double>(checkpoints[i]);
          break;
        }
      }
      k_to_target.push_back(reached);
    }
    NScalingRow row{};
    row.num_tasks = n;
    row.seeds = seeds.size();
    row.median_max_gap = median(gaps);
    row.min_max_gap = *std::min_element(gaps.begin(), gaps.end());
    row.max_max_gap = *std::max_element(gaps.begin(), gaps.end());
    const double k_med = median(k_to_target);
    row.median_k_to_target = std::isfinite(k_med) ? static_cast<std::size_t>(k_med) : 0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ucblab
