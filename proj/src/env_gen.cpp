#include "ucblab/env_gen.hpp"

#include <string>

#include "ucblab/errors.hpp"
#include "ucblab/rng.hpp"

namespace ucblab {

namespace {

void require_positive(std::size_t S, std::size_t A, std::size_t H, const char* who) {
  if (S == 0 || A == 0 || H == 0) {
    throw ParameterError(std::string(who) + ": S, A, H must be >= 1");
  }
}

void require_slip(double slip, const char* who) {
  if (!(slip >= 0.0 && slip < 1.0)) {
    throw ParameterError(std::string(who) + ": slip must lie in [0, 1)");
  }
}

}  // namespace

TabularMdp gen_random_dense(std::size_t S, std::size_t A, std::size_t H, std::uint64_t seed) {
  require_positive(S, A, H, "gen_random_dense");
  RngStream rng(seed, "env/random-dense");
  const Shape shape{S, A, H};
  std::vector<double> p(shape.cells() * S);
  for (std::size_t row = 0; row < shape.cells(); ++row) {
    double* r = p.data() + row * S;
    double total = 0.0;
    for (std::size_t n = 0; n < S; ++n) {
      r[n] = rng.exponential();
      total += r[n];
    }
    for (std::size_t n = 0; n < S; ++n) r[n] /= total;
  }
  return TabularMdp(shape, std::move(p));
}

TabularMdp gen_uniform_transition(std::size_t S, std::size_t A, std::size_t H) {
  require_positive(S, A, H, "gen_uniform_transition");
  const Shape shape{S, A, H};
  return TabularMdp(shape, std::vector<double>(shape.cells() * S, 1.0 / static_cast<double>(S)));
}

TabularMdp gen_chain(std::size_t S, std::size_t H, double slip, std::uint64_t /*seed*/) {
  require_positive(S, 2, H, "gen_chain");
  require_slip(slip, "gen_chain");
  const Shape shape{S, 2, H};
  std::vector<double> p(shape.cells() * S, 0.0);
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t s = 0; s < S; ++s) {
      const std::size_t right = s + 1 < S ? s + 1 : s;
      const std::size_t left = s > 0 ? s - 1 : s;
      double* r0 = p.data() + shape.cell(h, s, 0) * S;
      r0[right] += 1.0 - slip;
      r0[s] += slip;
      double* r1 = p.data() + shape.cell(h, s, 1) * S;
      r1[left] += 1.0 - slip;
      r1[s] += slip;
    }
  }
  return TabularMdp(shape, std::move(p));
}

TabularMdp gen_gridworld(std::size_t width, std::size_t height, std::size_t H, double slip,
                         std::uint64_t /*seed*/) {
  require_positive(width, height, H, "gen_gridworld");
  require_slip(slip, "gen_gridworld");
  const std::size_t S = width * height;
  const Shape shape{S, 4, H};
  std::vector<double> p(shape.cells() * S, 0.0);
  // up, down, left, right
  const int dx[4] = {0, 0, -1, 1};
  const int dy[4] = {-1, 1, 0, 0};
  auto move = [&](std::size_t s, int dir) -> std::size_t {
    const long x = static_cast<long>(s % width) + dx[dir];
    const long y = static_cast<long>(s / width) + dy[dir];
    if (x < 0 || y < 0 || x >= static_cast<long>(width) || y >= static_cast<long>(height)) {
      return s;
    }
    return static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x);
  };
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t s = 0; s < S; ++s) {
      std::vector<std::size_t> neighbours;
      for (int d = 0; d < 4; ++d) {
        if (const std::size_t n = move(s, d); n != s) neighbours.push_back(n);
      }
      for (int a = 0; a < 4; ++a) {
        double* r = p.data() + shape.cell(h, s, static_cast<std::size_t>(a)) * S;
        r[move(s, a)] += 1.0 - slip;
        if (neighbours.empty()) {
          r[s] += slip;
        } else {
          for (std::size_t n : neighbours) r[n] += slip / static_cast<double>(neighbours.size());
        }
      }
    }
  }
  return TabularMdp(shape, std::move(p));
}

HardTaskFamily gen_hard_task_family(std::size_t S, std::size_t A, std::size_t H,
                                    double epsilon, std::size_t num_tasks, std::uint64_t seed) {
  require_positive(S, A, H, "gen_hard_task_family");
  if (A < 3) throw ParameterError("gen_hard_task_family: need A >= 3");
  if (!(epsilon > 0.0 && epsilon <= 0.125)) {
    throw ParameterError("gen_hard_task_family: epsilon must lie in (0, 1/8]");
  }
  if (num_tasks == 0) throw ParameterError("gen_hard_task_family: need at least one task");
  const Shape shape{S, A, H};
  HardTaskFamily out;
  for (std::size_t n = 0; n < num_tasks; ++n) {
    RngStream rng(seed, "env/hard-task:" + std::to_string(n));
    std::vector<double> means(shape.cells(), 0.5);
    std::vector<std::size_t> hidden(H * S);
    for (std::size_t h = 0; h < H; ++h) {
      for (std::size_t s = 0; s < S; ++s) {
        const std::size_t arm = 1 + rng.uniform_index(A - 1);
        hidden[h * S + s] = arm;
        means[shape.cell(h, s, 0)] = (1.0 + epsilon) / 2.0;
        means[shape.cell(h, s, arm)] = 0.5 + epsilon;
      }
    }
    out.tasks.push_back(RewardFamily::bernoulli(shape, std::move(means)));
    out.hidden_arm.push_back(std::move(hidden));
  }
  return out;
}

namespace {

RewardFamily random_bernoulli(Shape shape, double sparsity, RngStream rng) {
  if (!(sparsity >= 0.0 && sparsity <= 1.0)) {
    throw ParameterError("random Bernoulli task: sparsity must lie in [0, 1]");
  }
  std::vector<double> means(shape.cells());
  for (double& m : means) {
    m = rng.uniform();
    if (sparsity > 0.0 && rng.uniform() < sparsity) m = 0.0;
  }
  return RewardFamily::bernoulli(shape, std::move(means));
}

}  // namespace

RewardFamily gen_random_bernoulli_task(Shape shape, double sparsity, std::uint64_t seed) {
  return random_bernoulli(shape, sparsity, RngStream(seed, "task/random-bernoulli"));
}

std::vector<RewardFamily> gen_random_bernoulli_tasks(Shape shape, std::size_t num_tasks,
                                                     double sparsity, std::uint64_t seed) {
  std::vector<RewardFamily> out;
  out.reserve(num_tasks);
  for (std::size_t n = 0; n < num_tasks; ++n) {
    out.push_back(random_bernoulli(
        shape, sparsity, RngStream(seed, "task/random-bernoulli:" + std::to_string(n))));
  }
  return out;
}

Environment make_environment(const EnvSpec& spec) {
  if (spec.generator == "random-dense") {
    TabularMdp mdp = gen_random_dense(spec.states, spec.actions, spec.horizon, spec.seed);
    auto task = gen_random_bernoulli_task(mdp.shape(), spec.reward_sparsity, spec.seed);
    return {std::move(mdp), std::move(task)};
  }
  if (spec.generator == "chain") {
    TabularMdp mdp = gen_chain(spec.states, spec.horizon, spec.slip, spec.seed);
    const Shape sh = mdp.shape();
    std::vector<double> means(sh.cells(), 0.0);
    for (std::size_t h = 0; h < sh.horizon; ++h)
      for (std::size_t a = 0; a < sh.actions; ++a) means[sh.cell(h, sh.states - 1, a)] = 1.0;
    return {std::move(mdp), RewardFamily::deterministic(sh, std::move(means))};
  }
  if (spec.generator == "gridworld") {
    TabularMdp mdp =
        gen_gridworld(spec.grid_width, spec.grid_height, spec.horizon, spec.slip, spec.seed);
    const Shape sh = mdp.shape();
    std::vector<double> means(sh.cells(), 0.0);
    for (std::size_t h = 0; h < sh.horizon; ++h)
      for (std::size_t a = 0; a < sh.actions; ++a) means[sh.cell(h, sh.states - 1, a)] = 1.0;
    return {std::move(mdp), RewardFamily::deterministic(sh, std::move(means))};
  }
  if (spec.generator == "uniform-transition-bandit") {
    TabularMdp mdp = gen_uniform_transition(spec.states, spec.actions, spec.horizon);
    auto family = gen_hard_task_family(spec.states, spec.actions, spec.horizon, spec.epsilon, 1,
                                       spec.seed);
    return {std::move(mdp), std::move(family.tasks.front())};
  }
  throw ParameterError("unknown generator '" + spec.generator + "'");
}

}  // namespace ucblab
