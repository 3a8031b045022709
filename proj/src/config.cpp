#include "ucblab/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace ucblab {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string part;
  while (std::getline(is, part, sep)) out.push_back(trim(part));
  return out;
}

bool parse_uint(const std::string& text, std::uint64_t& out) {
  if (text.empty() || text[0] == '-' || text[0] == '+') return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtoull(text.c_str(), &end, 10);
  return errno == 0 && end == text.c_str() + text.size();
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size() && std::isfinite(out);
}

}  // namespace

KeyValueFile KeyValueFile::parse(const std::string& text, const std::string& origin) {
  KeyValueFile file;
  file.origin_ = origin;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(number);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    if (section.empty()) throw ConfigError(where + ": key outside any [section]");
    const std::string key = section + "." + trim(line.substr(0, eq));
    if (file.values_.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    file.values_[key] = trim(line.substr(eq + 1));
    file.lines_[key] = number;
  }
  return file;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

const std::string& KeyValueFile::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(origin_ + ": missing required field '" + key + "'");
  return it->second;
}

void KeyValueFile::fail(const std::string& key, const std::string& expected) const {
  auto line = lines_.find(key);
  throw ConfigError(origin_ + ":" + (line == lines_.end() ? "?" : std::to_string(line->second)) +
                    ": field '" + key + "' must be " + expected + ", got '" + raw(key) + "'");
}

std::string KeyValueFile::get_string(const std::string& key) const { return raw(key); }

std::uint64_t KeyValueFile::get_uint(const std::string& key) const {
  std::uint64_t v;
  if (!parse_uint(raw(key), v)) fail(key, "a non-negative integer");
  return v;
}

double KeyValueFile::get_double(const std::string& key) const {
  double v;
  if (!parse_double(raw(key), v)) fail(key, "a finite number");
  return v;
}

bool KeyValueFile::get_bool(const std::string& key) const {
  const std::string& v = raw(key);
  if (v == "true") return true;
  if (v == "false") return false;
  fail(key, "true or false");
}

std::vector<std::uint64_t> KeyValueFile::get_uint_list(const std::string& key) const {
  std::vector<std::uint64_t> out;
  for (const auto& part : split(raw(key), ',')) {
    std::uint64_t v;
    if (!parse_uint(part, v)) fail(key, "a comma-separated list of non-negative integers");
    out.push_back(v);
  }
  if (out.empty()) fail(key, "a non-empty list");
  return out;
}

std::vector<double> KeyValueFile::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& part : split(raw(key), ',')) {
    double v;
    if (!parse_double(part, v)) fail(key, "a comma-separated list of numbers");
    out.push_back(v);
  }
  if (out.empty()) fail(key, "a non-empty list");
  return out;
}

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "run.seed",          "run.output_dir",        "run.workers",
      "env.generator",     "env.states",            "env.actions",
      "env.horizon",       "env.grid_width",        "env.grid_height",
      "env.slip",          "env.sparsity",          "env.epsilon",
      "env.seed",          "tasks.kind",            "tasks.count",
      "tasks.sparsity",    "algo.episodes",         "algo.failure_prob",
      "algo.bonus_scale",  "analysis.checkpoints",  "analysis.reach_floor",
      "analysis.targets",  "sweep.task_counts",     "sweep.episodes",
      "sweep.bonus_scales", "sweep.seeds",          "run.naive",
      "bandit.collision_episodes", "bandit.collision_tasks", "bandit.mc_trials",
      "bandit.n_arms",     "bandit.epsilon",        "bandit.task_counts",
      "bandit.seeds",      "bandit.budgets",        "bandit.trials",
      "bandit.success_level",
  };
  return keys;
}

std::vector<std::size_t> to_sizes(const std::vector<std::uint64_t>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

ExperimentConfig parse_config(const KeyValueFile& file, bool require_algo) {
  for (const auto& [key, value] : file.values()) {
    if (!known_keys().count(key)) throw ConfigError("unknown config field '" + key + "'");
  }
  ExperimentConfig cfg;
  cfg.source = file.values();
  auto opt_uint = [&](const std::string& key, auto& target) {
    if (file.has(key)) target = static_cast<std::remove_reference_t<decltype(target)>>(file.get_uint(key));
  };
  auto opt_double = [&](const std::string& key, double& target) {
    if (file.has(key)) target = file.get_double(key);
  };

  opt_uint("run.seed", cfg.seed);
  if (file.has("run.output_dir")) cfg.output_dir = file.get_string("run.output_dir");
  opt_uint("run.workers", cfg.workers);
  if (file.has("run.naive")) cfg.naive = file.get_bool("run.naive");
  if (cfg.workers == 0) throw ConfigError("field 'run.workers' must be >= 1");

  cfg.env.seed = cfg.seed;
  if (file.has("env.generator")) cfg.env.generator = file.get_string("env.generator");
  opt_uint("env.states", cfg.env.states);
  opt_uint("env.actions", cfg.env.actions);
  opt_uint("env.horizon", cfg.env.horizon);
  opt_uint("env.grid_width", cfg.env.grid_width);
  opt_uint("env.grid_height", cfg.env.grid_height);
  opt_double("env.slip", cfg.env.slip);
  opt_double("env.sparsity", cfg.env.reward_sparsity);
  opt_double("env.epsilon", cfg.env.epsilon);
  opt_uint("env.seed", cfg.env.seed);
  static const std::set<std::string> generators = {"random-dense", "chain", "gridworld",
                                                   "uniform-transition-bandit"};
  if (!generators.count(cfg.env.generator)) {
    throw ConfigError("field 'env.generator' must be one of random-dense, chain, gridworld, "
                      "uniform-transition-bandit; got '" + cfg.env.generator + "'");
  }

  if (file.has("tasks.kind")) cfg.tasks.kind = file.get_string("tasks.kind");
  opt_uint("tasks.count", cfg.tasks.count);
  opt_double("tasks.sparsity", cfg.tasks.sparsity);
  if (cfg.tasks.kind != "random-bernoulli" && cfg.tasks.kind != "default" &&
      cfg.tasks.kind != "hard") {
    throw ConfigError("field 'tasks.kind' must be random-bernoulli, default or hard");
  }
  if (cfg.tasks.count == 0) throw ConfigError("field 'tasks.count' must be >= 1");

  if (require_algo || file.has("algo.episodes")) {
    cfg.algo.episodes = file.get_uint("algo.episodes");
    if (cfg.algo.episodes == 0) throw ConfigError("field 'algo.episodes' must be >= 1");
  }
  opt_double("algo.failure_prob", cfg.algo.failure_prob);
  opt_double("algo.bonus_scale", cfg.algo.bonus_scale);

  if (file.has("analysis.checkpoints")) {
    cfg.analysis.checkpoints = to_sizes(file.get_uint_list("analysis.checkpoints"));
  }
  opt_double("analysis.reach_floor", cfg.analysis.reach_floor);
  if (file.has("analysis.targets")) {
    for (const auto& entry : split(file.get_string("analysis.targets"), ',')) {
      const auto parts = split(entry, ':');
      std::uint64_t v[4];
      if (parts.size() != 4 || !parse_uint(parts[0], v[0]) || !parse_uint(parts[1], v[1]) ||
          !parse_uint(parts[2], v[2]) || !parse_uint(parts[3], v[3]) || v[0] == 0) {
        throw ConfigError("field 'analysis.targets' entries must look like h:s:a:s' with h >= 1, "
                          "got '" + entry + "'");
      }
      cfg.analysis.targets.push_back({v[0] - 1, v[1], v[2], v[3]});
    }
  }

  const bool any_sweep = std::any_of(file.values().begin(), file.values().end(),
                                     [](const auto& kv) { return kv.first.rfind("sweep.", 0) == 0; });
  if (any_sweep) {
    SweepSpec sw;
    sw.task_counts = file.has("sweep.task_counts") ? to_sizes(file.get_uint_list("sweep.task_counts"))
                                                   : std::vector<std::size_t>{cfg.tasks.count};
    sw.episodes = file.has("sweep.episodes") ? to_sizes(file.get_uint_list("sweep.episodes"))
                                             : std::vector<std::size_t>{cfg.algo.episodes};
    sw.bonus_scales = file.has("sweep.bonus_scales") ? file.get_double_list("sweep.bonus_scales")
                                                     : std::vector<double>{cfg.algo.bonus_scale};
    sw.seeds = file.has("sweep.seeds") ? file.get_uint_list("sweep.seeds")
                                       : std::vector<std::uint64_t>{cfg.seed};
    cfg.sweep = sw;
  }

  opt_uint("bandit.collision_episodes", cfg.bandit.collision_episodes);
  opt_uint("bandit.collision_tasks", cfg.bandit.collision_tasks);
  opt_uint("bandit.mc_trials", cfg.bandit.mc_trials);
  auto& hard = cfg.bandit.hardness;
  opt_uint("bandit.n_arms", hard.n_arms);
  opt_double("bandit.epsilon", hard.epsilon);
  opt_uint("bandit.trials", hard.trials);
  opt_double("bandit.success_level", hard.success_level);
  if (file.has("bandit.task_counts")) hard.task_counts = to_sizes(file.get_uint_list("bandit.task_counts"));
  if (file.has("bandit.seeds")) hard.seeds = file.get_uint_list("bandit.seeds");
  if (file.has("bandit.budgets")) {
    hard.budgets = to_sizes(file.get_uint_list("bandit.budgets"));
  } else {
    hard.budgets = {32, 64, 128, 256, 512, 1024, 2048, 4096};
  }
  hard.failure_prob = cfg.algo.failure_prob;
  hard.bonus_scale = cfg.algo.bonus_scale;
  return cfg;
}

}  // namespace ucblab
