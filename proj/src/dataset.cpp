#include "ucblab/dataset.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "ucblab/errors.hpp"

namespace ucblab {

std::vector<std::string> validate_dataset(const ExplorationDataset& data) {
  std::vector<std::string> report;
  const Shape& sh = data.shape();
  if (data.steps().size() % sh.horizon != 0) {
    report.push_back("dataset holds a partial episode");
  }
  const std::size_t K = data.num_episodes();
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t h = 0; h < sh.horizon; ++h) {
      const Transition& t = data.at(k, h);
      std::ostringstream where;
      where << "(k=" << k + 1 << ", h=" << h + 1 << ")";
      if (t.state >= sh.states || t.action >= sh.actions || t.next_state >= sh.states) {
        report.push_back("index out of range at " + where.str());
        continue;
      }
      if (h == 0 && t.state != TabularMdp::kStartState) {
        report.push_back("episode does not start at state 0 " + where.str());
      }
      if (h + 1 < sh.horizon && data.at(k, h + 1).state != t.next_state) {
        report.push_back("next_state does not chain into step h+1 at " + where.str());
      }
    }
  }
  return report;
}

void write_dataset_csv(std::ostream& out, const DatasetHeader& header,
                       const ExplorationDataset& data, const std::vector<double>* rewards) {
  const Shape& sh = data.shape();
  char num[40];
  out << "# ucblab-dataset format_version=1 S=" << sh.states << " A=" << sh.actions
      << " H=" << sh.horizon << " K=" << data.num_episodes() << " seed=" << header.seed;
  std::snprintf(num, sizeof num, "%.17g", header.bonus_scale);
  out << " c=" << num;
  std::snprintf(num, sizeof num, "%.17g", header.failure_prob);
  out << " p=" << num << " N=" << header.num_tasks << '\n';
  out << (rewards ? "k,h,s,a,s_next,r\n" : "k,h,s,a,s_next\n");
  for (std::size_t k = 0; k < data.num_episodes(); ++k) {
    for (std::size_t h = 0; h < sh.horizon; ++h) {
      const Transition& t = data.at(k, h);
      out << k + 1 << ',' << h + 1 << ',' << t.state << ',' << t.action << ',' << t.next_state;
      if (rewards) {
        std::snprintf(num, sizeof num, "%.17g", (*rewards)[k * sh.horizon + h]);
        out << ',' << num;
      }
      out << '\n';
    }
  }
}

namespace {

std::map<std::string, std::string> parse_header_fields(const std::string& line) {
  std::istringstream is(line);
  std::string hash, magic;
  is >> hash >> magic;
  if (hash != "#" || magic != "ucblab-dataset") {
    throw FormatError("dataset: missing '# ucblab-dataset' header line");
  }
  std::map<std::string, std::string> fields;
  std::string kv;
  while (is >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw FormatError("dataset: bad header field '" + kv + "'");
    fields[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return fields;
}

const std::string& field(const std::map<std::string, std::string>& fields,
                         const std::string& key) {
  auto it = fields.find(key);
  if (it == fields.end()) throw FormatError("dataset: header lacks '" + key + "'");
  return it->second;
}

std::uint64_t to_u64(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw FormatError("dataset: bad integer for " + what + ": '" + text + "'");
  }
  return v;
}

double to_double(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw FormatError("dataset: bad number for " + what + ": '" + text + "'");
  }
  return v;
}

}  // namespace

LoadedDataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("dataset: empty input");
  const auto fields = parse_header_fields(line);
  if (field(fields, "format_version") != "1") {
    throw FormatError("dataset: unsupported format_version " + field(fields, "format_version"));
  }
  DatasetHeader header;
  header.shape = {to_u64(field(fields, "S"), "S"), to_u64(field(fields, "A"), "A"),
                  to_u64(field(fields, "H"), "H")};
  header.episodes = to_u64(field(fields, "K"), "K");
  header.seed = to_u64(field(fields, "seed"), "seed");
  header.bonus_scale = to_double(field(fields, "c"), "c");
  header.failure_prob = to_double(field(fields, "p"), "p");
  header.num_tasks = to_u64(field(fields, "N"), "N");
  if (header.shape.states == 0 || header.shape.actions == 0 || header.shape.horizon == 0) {
    throw FormatError("dataset: sizes must be positive");
  }

  if (!std::getline(in, line)) throw FormatError("dataset: missing column header");
  bool with_rewards = false;
  if (line == "k,h,s,a,s_next,r") {
    with_rewards = true;
  } else if (line != "k,h,s,a,s_next") {
    throw FormatError("dataset: unexpected column header '" + line + "'");
  }

  LoadedDataset out{header, ExplorationDataset(header.shape), std::nullopt};
  std::vector<double> rewards;
  out.data.reserve(header.episodes);
  const std::size_t H = header.shape.horizon;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string col;
    while (std::getline(ls, col, ',')) cols.push_back(col);
    if (cols.size() != (with_rewards ? 6u : 5u)) {
      throw FormatError("dataset: row " + std::to_string(row + 1) + " has " +
                        std::to_string(cols.size()) + " columns");
    }
    const std::uint64_t k = to_u64(cols[0], "k");
    const std::uint64_t h = to_u64(cols[1], "h");
    if (k != row / H + 1 || h != row % H + 1) {
      throw ShapeError("dataset: row " + std::to_string(row + 1) +
                       " is out of episode-major order");
    }
    Transition t{static_cast<std::uint32_t>(to_u64(cols[2], "s")),
                 static_cast<std::uint32_t>(to_u64(cols[3], "a")),
                 static_cast<std::uint32_t>(to_u64(cols[4], "s_next"))};
    out.data.push(t);
    if (with_rewards) rewards.push_back(to_double(cols[5], "r"));
    ++row;
  }
  if (out.data.steps().size() != header.episodes * H) {
    throw ShapeError("dataset: header says K=" + std::to_string(header.episodes) + " but " +
                     std::to_string(row) + " rows were read");
  }
  if (auto problems = validate_dataset(out.data); !problems.empty()) {
    throw ShapeError("dataset: " + problems.front());
  }
  if (with_rewards) out.rewards = std::move(rewards);
  return out;
}

}  // namespace ucblab
