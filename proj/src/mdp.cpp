#include "ucblab/mdp.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ucblab/errors.hpp"

namespace ucblab {

std::string to_string(const Shape& shape) {
  std::ostringstream os;
  os << "S=" << shape.states << " A=" << shape.actions << " H=" << shape.horizon;
  return os.str();
}

void Shape::check(std::size_t h, std::size_t s, std::size_t a) const {
  if (h >= horizon || s >= states || a >= actions) {
    std::ostringstream os;
    os << "index (h=" << h << ", s=" << s << ", a=" << a << ") out of range for "
       << to_string(*this);
    throw std::out_of_range(os.str());
  }
}

void Shape::check_state(std::size_t s) const {
  if (s >= states) {
    throw std::out_of_range("state " + std::to_string(s) + " out of range for " +
                            to_string(*this));
  }
}

TabularMdp::TabularMdp(Shape shape, std::vector<double> transitions)
    : shape_(shape), transitions_(std::move(transitions)) {
  if (shape_.states == 0 || shape_.actions == 0 || shape_.horizon == 0) {
    throw ShapeError("TabularMdp: sizes must be positive, got " + to_string(shape_));
  }
  if (transitions_.size() != shape_.cells() * shape_.states) {
    throw ShapeError("TabularMdp: transition tensor has " +
                     std::to_string(transitions_.size()) + " entries, expected " +
                     std::to_string(shape_.cells() * shape_.states));
  }
}

std::span<const double> TabularMdp::row(std::size_t h, std::size_t s, std::size_t a) const {
  shape_.check(h, s, a);
  return {transitions_.data() + shape_.cell(h, s, a) * shape_.states, shape_.states};
}

double TabularMdp::prob(std::size_t h, std::size_t s, std::size_t a, std::size_t next) const {
  shape_.check_state(next);
  return row(h, s, a)[next];
}

std::vector<std::string> validate_mdp(const TabularMdp& mdp) {
  std::vector<std::string> report;
  const Shape& sh = mdp.shape();
  for (std::size_t h = 0; h < sh.horizon; ++h) {
    for (std::size_t s = 0; s < sh.states; ++s) {
      for (std::size_t a = 0; a < sh.actions; ++a) {
        const auto r = mdp.row(h, s, a);
        double total = 0.0;
        for (std::size_t next = 0; next < r.size(); ++next) {
          const double p = r[next];
          if (!std::isfinite(p) || p < 0.0) {
            std::ostringstream os;
            os << "P[h=" << h + 1 << ", s=" << s << ", a=" << a << ", s'=" << next
               << "] = " << p << " is negative or non-finite";
            report.push_back(os.str());
          }
          total += p;
        }
        if (!(std::abs(total - 1.0) <= 1e-9)) {
          std::ostringstream os;
          os.precision(17);
          os << "row (h=" << h + 1 << ", s=" << s << ", a=" << a << ") sums to " << total;
          report.push_back(os.str());
        }
      }
    }
  }
  return report;
}

std::size_t sample_transition(const TabularMdp& mdp, std::size_t h, std::size_t s,
                              std::size_t a, RngStream& rng) {
  return rng.categorical(mdp.row(h, s, a));
}

void write_mdp(std::ostream& out, const TabularMdp& mdp) {
  const Shape& sh = mdp.shape();
  out << "ucblab-mdp 1\n";
  out << sh.states << ' ' << sh.actions << ' ' << sh.horizon << ' '
      << TabularMdp::kStartState << '\n';
  char buf[40];
  const auto& p = mdp.transitions();
  for (std::size_t row = 0; row < sh.cells(); ++row) {
    for (std::size_t next = 0; next < sh.states; ++next) {
      std::snprintf(buf, sizeof buf, "%.17g", p[row * sh.states + next]);
      if (next) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

TabularMdp read_mdp(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "ucblab-mdp" || version != 1) {
    throw FormatError("read_mdp: missing 'ucblab-mdp 1' header");
  }
  Shape sh;
  std::size_t start = 0;
  if (!(in >> sh.states >> sh.actions >> sh.horizon >> start)) {
    throw FormatError("read_mdp: malformed size line");
  }
  if (start != TabularMdp::kStartState) {
    throw FormatError("read_mdp: start state must be 0");
  }
  std::vector<double> p(sh.cells() * sh.states);
  std::string token;
  for (double& v : p) {
    if (!(in >> token)) throw FormatError("read_mdp: truncated transition tensor");
    char* end = nullptr;
    v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) {
      throw FormatError("read_mdp: bad probability '" + token + "'");
    }
  }
  return TabularMdp(sh, std::move(p));
}

}  // namespace ucblab
