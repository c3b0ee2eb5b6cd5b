#include "cca/core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cca {

BernoulliParams::BernoulliParams(std::vector<double> probs) : p_(std::move(probs)) {
  if (p_.size() < 2) throw std::invalid_argument("need at least two state probabilities");
  double sum = 0;
  for (double v : p_) {
    if (!(v > 0.0)) throw std::invalid_argument("state probabilities must be strictly positive");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("state probabilities must sum to 1");
  cdf_.resize(p_.size());
  double acc = 0;
  for (std::size_t s = 0; s < p_.size(); ++s) {
    acc += p_[s];
    cdf_[s] = acc;
  }
  cdf_.back() = 1.0;
}

int BernoulliParams::sample(double unit) const noexcept {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), unit);
  const auto idx = static_cast<std::size_t>(it - cdf_.begin());
  return static_cast<int>(std::min(idx, p_.size() - 1));
}

BernoulliParams parse_params(const std::string& csv) {
  std::vector<double> probs;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos)
      throw std::invalid_argument("empty entry in parameter list");
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (item.find_first_not_of(" \t", pos) != std::string::npos)
      throw std::invalid_argument("trailing junk in parameter entry: " + item);
    probs.push_back(v);
  }
  return BernoulliParams(std::move(probs));
}

Configuration::Configuration(int alphabet_size_, long long origin_, std::vector<State> cells_)
    : alphabet_size(alphabet_size_), origin(origin_), cells(std::move(cells_)) {
  if (alphabet_size < 2) throw std::invalid_argument("alphabet needs at least two states");
  if (cells.empty()) throw std::invalid_argument("configuration window must be nonempty");
  for (State s : cells)
    if (s >= alphabet_size) throw std::invalid_argument("cell value outside alphabet");
}

State Configuration::at(long long i) const {
  if (i < left() || i > right()) throw std::out_of_range("site outside configuration window");
  return cells[static_cast<std::size_t>(i - origin)];
}

Configuration sample_configuration(const BernoulliParams& params, std::size_t length,
                                   long long origin, const SeedSpec& seed) {
  std::vector<State> cells(length);
  const std::uint64_t key = stream_key(seed);
  for (std::size_t i = 0; i < length; ++i)
    cells[i] = static_cast<State>(params.sample(counter_unit(key, i)));
  return Configuration(params.states(), origin, std::move(cells));
}

std::size_t count_word_occurrences(const Configuration& cfg, std::span<const State> word) {
  if (word.empty() || word.size() > cfg.size())
    throw std::invalid_argument("word length must be in [1, configuration size]");
  const std::size_t windows = cfg.size() - word.size() + 1;
  std::size_t count = 0;
  for (std::size_t i = 0; i < windows; ++i)
    if (std::equal(word.begin(), word.end(), cfg.cells.begin() + static_cast<std::ptrdiff_t>(i)))
      ++count;
  return count;
}

double word_frequency(const Configuration& cfg, std::span<const State> word) {
  const std::size_t windows = cfg.size() - word.size() + 1;
  return static_cast<double>(count_word_occurrences(cfg, word)) / static_cast<double>(windows);
}

Configuration read_configuration(std::istream& in, int alphabet_size) {
  long long origin = 0;
  std::vector<State> cells;
  std::string line;
  bool have_cells = false;
  while (std::getline(in, line)) {
    const std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    if (line.compare(start, 7, "origin=") == 0) {
      origin = std::stoll(line.substr(start + 7));
      continue;
    }
    std::stringstream ss(line.substr(start));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const long v = std::stol(item);
      if (v < 0 || v > 255) throw std::invalid_argument("cell value out of range");
      cells.push_back(static_cast<State>(v));
    }
    have_cells = true;
    break;
  }
  if (!have_cells) throw std::invalid_argument("no cell line in configuration input");
  if (alphabet_size == 0) {
    const State hi = cells.empty() ? State{0} : *std::max_element(cells.begin(), cells.end());
    alphabet_size = std::max(3, static_cast<int>(hi) + 1);
  }
  return Configuration(alphabet_size, origin, std::move(cells));
}

Configuration read_configuration_file(const std::string& path, int alphabet_size) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open configuration file: " + path);
  return read_configuration(in, alphabet_size);
}

void write_configuration(std::ostream& out, const Configuration& cfg) {
  if (cfg.origin != 0) out << "origin=" << cfg.origin << "\n";
  for (std::size_t i = 0; i < cfg.cells.size(); ++i) {
    if (i) out << ',';
    out << static_cast<int>(cfg.cells[i]);
  }
  out << "\n";
}

}  // namespace cca
