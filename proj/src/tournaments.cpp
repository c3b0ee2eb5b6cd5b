#include "cca/tournaments.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cca/automata.hpp"

namespace cca {

Tournament::Tournament(int n, std::vector<std::uint8_t> beats) : n_(n), beats_(std::move(beats)) {
  if (n < 2) throw std::invalid_argument("tournament needs at least two states");
  if (beats_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw std::invalid_argument("beats matrix has wrong size");
  for (int i = 0; i < n; ++i) {
    if (beats_[static_cast<std::size_t>(i) * n + i])
      throw std::invalid_argument("state cannot predate itself");
    for (int j = i + 1; j < n; ++j) {
      const bool ij = beats_[static_cast<std::size_t>(i) * n + j];
      const bool ji = beats_[static_cast<std::size_t>(j) * n + i];
      if (ij == ji) throw std::invalid_argument("exactly one direction required per pair");
    }
  }
}

Tournament Tournament::from_edges(int n, const std::vector<std::pair<int, int>>& predates_edges) {
  std::vector<std::uint8_t> beats(static_cast<std::size_t>(n) * n, 0);
  for (const auto& [i, j] : predates_edges) {
    if (i < 0 || i >= n || j < 0 || j >= n) throw std::invalid_argument("edge endpoint out of range");
    beats[static_cast<std::size_t>(i) * n + j] = 1;
  }
  return Tournament(n, std::move(beats));
}

Tournament Tournament::from_bitmask(int n, std::uint32_t mask) {
  std::vector<std::uint8_t> beats(static_cast<std::size_t>(n) * n, 0);
  int bit = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++bit) {
      if (mask >> bit & 1u)
        beats[static_cast<std::size_t>(i) * n + j] = 1;
      else
        beats[static_cast<std::size_t>(j) * n + i] = 1;
    }
  return Tournament(n, std::move(beats));
}

std::uint32_t Tournament::bitmask() const {
  if (n_ > 8) throw std::invalid_argument("bitmask encoding limited to 8 states");
  std::uint32_t mask = 0;
  int bit = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j, ++bit)
      if (predates(i, j)) mask |= 1u << bit;
  return mask;
}

Tournament Tournament::standard_cycle3() { return k_predator(1); }

Tournament Tournament::reversed_cycle3() { return standard_cycle3().reversed(); }

Tournament Tournament::k_predator(int k) {
  if (k < 1) throw std::invalid_argument("need at least one predator step");
  const int n = 2 * k + 1;
  std::vector<std::uint8_t> beats(static_cast<std::size_t>(n) * n, 0);
  for (int j = 0; j < n; ++j)
    for (int d = 1; d <= k; ++d) beats[static_cast<std::size_t>(j) * n + (j + n - d) % n] = 1;
  return Tournament(n, std::move(beats));
}

Tournament Tournament::g1() {
  return from_edges(4, {{1, 0}, {2, 1}, {2, 0}, {3, 2}, {3, 1}, {0, 3}});
}

Tournament Tournament::g2() {
  return from_edges(5, {{1, 0}, {1, 4}, {2, 1}, {2, 0}, {3, 2}, {3, 1}, {4, 3}, {4, 2}, {0, 4}, {0, 3}});
}

bool Tournament::predates(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) throw std::out_of_range("state out of range");
  return beats_[static_cast<std::size_t>(i) * n_ + j] != 0;
}

Tournament Tournament::reversed() const {
  std::vector<std::uint8_t> beats(beats_.size(), 0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      beats[static_cast<std::size_t>(j) * n_ + i] = beats_[static_cast<std::size_t>(i) * n_ + j];
  return Tournament(n_, std::move(beats));
}

Tournament Tournament::relabeled(std::span<const int> sigma) const {
  if (sigma.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("permutation size mismatch");
  std::vector<std::uint8_t> beats(beats_.size(), 0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (i != j)
        beats[static_cast<std::size_t>(sigma[i]) * n_ + sigma[j]] =
            beats_[static_cast<std::size_t>(i) * n_ + j];
  return Tournament(n_, std::move(beats));
}

Tournament load_tournament(std::istream& in) {
  int n = -1;
  std::vector<std::pair<int, int>> edges;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::stringstream ss(line.substr(start));
    std::string tok;
    ss >> tok;
    if (tok == "states") {
      if (!(ss >> n)) throw std::invalid_argument("bad states header");
      continue;
    }
    int i = std::stoi(tok);
    std::string arrow;
    int j;
    if (!(ss >> arrow >> j) || arrow != "->") throw std::invalid_argument("bad edge line: " + line);
    edges.emplace_back(i, j);
  }
  if (n < 0) {
    for (const auto& [i, j] : edges) n = std::max({n, i + 1, j + 1});
  }
  return Tournament::from_edges(n, edges);
}

Tournament load_tournament_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tournament file: " + path);
  return load_tournament(in);
}

void save_tournament(std::ostream& out, const Tournament& t) {
  out << "states " << t.size() << "\n";
  for (int i = 0; i < t.size(); ++i)
    for (int j = 0; j < t.size(); ++j)
      if (t.predates(i, j)) out << i << " -> " << j << "\n";
}

bool cyclic_before(int n, int a, int b, int c) {
  if (n < 3) throw std::invalid_argument("cyclic order needs at least three states");
  if (a == b || b == c || a == c) throw std::invalid_argument("states must be pairwise distinct");
  const int ab = (b - a + n) % n;
  const int ac = (c - a + n) % n;
  return ab < ac;
}

bool is_transitive(const Tournament& t) {
  const int n = t.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (a == b || b == c || a == c) continue;
        if (t.predates(a, b) && t.predates(b, c) && !t.predates(a, c)) return false;
      }
  return true;
}

bool is_max_path_preserving(const Tournament& t) {
  const int n = t.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (a == b || b == c || a == c) continue;
        if (!cyclic_before(n, a, b, c)) continue;
        if (t.predates(a, c) && t.predates(b, c) && !t.predates(b, a)) return false;
      }
  return true;
}

bool has_standard_cycle(const Tournament& t) {
  const int n = t.size();
  for (int j = 0; j < n; ++j)
    if (!t.predates(j, (j + n - 1) % n)) return false;
  return true;
}

FamilyLabel classify(const Tournament& t) {
  if (!is_max_path_preserving(t)) return FamilyLabel::not_mpp;
  if (is_transitive(t)) return FamilyLabel::total_order;
  if (has_standard_cycle(t)) return FamilyLabel::family2;
  return FamilyLabel::family3;
}

MppCensus enumerate_mpp(int n) {
  if (n < 3 || n > 7) throw std::invalid_argument("census supported for 3 to 7 states");
  MppCensus census;
  census.n = n;
  const int pairs = n * (n - 1) / 2;
  const std::uint32_t limit = 1u << pairs;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    const Tournament t = Tournament::from_bitmask(n, mask);
    switch (classify(t)) {
      case FamilyLabel::not_mpp:
        ++census.not_mpp;
        continue;
      case FamilyLabel::total_order:
        ++census.total_orders;
        break;
      case FamilyLabel::family2:
        ++census.family2;
        census.family2_members.push_back(mask);
        break;
      case FamilyLabel::family3:
        ++census.family3;
        census.family3_members.push_back(mask);
        break;
    }
    census.members.push_back(mask);
  }
  return census;
}

std::uint64_t eulerian_odd_subsets(int n) {
  std::uint64_t total = 0;
  for (int k = 1; 2 * k + 1 <= n; ++k) {
    // C(n, 2k+1)
    std::uint64_t c = 1;
    for (int i = 0; i < 2 * k + 1; ++i) c = c * static_cast<std::uint64_t>(n - i) / (i + 1);
    total += c;
  }
  return total;
}

Tournament generate_conjectural(int n, std::vector<int> cut_vertices) {
  if (cut_vertices.size() % 2 == 0 || cut_vertices.size() < 3)
    throw std::invalid_argument("need an odd number (>= 3) of cut states");
  std::sort(cut_vertices.begin(), cut_vertices.end());
  if (std::adjacent_find(cut_vertices.begin(), cut_vertices.end()) != cut_vertices.end())
    throw std::invalid_argument("cut states must be distinct");
  for (int c : cut_vertices)
    if (c < 0 || c >= n) throw std::invalid_argument("cut state out of range");
  const int m = static_cast<int>(cut_vertices.size());
  const int k = (m - 1) / 2;

  // membership of x in the half-open cyclic interval ]a, b] walking upward
  const auto in_half_open = [n](int x, int a, int b) {
    const int ax = (x - a + n) % n;
    const int ab = (b - a + n) % n;
    return ax > 0 && ax <= (ab == 0 ? n : ab);
  };

  std::vector<std::uint8_t> beats(static_cast<std::size_t>(n) * n, 0);
  for (int j = 0; j < n; ++j) {
    int i = -1;
    for (int t = 0; t < m; ++t)
      if (in_half_open(j, cut_vertices[static_cast<std::size_t>(t)],
                       cut_vertices[static_cast<std::size_t>((t + 1) % m)])) {
        i = t;
        break;
      }
    if (i < 0) throw std::logic_error("cut intervals do not cover the state set");
    const int start = cut_vertices[static_cast<std::size_t>(((i - k) % m + m) % m)];
    for (int x = (start + 1) % n; x != j; x = (x + 1) % n)
      beats[static_cast<std::size_t>(j) * n + x] = 1;
  }
  // the Tournament constructor rejects the result unless every pair ended up
  // oriented exactly once
  return Tournament(n, std::move(beats));
}

Walk generalized_walk(const Tournament& t, const Configuration& cfg) {
  const int n = t.size();
  if (cfg.alphabet_size != n) throw std::invalid_argument("alphabet size must match tournament");
  if (cfg.cells.empty()) throw std::invalid_argument("cannot encode an empty window");
  Walk w;
  w.start = cfg.cells[0];
  long long v = w.start;
  int prev = cfg.cells[0];
  for (std::size_t idx = 1; idx < cfg.cells.size(); ++idx) {
    const int next = cfg.cells[idx];
    long long target;
    if (next == prev) {
      target = v;
    } else if (t.predates(next, prev)) {
      // rise to the nearest strictly higher value congruent to next (mod n)
      const int up = (next - static_cast<int>(((v % n) + n) % n) + n - 1) % n + 1;
      target = v + up;
    } else {
      const int down = (static_cast<int>(((v % n) + n) % n) - next + n - 1) % n + 1;
      target = v - down;
    }
    w.steps.push_back(static_cast<std::int8_t>(target - v));
    v = target;
    prev = next;
  }
  return w;
}

namespace {

// one-sided tournament column values; word fits in a small buffer
void onesided_tournament_column(const Tournament& t, const State* word, int len, int steps,
                                State* out) {
  State buf[32];
  for (int i = 0; i < len; ++i) buf[i] = word[i];
  out[0] = buf[0];
  for (int n = 1; n <= steps; ++n) {
    const int cur_len = len - n + 1;
    for (int i = 0; i + 1 < cur_len; ++i)
      if (t.predates(buf[i + 1], buf[i])) buf[i] = buf[i + 1];
    out[n] = buf[0];
  }
}

}  // namespace

GeneralizedOracleReport check_generalized_oracle(const Tournament& t, int max_len, int max_steps) {
  if (!is_max_path_preserving(t))
    throw std::invalid_argument("oracle check requires a max-path-preserving tournament");
  if (max_len < 0 || max_len > 12) throw std::invalid_argument("word length bound out of range");
  const int n = t.size();
  GeneralizedOracleReport report;
  for (int k = 0; k <= max_len; ++k) {
    const int len = k + 1;
    std::uint64_t words = 1;
    for (int i = 0; i < len; ++i) words *= static_cast<std::uint64_t>(n);
    const int steps = std::min(k, max_steps);
    for (std::uint64_t wi = 0; wi < words; ++wi) {
      State word[32];
      std::uint64_t rem = wi;
      for (int i = 0; i < len; ++i) {
        word[i] = static_cast<State>(rem % static_cast<std::uint64_t>(n));
        rem /= static_cast<std::uint64_t>(n);
      }
      State column[32];
      onesided_tournament_column(t, word, len, steps, column);
      const Configuration cfg(n, 0, std::vector<State>(word, word + len));
      const Walk walk = generalized_walk(t, cfg);
      const auto values = walk.values();
      long long best = values[0];
      for (int s = 0; s <= steps; ++s) {
        if (s > 0) best = std::max(best, values[static_cast<std::size_t>(s)]);
        ++report.checked;
        const State predicted = static_cast<State>(((best % n) + n) % n);
        if (predicted == column[s])
          ++report.agreements;
        else
          ++report.disagreements;
      }
    }
  }
  return report;
}

}  // namespace cca
