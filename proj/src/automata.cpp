#include "cca/automata.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cca {

namespace {

struct RadiiVisitor {
  int left = 0, right = 0;
};

}  // namespace

RuleSpec parse_rule(const std::string& text) {
  if (text == "cyclic3+") return OneSidedCyclic3Rule{};
  if (text.rfind("cyclic", 0) == 0) {
    const int n = std::stoi(text.substr(6));
    if (n < 2) throw std::invalid_argument("cyclic rule needs at least two states");
    return CyclicRule{n};
  }
  if (text.rfind("prob", 0) == 0) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("probabilistic rule needs :rate");
    const int n = std::stoi(text.substr(4, colon - 4));
    const double q = std::stod(text.substr(colon + 1));
    if (n < 2) throw std::invalid_argument("cyclic rule needs at least two states");
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("invasion rate must lie in (0, 1]");
    return ProbabilisticCyclicRule{n, q};
  }
  if (text.rfind("tournament:", 0) == 0) {
    const std::string arg = text.substr(11);
    if (arg == "g1") return TournamentRule{Tournament::g1(), Sided::two_sided};
    if (arg == "g2") return TournamentRule{Tournament::g2(), Sided::two_sided};
    return TournamentRule{load_tournament_file(arg), Sided::two_sided};
  }
  throw std::invalid_argument("unrecognized rule: " + text);
}

std::string rule_name(const RuleSpec& rule) {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CyclicRule>) {
          return "cyclic" + std::to_string(r.states);
        } else if constexpr (std::is_same_v<T, OneSidedCyclic3Rule>) {
          return "cyclic3+";
        } else if constexpr (std::is_same_v<T, ProbabilisticCyclicRule>) {
          char buf[48];
          std::snprintf(buf, sizeof buf, "prob%d:%g", r.states, r.invasion_rate);
          return buf;
        } else {
          std::string name = "tournament" + std::to_string(r.tournament.size());
          if (r.sided == Sided::one_sided) name += "+";
          return name;
        }
      },
      rule);
}

int alphabet_size(const RuleSpec& rule) {
  return std::visit(
      [](const auto& r) -> int {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CyclicRule>)
          return r.states;
        else if constexpr (std::is_same_v<T, OneSidedCyclic3Rule>)
          return 3;
        else if constexpr (std::is_same_v<T, ProbabilisticCyclicRule>)
          return r.states;
        else
          return r.tournament.size();
      },
      rule);
}

bool is_probabilistic(const RuleSpec& rule) {
  return std::holds_alternative<ProbabilisticCyclicRule>(rule);
}

int left_radius(const RuleSpec& rule) {
  if (std::holds_alternative<OneSidedCyclic3Rule>(rule)) return 0;
  if (const auto* t = std::get_if<TournamentRule>(&rule))
    return t->sided == Sided::one_sided ? 0 : 1;
  return 1;
}

int right_radius(const RuleSpec&) { return 1; }

namespace {

// Row kernels on raw buffers.  `in` has len cells covering lattice sites
// [origin, origin+len-1]; the output covers [origin+L, origin+len-1-R].

void row_cyclic(const State* in, std::size_t len, State* out, int n) {
  for (std::size_t i = 0; i + 2 < len; ++i) {
    const State c = in[i + 1];
    const State up = static_cast<State>((c + 1) % n);
    out[i] = (in[i] == up || in[i + 2] == up) ? up : c;
  }
}

void row_onesided3(const State* in, std::size_t len, State* out) {
  for (std::size_t i = 0; i + 1 < len; ++i) {
    const State c = in[i];
    const State up = static_cast<State>((c + 1) % 3);
    out[i] = (in[i + 1] == up) ? up : c;
  }
}

void row_prob(const State* in, std::size_t len, State* out, int n, double q, std::uint64_t key,
              long long out_origin) {
  for (std::size_t i = 0; i + 2 < len; ++i) {
    const State c = in[i + 1];
    const State up = static_cast<State>((c + 1) % n);
    State v = c;
    if (in[i] == up || in[i + 2] == up) {
      const std::uint64_t counter = static_cast<std::uint64_t>(out_origin + static_cast<long long>(i));
      if (counter_unit(key, counter) < q) v = up;
    }
    out[i] = v;
  }
}

void row_tournament(const State* in, std::size_t len, State* out, const Tournament& t,
                    bool two_sided) {
  if (two_sided) {
    for (std::size_t i = 0; i + 2 < len; ++i) {
      const State l = in[i], c = in[i + 1], r = in[i + 2];
      const bool lp = t.predates(l, c);
      const bool rp = t.predates(r, c);
      if (lp && rp)
        out[i] = t.predates(l, r) ? l : r;  // distinct predators: dominant one wins
      else if (lp)
        out[i] = l;
      else if (rp)
        out[i] = r;
      else
        out[i] = c;
    }
  } else {
    for (std::size_t i = 0; i + 1 < len; ++i)
      out[i] = t.predates(in[i + 1], in[i]) ? in[i + 1] : in[i];
  }
}

// Dispatches one shrinking step from raw input to raw output.
void apply_row(const RuleSpec& rule, const State* in, std::size_t len, State* out,
               long long in_origin, const std::optional<SeedSpec>& seed) {
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CyclicRule>) {
          row_cyclic(in, len, out, r.states);
        } else if constexpr (std::is_same_v<T, OneSidedCyclic3Rule>) {
          row_onesided3(in, len, out);
        } else if constexpr (std::is_same_v<T, ProbabilisticCyclicRule>) {
          if (!seed) throw std::invalid_argument("probabilistic rule requires a seed");
          row_prob(in, len, out, r.states, r.invasion_rate, stream_key(*seed), in_origin + 1);
        } else {
          row_tournament(in, len, out, r.tournament, r.sided == Sided::two_sided);
        }
      },
      rule);
}

}  // namespace

Configuration step(const RuleSpec& rule, const Configuration& cfg,
                   const std::optional<SeedSpec>& seed) {
  const int L = left_radius(rule), R = right_radius(rule);
  if (cfg.alphabet_size != alphabet_size(rule))
    throw std::invalid_argument("configuration alphabet does not match rule");
  if (cfg.size() < static_cast<std::size_t>(L + R + 1))
    throw std::invalid_argument("window too small for one update");
  std::vector<State> out(cfg.size() - static_cast<std::size_t>(L + R));
  if (L == 1) {
    apply_row(rule, cfg.cells.data(), cfg.size(), out.data(), cfg.origin, seed);
  } else {
    // one-sided kernels read (i, i+1); feed the buffer directly
    apply_row(rule, cfg.cells.data(), cfg.size(), out.data(), cfg.origin - 1, seed);
  }
  return Configuration(cfg.alphabet_size, cfg.origin + L, std::move(out));
}

State iterate_column(const RuleSpec& rule, const Configuration& cfg, long long t, long long site,
                     const std::optional<SeedSpec>& seed) {
  const int L = left_radius(rule), R = right_radius(rule);
  if (t < 0) throw std::invalid_argument("time must be nonnegative");
  if (!cfg.covers(site - static_cast<long long>(L) * t, site + static_cast<long long>(R) * t))
    throw std::invalid_argument("configuration must cover the dependency cone");
  const long long lo = site - static_cast<long long>(L) * t;
  const long long hi = site + static_cast<long long>(R) * t;
  std::vector<State> cur(cfg.cells.begin() + static_cast<std::ptrdiff_t>(lo - cfg.origin),
                         cfg.cells.begin() + static_cast<std::ptrdiff_t>(hi - cfg.origin) + 1);
  long long origin = lo;
  std::vector<State> next;
  for (long long j = 0; j < t; ++j) {
    next.resize(cur.size() - static_cast<std::size_t>(L + R));
    std::optional<SeedSpec> row_seed;
    if (seed) row_seed = seed->substream(static_cast<std::uint64_t>(j));
    apply_row(rule, cur.data(), cur.size(), next.data(), L == 1 ? origin : origin - 1, row_seed);
    origin += L;
    cur.swap(next);
  }
  return cur[static_cast<std::size_t>(site - origin)];
}

bool verify_c3_decomposition() {
  const auto one = [](State a, State b) {
    return (b == (a + 1) % 3) ? static_cast<State>((a + 1) % 3) : a;
  };
  const auto two = [](State a, State b, State c) {
    const State up = static_cast<State>((b + 1) % 3);
    return (a == up || c == up) ? up : b;
  };
  for (State a = 0; a < 3; ++a)
    for (State b = 0; b < 3; ++b)
      for (State c = 0; c < 3; ++c)
        if (two(a, b, c) != one(one(a, b), one(b, c))) return false;
  return true;
}

double ParticleCensus::positive_density() const {
  return pairs ? static_cast<double>(positive) / static_cast<double>(pairs) : 0.0;
}
double ParticleCensus::negative_density() const {
  return pairs ? static_cast<double>(negative) / static_cast<double>(pairs) : 0.0;
}
double ParticleCensus::neutral_density() const {
  return pairs ? static_cast<double>(neutral) / static_cast<double>(pairs) : 0.0;
}

ParticleCensus particle_census(const Configuration& cfg) {
  ParticleCensus census;
  const int n = cfg.alphabet_size;
  if (cfg.size() < 2) return census;
  census.pairs = cfg.size() - 1;
  for (std::size_t i = 0; i + 1 < cfg.size(); ++i) {
    const State a = cfg.cells[i], b = cfg.cells[i + 1];
    if (a == b) continue;
    if (b == (a + 1) % n)
      ++census.positive;
    else if (b == (a + n - 1) % n)
      ++census.negative;
    else
      ++census.neutral;
  }
  return census;
}

std::size_t count_state_changes(const RuleSpec& rule, const Configuration& cfg, long long site,
                                long long t_max, const std::optional<SeedSpec>& seed) {
  const int L = left_radius(rule), R = right_radius(rule);
  if (t_max < 0) throw std::invalid_argument("time must be nonnegative");
  if (!cfg.covers(site - static_cast<long long>(L) * t_max,
                  site + static_cast<long long>(R) * t_max))
    throw std::invalid_argument("configuration must cover the dependency cone");
  const long long lo = site - static_cast<long long>(L) * t_max;
  const long long hi = site + static_cast<long long>(R) * t_max;
  std::vector<State> cur(cfg.cells.begin() + static_cast<std::ptrdiff_t>(lo - cfg.origin),
                         cfg.cells.begin() + static_cast<std::ptrdiff_t>(hi - cfg.origin) + 1);
  long long origin = lo;
  std::size_t changes = 0;
  State prev = cur[static_cast<std::size_t>(site - origin)];
  std::vector<State> next;
  for (long long j = 0; j < t_max; ++j) {
    next.resize(cur.size() - static_cast<std::size_t>(L + R));
    std::optional<SeedSpec> row_seed;
    if (seed) row_seed = seed->substream(static_cast<std::uint64_t>(j));
    apply_row(rule, cur.data(), cur.size(), next.data(), L == 1 ? origin : origin - 1, row_seed);
    origin += L;
    cur.swap(next);
    const State now = cur[static_cast<std::size_t>(site - origin)];
    if (now != prev) ++changes;
    prev = now;
  }
  return changes;
}

SpaceTimeDiagram run_diagram(const RuleSpec& rule, const Configuration& cfg, std::size_t steps,
                             const std::optional<SeedSpec>& seed) {
  const int L = left_radius(rule), R = right_radius(rule);
  if (cfg.size() < static_cast<std::size_t>(L + R) * steps + 1)
    throw std::invalid_argument("window too small for the requested number of steps");
  SpaceTimeDiagram diagram;
  diagram.rows.reserve(steps + 1);
  diagram.rows.push_back(cfg);
  for (std::size_t j = 0; j < steps; ++j) {
    std::optional<SeedSpec> row_seed;
    if (seed) row_seed = seed->substream(j);
    diagram.rows.push_back(step(rule, diagram.rows.back(), row_seed));
  }
  return diagram;
}

std::vector<std::vector<State>> run_periodic(const RuleSpec& rule, std::vector<State> row,
                                             std::size_t steps,
                                             const std::optional<SeedSpec>& seed) {
  const int n = alphabet_size(rule);
  const std::size_t width = row.size();
  if (width < 3) throw std::invalid_argument("periodic run needs width >= 3");
  for (State s : row)
    if (s >= n) throw std::invalid_argument("cell value outside rule alphabet");
  const bool one_sided = left_radius(rule) == 0;
  std::vector<std::vector<State>> rows;
  rows.reserve(steps + 1);
  rows.push_back(row);
  std::vector<State> padded(width + 2);
  std::vector<State> out(width);
  for (std::size_t j = 0; j < steps; ++j) {
    const std::vector<State>& cur = rows.back();
    padded[0] = cur[width - 1];
    std::copy(cur.begin(), cur.end(), padded.begin() + 1);
    padded[width + 1] = cur[0];
    std::optional<SeedSpec> row_seed;
    if (seed) row_seed = seed->substream(j);
    if (one_sided) {
      // shift input so the one-sided kernel sees (i, i+1) = (cur[i], cur[i+1 mod w])
      apply_row(rule, padded.data() + 1, width + 1, out.data(), 0, row_seed);
    } else {
      apply_row(rule, padded.data(), width + 2, out.data(), -1, row_seed);
    }
    rows.push_back(out);
  }
  return rows;
}

State palette_gray(State s) {
  static constexpr State table[5] = {255, 0, 76, 29, 226};
  if (s < 5) return table[s];
  return static_cast<State>((static_cast<int>(s) * 41 + 13) % 256);
}

void write_pgm(std::ostream& out, const std::vector<std::vector<State>>& rows_bottom_up,
               const std::string& comment) {
  if (rows_bottom_up.empty()) throw std::invalid_argument("no rows to write");
  const std::size_t width = rows_bottom_up.front().size();
  for (const auto& r : rows_bottom_up)
    if (r.size() != width) throw std::invalid_argument("ragged rows; pad first");
  out << "P5\n";
  std::stringstream cs(comment);
  std::string line;
  while (std::getline(cs, line)) out << "# " << line << "\n";
  out << width << " " << rows_bottom_up.size() << "\n255\n";
  std::vector<unsigned char> scan(width);
  for (std::size_t r = rows_bottom_up.size(); r-- > 0;) {
    const auto& row = rows_bottom_up[r];
    for (std::size_t i = 0; i < width; ++i) scan[i] = palette_gray(row[i]);
    out.write(reinterpret_cast<const char*>(scan.data()), static_cast<std::streamsize>(width));
  }
}

void write_pgm_file(const std::string& path, const std::vector<std::vector<State>>& rows_bottom_up,
                    const std::string& comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_pgm(out, rows_bottom_up, comment);
}

void write_pgm(std::ostream& out, const SpaceTimeDiagram& diagram, const std::string& comment) {
  if (diagram.rows.empty()) throw std::invalid_argument("empty diagram");
  const long long lo = diagram.rows.front().left();
  const long long hi = diagram.rows.front().right();
  const std::size_t width = static_cast<std::size_t>(hi - lo + 1);
  std::vector<std::vector<State>> padded;
  padded.reserve(diagram.rows.size());
  for (const auto& row : diagram.rows) {
    std::vector<State> full(width, 255);  // border sentinel, rendered mid-gray
    for (long long i = row.left(); i <= row.right(); ++i)
      full[static_cast<std::size_t>(i - lo)] = row.at(i);
    padded.push_back(std::move(full));
  }
  // remap the sentinel through a private palette slot by writing rows manually
  out << "P5\n";
  std::stringstream cs(comment);
  std::string line;
  while (std::getline(cs, line)) out << "# " << line << "\n";
  out << width << " " << padded.size() << "\n255\n";
  std::vector<unsigned char> scan(width);
  for (std::size_t r = padded.size(); r-- > 0;) {
    for (std::size_t i = 0; i < width; ++i)
      scan[i] = padded[r][i] == 255 ? 127 : palette_gray(padded[r][i]);
    out.write(reinterpret_cast<const char*>(scan.data()), static_cast<std::streamsize>(width));
  }
}

}  // namespace cca
