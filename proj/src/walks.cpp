#include "cca/walks.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>

#include "cca/automata.hpp"

namespace cca {

namespace {

inline int mod3(long long v) noexcept {
  int r = static_cast<int>(v % 3);
  return r < 0 ? r + 3 : r;
}

}  // namespace

std::vector<long long> Walk::values() const {
  std::vector<long long> out(steps.size() + 1);
  long long v = start;
  out[0] = v;
  for (std::size_t t = 0; t < steps.size(); ++t) out[t + 1] = v += steps[t];
  return out;
}

long long Walk::final_value() const noexcept {
  long long v = start;
  for (std::int8_t s : steps) v += s;
  return v;
}

long long Walk::max_value() const noexcept {
  long long v = start;
  long long best = v;
  for (std::int8_t s : steps) {
    v += s;
    if (v > best) best = v;
  }
  return best;
}

int residue_step(int prev, int next) noexcept { return (next - prev + 4) % 3 - 1; }

Walk encode_walk(const Configuration& cfg, long long anchor) {
  if (cfg.alphabet_size != 3) throw std::invalid_argument("walk encoding needs a 3-state alphabet");
  if (anchor < cfg.left() || anchor > cfg.right())
    throw std::out_of_range("anchor outside configuration window");
  Walk w;
  w.start = cfg.at(anchor);
  w.steps.reserve(static_cast<std::size_t>(cfg.right() - anchor));
  int prev = mod3(w.start);
  for (long long i = anchor + 1; i <= cfg.right(); ++i) {
    const int next = cfg.at(i);
    w.steps.push_back(static_cast<std::int8_t>(residue_step(prev, next)));
    prev = next;
  }
  return w;
}

Walk walk_from_states(std::span<const State> word) {
  if (word.empty()) throw std::invalid_argument("cannot encode an empty word");
  Walk w;
  w.start = word[0];
  w.steps.reserve(word.size() - 1);
  int prev = mod3(w.start);
  for (std::size_t i = 1; i < word.size(); ++i) {
    const int next = word[i];
    w.steps.push_back(static_cast<std::int8_t>(residue_step(prev, next)));
    prev = next;
  }
  return w;
}

Configuration decode_walk(const Walk& walk, long long origin) {
  std::vector<State> cells(walk.length() + 1);
  long long v = walk.start;
  cells[0] = static_cast<State>(mod3(v));
  for (std::size_t t = 0; t < walk.length(); ++t) {
    v += walk.steps[t];
    cells[t + 1] = static_cast<State>(mod3(v));
  }
  return Configuration(3, origin, std::move(cells));
}

State max_oracle(const Configuration& cfg, long long n) {
  if (n < 0) throw std::invalid_argument("step count must be nonnegative");
  if (!cfg.covers(0, n)) throw std::invalid_argument("configuration must cover sites [0, n]");
  long long v = cfg.at(0);
  long long best = v;
  int prev = mod3(v);
  for (long long i = 1; i <= n; ++i) {
    const int next = cfg.at(i);
    v += residue_step(prev, next);
    prev = next;
    if (v > best) best = v;
  }
  return static_cast<State>(mod3(best));
}

Walk sample_walk(const BernoulliParams& params, long long start, std::size_t steps,
                 const SeedSpec& seed) {
  if (params.states() != 3) throw std::invalid_argument("walk sampling needs 3-state parameters");
  Walk w;
  w.start = start;
  w.steps.resize(steps);
  const std::uint64_t key = stream_key(seed);
  int prev = mod3(start);
  for (std::size_t t = 0; t < steps; ++t) {
    const int next = params.sample(counter_unit(key, t));
    w.steps[t] = static_cast<std::int8_t>(residue_step(prev, next));
    prev = next;
  }
  return w;
}

std::vector<std::size_t> records(const Walk& walk) {
  std::vector<std::size_t> out;
  long long v = walk.start;
  long long best = v;
  out.push_back(0);
  for (std::size_t t = 0; t < walk.length(); ++t) {
    v += walk.steps[t];
    if (v >= best) {
      best = v;
      out.push_back(t + 1);
    }
  }
  return out;
}

std::optional<std::size_t> h_tail(const Walk& walk, int h) {
  if (h < 1) throw std::invalid_argument("divisor must be positive");
  long long v = walk.start;
  long long best = v;
  long long last = v % h == 0 ? 0 : -1;
  for (std::size_t t = 0; t < walk.length(); ++t) {
    v += walk.steps[t];
    if (v >= best) {
      best = v;
      if (v % h == 0) last = static_cast<long long>(t) + 1;
    }
  }
  if (last < 0) return std::nullopt;
  return static_cast<std::size_t>(static_cast<long long>(walk.length()) - last);
}

EmbeddedWalk embed(const Walk& walk) {
  EmbeddedWalk e;
  long long v = walk.start;
  bool have = false;
  long long lastmult = 0;
  if (mod3(v) == 0) {
    e.times.push_back(0);
    e.values.push_back(v);
    have = true;
    lastmult = v;
  }
  for (std::size_t t = 0; t < walk.length(); ++t) {
    v += walk.steps[t];
    if (mod3(v) == 0 && (!have || v != lastmult)) {
      e.times.push_back(t + 1);
      e.values.push_back(v);
      have = true;
      lastmult = v;
    }
  }
  return e;
}

std::vector<State> flip_tail(std::span<const State> window) {
  if (window.empty()) throw std::invalid_argument("cannot flip an empty window");
  std::vector<State> out(window.begin(), window.end());
  if (out.size() == 1) return out;
  const std::size_t last_inner = out.size() - 2;  // final symbol is pinned
  std::size_t j = 0;
  bool found = false;
  for (std::size_t i = last_inner + 1; i-- > 0;) {
    if (out[i] == 0) {
      j = i;
      found = true;
      break;
    }
  }
  std::size_t lo = found ? j + 1 : 0;
  std::size_t hi = last_inner;
  while (lo < hi) {
    std::swap(out[lo], out[hi]);
    ++lo;
    --hi;
  }
  return out;
}

namespace {

// Column values of the one-sided rule from an explicit word, one row at a time.
// word has len symbols; returns value at site 0 after each n = 0..steps.
inline void onesided_column_values(const State* word, int len, int steps, State* out) {
  State buf[32];
  for (int i = 0; i < len; ++i) buf[i] = word[i];
  out[0] = buf[0];
  for (int n = 1; n <= steps; ++n) {
    const int cur_len = len - n + 1;
    for (int i = 0; i + 1 < cur_len; ++i) {
      const State u = buf[i];
      buf[i] = (buf[i + 1] == (u + 1) % 3) ? static_cast<State>((u + 1) % 3) : u;
    }
    out[n] = buf[0];
  }
}

OracleSweep sweep_impl(int max_len, int max_steps, int threads) {
  if (max_len < 0 || max_len > 18) throw std::invalid_argument("word length bound out of range");
  if (max_steps < 0) throw std::invalid_argument("step bound must be nonnegative");
  OracleSweep total;
  for (int k = 0; k <= max_len; ++k) {
    const int len = k + 1;
    std::uint64_t words = 1;
    for (int i = 0; i < len; ++i) words *= 3;
    const int steps = std::min(k, max_steps);
    std::uint64_t checked = 0, mismatches = 0;
#pragma omp parallel for schedule(static) reduction(+ : checked, mismatches) \
    num_threads(threads) if (threads > 1)
    for (std::int64_t w = 0; w < static_cast<std::int64_t>(words); ++w) {
      State word[32];
      std::uint64_t rem = static_cast<std::uint64_t>(w);
      for (int i = 0; i < len; ++i) {
        word[i] = static_cast<State>(rem % 3);
        rem /= 3;
      }
      State column[32];
      onesided_column_values(word, len, steps, column);
      // walk route: running prefix max mod 3
      long long v = word[0];
      long long best = v;
      int prev = static_cast<int>(word[0]);
      for (int n = 0; n <= steps; ++n) {
        if (n > 0) {
          const int next = word[n];
          v += residue_step(prev, next);
          prev = next;
          if (v > best) best = v;
        }
        ++checked;
        if (static_cast<State>(((best % 3) + 3) % 3) != column[n]) ++mismatches;
      }
    }
    total.checked += checked;
    total.mismatches += mismatches;
  }
  return total;
}

}  // namespace

OracleSweep oracle_equivalence_sweep(int max_len, int max_steps, int workers) {
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  return sweep_impl(max_len, max_steps, threads);
}

OracleSweep oracle_equivalence_sweep_serial(int max_len, int max_steps) {
  return sweep_impl(max_len, max_steps, 1);
}

}  // namespace cca
