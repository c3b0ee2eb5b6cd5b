#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cca/core.hpp"

namespace cca {

// Nearest-neighbour lattice path: value sequence start, start + steps[0], ...
// Steps are -1, 0, or +1.
struct Walk {
  long long start = 0;
  std::vector<std::int8_t> steps;

  std::size_t length() const noexcept { return steps.size(); }
  std::vector<long long> values() const;
  long long final_value() const noexcept;
  long long max_value() const noexcept;
};

// The unique step from a value with residue `prev` (mod 3) to a value with
// residue `next` (mod 3): ((next - prev + 1) mod 3) - 1.
int residue_step(int prev, int next) noexcept;

// Lifts a 3-state configuration window to its walk: the walk starts at the
// cell value at `anchor` and each later cell pins the next value mod 3.
// Uses cells anchor..right().  Requires alphabet_size == 3.
Walk encode_walk(const Configuration& cfg, long long anchor);

// Same lift for a raw 3-state word, anchored at its first symbol.
Walk walk_from_states(std::span<const State> word);

// Reduces walk values mod 3 back to a configuration window starting at `origin`.
Configuration decode_walk(const Walk& walk, long long origin = 0);

// Value of the one-sided 3-state cyclic image at site 0 after n steps,
// computed from the walk: (max of values[0..n]) mod 3.  Requires covers(0, n).
State max_oracle(const Configuration& cfg, long long n);

// Random walk of `steps` steps from `start` whose t-th step moves to the
// unique neighbouring value whose residue equals a fresh draw from `params`.
// Requires params.states() == 3.
Walk sample_walk(const BernoulliParams& params, long long start, std::size_t steps,
                 const SeedSpec& seed);

// Times t with values[t] == max(values[0..t]).  Index 0 is always a record.
std::vector<std::size_t> records(const Walk& walk);

// n - t' where t' is the last record time whose value is divisible by h;
// nullopt when no record value is divisible by h.
std::optional<std::size_t> h_tail(const Walk& walk, int h);

// Subsequence of times where the walk sits at a multiple of 3 distinct from
// the previously selected one (the first multiple-of-3 visit opens it).
// Consecutive selected values differ by exactly +-3.
struct EmbeddedWalk {
  std::vector<std::size_t> times;
  std::vector<long long> values;

  std::size_t size() const noexcept { return values.size(); }
};
EmbeddedWalk embed(const Walk& walk);

// Measure-preserving involution on step windows between consecutive embedded
// vertices: locate the largest index j <= M-2 with window[j] == 0, reverse
// window[j+1 .. M-2] (the whole prefix window[0 .. M-2] when no such j), and
// keep the final symbol.  M = window length.
std::vector<State> flip_tail(std::span<const State> window);

struct OracleSweep {
  std::uint64_t checked = 0;
  std::uint64_t mismatches = 0;
};

// Exhaustively compares CA column iteration against the walk max-oracle over
// all 3-state words of length <= max_len + 1, for every step count n with
// n <= word length - 1 and n <= max_steps.
OracleSweep oracle_equivalence_sweep(int max_len, int max_steps, int workers = 0);
OracleSweep oracle_equivalence_sweep_serial(int max_len, int max_steps);

}  // namespace cca
