#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cca/core.hpp"
#include "cca/tournaments.hpp"

namespace cca {

struct CyclicRule {
  int states = 3;  // u -> u+1 when either neighbour holds u+1 (mod states)
};
struct OneSidedCyclic3Rule {};  // 3 states; only the right neighbour is consulted
struct ProbabilisticCyclicRule {
  int states = 3;
  double invasion_rate = 1.0;  // eligible cells advance independently with this probability
};
enum class Sided { one_sided, two_sided };
struct TournamentRule {
  Tournament tournament;
  Sided sided = Sided::two_sided;
};

using RuleSpec = std::variant<CyclicRule, OneSidedCyclic3Rule, ProbabilisticCyclicRule, TournamentRule>;

// "cyclicN" | "cyclic3+" | "probN:q" | "tournament:<file>" (also the built-in
// names tournament:g1 and tournament:g2).
RuleSpec parse_rule(const std::string& text);
std::string rule_name(const RuleSpec& rule);
int alphabet_size(const RuleSpec& rule);
bool is_probabilistic(const RuleSpec& rule);
int left_radius(const RuleSpec& rule);   // 0 for one-sided rules, else 1
int right_radius(const RuleSpec& rule);  // always 1

// One synchronous update on a finite window.  The result window shrinks by the
// rule's radii (exact light cone: every output cell had all its inputs).
// Probabilistic rules require a seed; draws are keyed by absolute lattice
// index, so any two windows agree wherever both are defined.
Configuration step(const RuleSpec& rule, const Configuration& cfg,
                   const std::optional<SeedSpec>& seed = std::nullopt);

// Value at `site` after t steps.  Requires cfg to cover the dependency cone
// [site - left_radius * t, site + right_radius * t].  Step j from row j uses
// seed.substream(j), matching run_diagram and count_state_changes.
State iterate_column(const RuleSpec& rule, const Configuration& cfg, long long t,
                     long long site, const std::optional<SeedSpec>& seed = std::nullopt);

// The two-sided 3-state rule equals the one-sided rule applied twice composed
// with a left shift; checks all 27 neighbourhoods exactly.
bool verify_c3_decomposition();

struct ParticleCensus {
  std::size_t positive = 0;  // adjacent pairs (a, a+1 mod n)
  std::size_t negative = 0;  // adjacent pairs (a, a-1 mod n)
  std::size_t neutral = 0;   // adjacent unequal pairs that are neither
  std::size_t pairs = 0;

  double positive_density() const;
  double negative_density() const;
  double neutral_density() const;
};
ParticleCensus particle_census(const Configuration& cfg);

// Number of t in 1..t_max with column value at `site` differing from time t-1.
// Coverage requirement matches iterate_column at t = t_max.
std::size_t count_state_changes(const RuleSpec& rule, const Configuration& cfg, long long site,
                                long long t_max, const std::optional<SeedSpec>& seed = std::nullopt);

// rows[0] is the initial window; each later row is one step (windows shrink).
struct SpaceTimeDiagram {
  std::vector<Configuration> rows;
};
SpaceTimeDiagram run_diagram(const RuleSpec& rule, const Configuration& cfg, std::size_t steps,
                             const std::optional<SeedSpec>& seed = std::nullopt);

// Wrap-around boundary, constant width; suitable for pictures only (the wrap
// breaks the exact light-cone semantics).  Returns steps + 1 rows.
std::vector<std::vector<State>> run_periodic(const RuleSpec& rule, std::vector<State> row,
                                             std::size_t steps,
                                             const std::optional<SeedSpec>& seed = std::nullopt);

// Binary PGM with one pixel per cell, time increasing upward (last row first
// in the raster).  `comment` lines are embedded after the magic number.
void write_pgm(std::ostream& out, const std::vector<std::vector<State>>& rows_bottom_up,
               const std::string& comment);
void write_pgm_file(const std::string& path, const std::vector<std::vector<State>>& rows_bottom_up,
                    const std::string& comment);
// Pads the shrinking windows of a diagram to the initial width (gray border).
void write_pgm(std::ostream& out, const SpaceTimeDiagram& diagram, const std::string& comment);

State palette_gray(State s);  // display gray level for states 0..4

}  // namespace cca
