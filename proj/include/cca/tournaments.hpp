#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cca/walks.hpp"

namespace cca {

// Complete directed graph on n states: for every pair exactly one of
// predates(i, j), predates(j, i) holds.
class Tournament {
 public:
  // beats is row-major n*n with beats[i*n+j] == 1 iff i predates j.
  Tournament(int n, std::vector<std::uint8_t> beats);

  static Tournament from_edges(int n, const std::vector<std::pair<int, int>>& predates_edges);
  // Pairs (i, j) with i < j in lexicographic order; bit k set means i predates j.
  static Tournament from_bitmask(int n, std::uint32_t mask);

  static Tournament standard_cycle3();  // j predates j-1 (mod 3)
  static Tournament reversed_cycle3();  // j predates j+1 (mod 3)
  static Tournament k_predator(int k);        // 2k+1 states; j predates j-1..j-k (mod 2k+1)
  static Tournament g1();                     // 4-state example
  static Tournament g2();                     // 5-state two-predator example

  int size() const noexcept { return n_; }
  bool predates(int i, int j) const;
  std::uint32_t bitmask() const;              // inverse of from_bitmask; requires n <= 8
  Tournament reversed() const;                // all edges flipped
  Tournament relabeled(std::span<const int> sigma) const;  // sigma(i) predates sigma(j) iff i predates j

  bool operator==(const Tournament&) const = default;

 private:
  int n_;
  std::vector<std::uint8_t> beats_;
};

// "i -> j" edge list with a "states n" header; '#' comments allowed.
Tournament load_tournament(std::istream& in);
Tournament load_tournament_file(const std::string& path);
void save_tournament(std::ostream& out, const Tournament& t);

// Whether b lies strictly inside the cyclic interval from a to c (walking
// upward from a, wrapping mod n).  Requires a, b, c pairwise distinct.
bool cyclic_before(int n, int a, int b, int c);

bool is_transitive(const Tournament& t);
// Whenever a -> c and b -> c with b cyclically between a and c, also b -> a.
bool is_max_path_preserving(const Tournament& t);
// All standard-cycle edges j -> j-1 (mod n) present.
bool has_standard_cycle(const Tournament& t);

enum class FamilyLabel { total_order, family2, family3, not_mpp };
FamilyLabel classify(const Tournament& t);

struct MppCensus {
  int n = 0;
  std::uint64_t total_orders = 0;
  std::uint64_t family2 = 0;
  std::uint64_t family3 = 0;
  std::uint64_t not_mpp = 0;
  std::vector<std::uint32_t> members;          // all max-path-preserving bitmasks, ascending
  std::vector<std::uint32_t> family2_members;  // subset of members
  std::vector<std::uint32_t> family3_members;
};

// Classifies every labelled tournament on n states.  Requires 3 <= n <= 7
// (the full scan is 2^C(n,2) tournaments).
MppCensus enumerate_mpp(int n);

// sum over k >= 1 of C(n, 2k+1): predicted size of each non-transitive family.
std::uint64_t eulerian_odd_subsets(int n);

// Builds the conjectured family-2 member for an odd-sized set of cut states:
// edges follow the standard cycle except that j predates i exactly when,
// scanning the cuts c_0 < ... < c_{2k} cyclically, j lies in the half-open
// cyclic interval ]c_i, c_{i+1}] and i lies in ]c_{i-k}, j[.
Tournament generate_conjectural(int n, std::vector<int> cut_vertices);

// Walk lift driven by an arbitrary max-path-preserving tournament: equal
// symbols step 0; if the next symbol predates the current one the walk rises
// to the nearest value congruent to the next symbol (mod n), otherwise it
// falls to the nearest such value.
Walk generalized_walk(const Tournament& t, const Configuration& cfg);

struct GeneralizedOracleReport {
  std::uint64_t checked = 0;
  std::uint64_t agreements = 0;
  std::uint64_t disagreements = 0;
};

// Tests (max generalized walk) mod n against one-sided tournament-CA column
// iteration over all words of length <= max_len + 1.
GeneralizedOracleReport check_generalized_oracle(const Tournament& t, int max_len, int max_steps);

}  // namespace cca
