#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cca/automata.hpp"
#include "cca/exact.hpp"

namespace cca {

enum class ColumnEngine { automatic, ca, walk };

struct EstimateOptions {
  std::vector<long long> times;
  std::uint64_t samples = 0;
  SeedSpec seed;
  int workers = 0;  // 0: library default (all available threads)
  ColumnEngine engine = ColumnEngine::automatic;
};

// Monte Carlo column-law estimate: per observation time, tally of the state
// seen at the column site.  Counts are integers and depend only on the seed,
// never on the worker count.
struct EstimateReport {
  std::string rule;
  std::vector<double> params;
  std::uint64_t samples = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
  std::string engine;
  std::vector<long long> times;
  std::vector<std::vector<std::uint64_t>> counts;  // [time][state]

  double estimate(std::size_t time_index, int s) const;
  // Half-width of the 95% normal-approximation confidence interval.
  double half_width(std::size_t time_index, int s) const;
  nlohmann::json to_json() const;
};

EstimateReport estimate_column_law(const RuleSpec& rule, const BernoulliParams& params,
                                   const EstimateOptions& opts);
// Plain serial implementation kept as the reference for the parallel kernel.
EstimateReport estimate_column_law_reference(const RuleSpec& rule, const BernoulliParams& params,
                                             const EstimateOptions& opts);

enum class ConvergenceMode { exact_dp, walk_montecarlo };

struct ConvergencePoint {
  std::size_t n = 0;
  std::array<double, 3> law{};
  double linf = 0;  // distance to the limit law
};

struct ConvergenceReport {
  std::vector<double> params;
  long long start = 0;
  std::array<double, 3> target{};  // (p_2, p_0, p_1) for residues 0, 1, 2
  std::string mode;
  std::uint64_t samples = 0;
  std::vector<ConvergencePoint> points;

  nlohmann::json to_json() const;
};

// Convergence of the max-law toward its limit along a grid of horizon values,
// either by exact dynamic programming or by walk Monte Carlo.
ConvergenceReport theorem_convergence(const BernoulliParams& params, long long start,
                                      const std::vector<std::size_t>& n_grid, ConvergenceMode mode,
                                      std::uint64_t samples = 0, const SeedSpec& seed = {},
                                      int workers = 0);

// p_0^2 p_1 p_2 / 4: half of one quarter of the doubled pattern weight, a safe
// linear-rate floor for embedded-walk growth.
double default_beta(const BernoulliParams& params);

struct TailStatistics {
  std::size_t n = 0;
  std::uint64_t samples = 0;
  long long start = 0;
  double beta = 0;
  std::map<std::size_t, std::uint64_t> tail_hist;  // 3-tail length -> count
  std::uint64_t tail_none = 0;
  std::map<std::size_t, std::uint64_t> embedded_hist;  // embedded vertex count -> count
  std::uint64_t tail_le_root4 = 0;                     // 3-tail <= floor(n^(1/4))
  std::uint64_t embedded_below_beta_n = 0;             // embedded vertices < beta * n

  double frac_tail_le_root4() const;
  double frac_embedded_below() const;
  nlohmann::json to_json() const;
};

TailStatistics tail_statistics(const BernoulliParams& params, long long start, std::size_t n,
                               std::uint64_t samples, const SeedSpec& seed = {}, double beta = -1,
                               int workers = 0);

// One published reference table: a rule, its parameters, observation times and
// the printed column-law values.
struct BaselineTable {
  std::string name;
  std::string rule_text;
  std::vector<double> params;
  std::vector<long long> times;
  std::vector<std::vector<double>> published;  // [time][state]
};
const std::vector<BaselineTable>& baseline_tables();
RuleSpec rule_for_baseline(const BaselineTable& table);

// Re-estimates every baseline table and writes per-table CSVs plus a JSON
// summary of the largest deviations into out_dir.
void reproduce_tables(const std::string& out_dir, std::uint64_t samples = 100000,
                      const SeedSpec& seed = SeedSpec{1, 0}, int workers = 0);

struct FigureSpec {
  std::string file;
  std::string rule_text;
  std::vector<double> params;
  std::size_t width = 0;
  std::size_t steps = 0;
  std::uint64_t salt = 0;  // per-figure substream salt
};
const std::vector<FigureSpec>& figure_specs();

inline constexpr std::uint64_t kDefaultFigureSeed = 2;

// Renders every figure spec as a PGM into out_dir (periodic boundary).
void render_figures(const std::string& out_dir, const SeedSpec& seed = SeedSpec{kDefaultFigureSeed, 0});

}  // namespace cca
