#include "cca/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cca/walks.hpp"

namespace cca {

namespace {

int resolve_workers(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

inline int mod3i(long long v) noexcept {
  int r = static_cast<int>(v % 3);
  return r < 0 ? r + 3 : r;
}

void validate_times(const std::vector<long long>& times) {
  if (times.empty()) throw std::invalid_argument("need at least one observation time");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0) throw std::invalid_argument("observation times must be nonnegative");
    if (i > 0 && times[i] <= times[i - 1])
      throw std::invalid_argument("observation times must be strictly increasing");
  }
}

// One Monte Carlo observation: the column state at each requested time.
// All randomness comes from substreams of sample_seed, so the result is a
// pure function of (rule, params, sample_seed, times).
void sample_column_states(const RuleSpec& rule, const BernoulliParams& params,
                          const SeedSpec& sample_seed, const std::vector<long long>& times,
                          bool use_walk, std::vector<State>& out_states, std::vector<State>& buf_a,
                          std::vector<State>& buf_b) {
  const long long T = times.back();
  const std::uint64_t cfg_key = stream_key(sample_seed.substream(0));
  out_states.resize(times.size());
  if (use_walk) {
    // one-sided 3-state rule: column equals the running walk max mod 3
    long long v = params.sample(counter_unit(cfg_key, 0));
    long long best = v;
    int prev = static_cast<int>(v);
    std::size_t ti = 0;
    if (times[0] == 0) out_states[ti++] = static_cast<State>(mod3i(best));
    for (long long i = 1; i <= T; ++i) {
      const int next = params.sample(counter_unit(cfg_key, static_cast<std::uint64_t>(i)));
      v += residue_step(prev, next);
      prev = next;
      if (v > best) best = v;
      if (ti < times.size() && times[ti] == i) out_states[ti++] = static_cast<State>(mod3i(best));
    }
    return;
  }
  const int L = left_radius(rule);
  const std::size_t len = static_cast<std::size_t>((L + 1) * T) + 1;
  buf_a.resize(len);
  buf_b.resize(len);
  for (std::size_t i = 0; i < len; ++i)
    buf_a[i] = static_cast<State>(params.sample(counter_unit(cfg_key, i)));
  std::size_t ti = 0;
  if (times[0] == 0) out_states[ti++] = buf_a[static_cast<std::size_t>(L * T)];

  const auto* cyclic = std::get_if<CyclicRule>(&rule);
  const auto* prob = std::get_if<ProbabilisticCyclicRule>(&rule);
  const auto* tour = std::get_if<TournamentRule>(&rule);
  const bool one_sided_cyclic = std::holds_alternative<OneSidedCyclic3Rule>(rule);
  const SeedSpec noise_root = sample_seed.substream(1);

  State* cur = buf_a.data();
  State* nxt = buf_b.data();
  std::size_t cur_len = len;
  for (long long t = 1; t <= T && ti < times.size(); ++t) {
    if (cyclic) {
      const int n = cyclic->states;
      for (std::size_t i = 0; i + 2 < cur_len; ++i) {
        const State c = cur[i + 1];
        const State up = static_cast<State>((c + 1) % n);
        nxt[i] = (cur[i] == up || cur[i + 2] == up) ? up : c;
      }
    } else if (one_sided_cyclic) {
      for (std::size_t i = 0; i + 1 < cur_len; ++i) {
        const State c = cur[i];
        const State up = static_cast<State>((c + 1) % 3);
        nxt[i] = (cur[i + 1] == up) ? up : c;
      }
    } else if (prob) {
      const int n = prob->states;
      const double q = prob->invasion_rate;
      const std::uint64_t noise_key = stream_key(noise_root.substream(static_cast<std::uint64_t>(t - 1)));
      // lattice site of output cell i this row: -T + t + i (two-sided)
      const long long out_lo = -T + t;
      for (std::size_t i = 0; i + 2 < cur_len; ++i) {
        const State c = cur[i + 1];
        const State up = static_cast<State>((c + 1) % n);
        State v = c;
        if (cur[i] == up || cur[i + 2] == up) {
          const std::uint64_t counter =
              static_cast<std::uint64_t>(out_lo + static_cast<long long>(i));
          if (counter_unit(noise_key, counter) < q) v = up;
        }
        nxt[i] = v;
      }
    } else {
      const Tournament& tt = tour->tournament;
      if (tour->sided == Sided::two_sided) {
        for (std::size_t i = 0; i + 2 < cur_len; ++i) {
          const State l = cur[i], c = cur[i + 1], r = cur[i + 2];
          const bool lp = tt.predates(l, c);
          const bool rp = tt.predates(r, c);
          nxt[i] = (lp && rp) ? (tt.predates(l, r) ? l : r) : (lp ? l : (rp ? r : c));
        }
      } else {
        for (std::size_t i = 0; i + 1 < cur_len; ++i)
          nxt[i] = tt.predates(cur[i + 1], cur[i]) ? cur[i + 1] : cur[i];
      }
    }
    cur_len -= static_cast<std::size_t>(L + 1);
    std::swap(cur, nxt);
    if (times[ti] == t) out_states[ti++] = cur[static_cast<std::size_t>(L * (T - t))];
  }
}

std::string engine_string(const RuleSpec& rule, ColumnEngine engine) {
  const bool one_sided3 = std::holds_alternative<OneSidedCyclic3Rule>(rule);
  switch (engine) {
    case ColumnEngine::automatic:
      return one_sided3 ? "walk" : "ca";
    case ColumnEngine::walk:
      if (!one_sided3)
        throw std::invalid_argument("walk engine only models the one-sided 3-state rule");
      return "walk";
    case ColumnEngine::ca:
      return "ca";
  }
  throw std::logic_error("unreachable");
}

EstimateReport estimate_impl(const RuleSpec& rule, const BernoulliParams& params,
                             const EstimateOptions& opts, int threads) {
  validate_times(opts.times);
  if (opts.samples == 0) throw std::invalid_argument("need a positive sample count");
  if (params.states() != alphabet_size(rule))
    throw std::invalid_argument("parameter count does not match rule alphabet");
  EstimateReport report;
  report.rule = rule_name(rule);
  report.params = params.probs();
  report.samples = opts.samples;
  report.master_seed = opts.seed.master_seed;
  report.stream_index = opts.seed.stream_index;
  report.engine = engine_string(rule, opts.engine);
  report.times = opts.times;
  const std::size_t nt = opts.times.size();
  const std::size_t ns = static_cast<std::size_t>(params.states());
  report.counts.assign(nt, std::vector<std::uint64_t>(ns, 0));
  const bool use_walk = report.engine == "walk";

#pragma omp parallel num_threads(threads) if (threads > 1)
  {
    std::vector<std::uint64_t> local(nt * ns, 0);
    std::vector<State> states, buf_a, buf_b;
#pragma omp for schedule(static)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(opts.samples); ++s) {
      sample_column_states(rule, params, opts.seed.substream(static_cast<std::uint64_t>(s)),
                           opts.times, use_walk, states, buf_a, buf_b);
      for (std::size_t ti = 0; ti < nt; ++ti) ++local[ti * ns + states[ti]];
    }
#pragma omp critical
    for (std::size_t ti = 0; ti < nt; ++ti)
      for (std::size_t st = 0; st < ns; ++st) report.counts[ti][st] += local[ti * ns + st];
  }
  return report;
}

}  // namespace

double EstimateReport::estimate(std::size_t time_index, int s) const {
  return static_cast<double>(counts.at(time_index).at(static_cast<std::size_t>(s))) /
         static_cast<double>(samples);
}

double EstimateReport::half_width(std::size_t time_index, int s) const {
  const double p = estimate(time_index, s);
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

nlohmann::json EstimateReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["rule"] = rule;
  j["params"] = params;
  j["samples"] = samples;
  j["seed"] = {{"master_seed", master_seed}, {"stream_index", stream_index}};
  j["engine"] = engine;
  j["times"] = times;
  j["counts"] = counts;
  nlohmann::json est = nlohmann::json::array();
  nlohmann::json hw = nlohmann::json::array();
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    nlohmann::json row = nlohmann::json::array();
    nlohmann::json hrow = nlohmann::json::array();
    for (std::size_t s = 0; s < counts[ti].size(); ++s) {
      row.push_back(estimate(ti, static_cast<int>(s)));
      hrow.push_back(half_width(ti, static_cast<int>(s)));
    }
    est.push_back(std::move(row));
    hw.push_back(std::move(hrow));
  }
  j["estimates"] = est;
  j["half_widths"] = hw;
  return j;
}

EstimateReport estimate_column_law(const RuleSpec& rule, const BernoulliParams& params,
                                   const EstimateOptions& opts) {
  return estimate_impl(rule, params, opts, resolve_workers(opts.workers));
}

EstimateReport estimate_column_law_reference(const RuleSpec& rule, const BernoulliParams& params,
                                             const EstimateOptions& opts) {
  return estimate_impl(rule, params, opts, 1);
}

nlohmann::json ConvergenceReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["params"] = params;
  j["start"] = start;
  j["target"] = target;
  j["mode"] = mode;
  j["samples"] = samples;
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : points)
    pts.push_back({{"n", p.n}, {"law", p.law}, {"linf", p.linf}});
  j["points"] = pts;
  return j;
}

ConvergenceReport theorem_convergence(const BernoulliParams& params, long long start,
                                      const std::vector<std::size_t>& n_grid, ConvergenceMode mode,
                                      std::uint64_t samples, const SeedSpec& seed, int workers) {
  if (params.states() != 3) throw std::invalid_argument("convergence study needs 3-state parameters");
  if (n_grid.empty()) throw std::invalid_argument("need at least one horizon");
  ConvergenceReport report;
  report.params = params.probs();
  report.start = start;
  report.target = {params[2], params[0], params[1]};
  report.mode = mode == ConvergenceMode::exact_dp ? "exact_dp" : "walk_montecarlo";
  report.samples = mode == ConvergenceMode::exact_dp ? 0 : samples;
  const int threads = resolve_workers(workers);
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const std::size_t n = n_grid[gi];
    ConvergencePoint point;
    point.n = n;
    if (mode == ConvergenceMode::exact_dp) {
      point.law = exact_max_law(params, start, n, threads);
    } else {
      if (samples == 0) throw std::invalid_argument("Monte Carlo mode needs a sample count");
      std::uint64_t tallies[3] = {0, 0, 0};
      const SeedSpec grid_seed = seed.substream(gi);
#pragma omp parallel num_threads(threads) if (threads > 1)
      {
        std::uint64_t local[3] = {0, 0, 0};
#pragma omp for schedule(static)
        for (std::int64_t s = 0; s < static_cast<std::int64_t>(samples); ++s) {
          const std::uint64_t key = stream_key(grid_seed.substream(static_cast<std::uint64_t>(s)));
          long long v = start;
          long long best = v;
          int prev = mod3i(start);
          for (std::size_t t = 0; t < n; ++t) {
            const int next = params.sample(counter_unit(key, t));
            v += residue_step(prev, next);
            prev = next;
            if (v > best) best = v;
          }
          ++local[mod3i(best)];
        }
#pragma omp critical
        for (int r = 0; r < 3; ++r) tallies[r] += local[r];
      }
      for (int r = 0; r < 3; ++r)
        point.law[static_cast<std::size_t>(r)] =
            static_cast<double>(tallies[r]) / static_cast<double>(samples);
    }
    double linf = 0;
    for (int r = 0; r < 3; ++r)
      linf = std::max(linf, std::abs(point.law[static_cast<std::size_t>(r)] -
                                     report.target[static_cast<std::size_t>(r)]));
    point.linf = linf;
    report.points.push_back(point);
  }
  return report;
}

double default_beta(const BernoulliParams& params) {
  if (params.states() != 3) throw std::invalid_argument("rate floor needs 3-state parameters");
  return params[0] * params[0] * params[1] * params[2] / 4.0;
}

double TailStatistics::frac_tail_le_root4() const {
  return static_cast<double>(tail_le_root4) / static_cast<double>(samples);
}

double TailStatistics::frac_embedded_below() const {
  return static_cast<double>(embedded_below_beta_n) / static_cast<double>(samples);
}

nlohmann::json TailStatistics::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["n"] = n;
  j["samples"] = samples;
  j["start"] = start;
  j["beta"] = beta;
  nlohmann::json th = nlohmann::json::object();
  for (const auto& [m, c] : tail_hist) th[std::to_string(m)] = c;
  j["tail_hist"] = th;
  j["tail_none"] = tail_none;
  nlohmann::json eh = nlohmann::json::object();
  for (const auto& [m, c] : embedded_hist) eh[std::to_string(m)] = c;
  j["embedded_hist"] = eh;
  j["tail_le_root4"] = tail_le_root4;
  j["embedded_below_beta_n"] = embedded_below_beta_n;
  return j;
}

TailStatistics tail_statistics(const BernoulliParams& params, long long start, std::size_t n,
                               std::uint64_t samples, const SeedSpec& seed, double beta,
                               int workers) {
  if (params.states() != 3) throw std::invalid_argument("tail study needs 3-state parameters");
  if (samples == 0) throw std::invalid_argument("need a positive sample count");
  TailStatistics stats;
  stats.n = n;
  stats.samples = samples;
  stats.start = start;
  stats.beta = beta < 0 ? default_beta(params) : beta;
  const std::size_t root4 = static_cast<std::size_t>(std::pow(static_cast<double>(n), 0.25) + 1e-9);
  const double below_cut = stats.beta * static_cast<double>(n);
  const int threads = resolve_workers(workers);

#pragma omp parallel num_threads(threads) if (threads > 1)
  {
    std::map<std::size_t, std::uint64_t> tail_local, emb_local;
    std::uint64_t none_local = 0, le_local = 0, below_local = 0;
#pragma omp for schedule(static)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(samples); ++s) {
      const std::uint64_t key = stream_key(seed.substream(static_cast<std::uint64_t>(s)));
      long long v = start;
      long long best = v;
      int prev = mod3i(start);
      long long lastrec3 = (v % 3 == 0) ? 0 : -1;
      std::uint64_t embedded = 0;
      bool have_mult = false;
      long long lastmult = 0;
      if (v % 3 == 0) {
        embedded = 1;
        have_mult = true;
        lastmult = v;
      }
      for (std::size_t t = 1; t <= n; ++t) {
        const int next = params.sample(counter_unit(key, t - 1));
        v += residue_step(prev, next);
        prev = next;
        if (v >= best) {
          best = v;
          if (v % 3 == 0) lastrec3 = static_cast<long long>(t);
        }
        if (v % 3 == 0 && (!have_mult || v != lastmult)) {
          ++embedded;
          have_mult = true;
          lastmult = v;
        }
      }
      if (lastrec3 < 0) {
        ++none_local;
      } else {
        const std::size_t m = n - static_cast<std::size_t>(lastrec3);
        ++tail_local[m];
        if (m <= root4) ++le_local;
      }
      ++emb_local[static_cast<std::size_t>(embedded)];
      if (static_cast<double>(embedded) < below_cut) ++below_local;
    }
#pragma omp critical
    {
      for (const auto& [m, c] : tail_local) stats.tail_hist[m] += c;
      for (const auto& [m, c] : emb_local) stats.embedded_hist[m] += c;
      stats.tail_none += none_local;
      stats.tail_le_root4 += le_local;
      stats.embedded_below_beta_n += below_local;
    }
  }
  return stats;
}

const std::vector<BaselineTable>& baseline_tables() {
  static const std::vector<BaselineTable> tables = {
      {"cyclic3",
       "cyclic3",
       {0.1, 0.3, 0.6},
       {0, 50, 100, 150},
       {{0.100, 0.301, 0.599},
        {0.550, 0.087, 0.362},
        {0.565, 0.090, 0.345},
        {0.572, 0.091, 0.336}}},
      {"invasion_half",
       "prob3:0.5",
       {0.1, 0.3, 0.6},
       {0, 50, 100, 150},
       {{0.100, 0.300, 0.600},
        {0.760, 0.087, 0.153},
        {0.780, 0.147, 0.074},
        {0.742, 0.198, 0.060}}},
      {"cyclic4",
       "cyclic4",
       {0.05, 0.15, 0.3, 0.5},
       {0, 50, 100, 150},
       {{0.050, 0.149, 0.300, 0.500},
        {0.065, 0.578, 0.018, 0.339},
        {0.122, 0.615, 0.019, 0.354},
        {0.005, 0.615, 0.123, 0.368}}},
      {"g1",
       "tournament:g1",
       {0.05, 0.15, 0.3, 0.5},
       {0, 50, 100, 150},
       {{0.051, 0.149, 0.302, 0.498},
        {0.369, 0.009, 0.040, 0.580},
        {0.407, 0.009, 0.040, 0.544},
        {0.424, 0.010, 0.041, 0.525}}},
      {"g2",
       "tournament:g2",
       {0.025, 0.075, 0.15, 0.3, 0.45},
       {0, 50, 100, 150},
       {{0.025, 0.076, 0.152, 0.298, 0.450},
        {0.169, 0.354, 0.026, 0.061, 0.390},
        {0.165, 0.376, 0.028, 0.061, 0.370},
        {0.165, 0.385, 0.027, 0.061, 0.362}}}};
  return tables;
}

RuleSpec rule_for_baseline(const BaselineTable& table) { return parse_rule(table.rule_text); }

void reproduce_tables(const std::string& out_dir, std::uint64_t samples, const SeedSpec& seed,
                      int workers) {
  std::filesystem::create_directories(out_dir);
  nlohmann::json summary;
  summary["schema_version"] = 1;
  summary["samples"] = samples;
  summary["seed"] = {{"master_seed", seed.master_seed}, {"stream_index", seed.stream_index}};
  nlohmann::json per_table = nlohmann::json::array();
  const auto& tables = baseline_tables();
  for (std::size_t tix = 0; tix < tables.size(); ++tix) {
    const BaselineTable& table = tables[tix];
    const RuleSpec rule = rule_for_baseline(table);
    EstimateOptions opts;
    opts.times = table.times;
    opts.samples = samples;
    opts.seed = seed.substream(tix);
    opts.workers = workers;
    const EstimateReport report = estimate_column_law(rule, BernoulliParams(table.params), opts);
    std::ofstream csv(std::filesystem::path(out_dir) / ("table_" + table.name + ".csv"));
    csv << "time,state,estimate,half_width,published,abs_diff\n";
    double max_diff = 0;
    for (std::size_t ti = 0; ti < table.times.size(); ++ti) {
      for (std::size_t s = 0; s < table.published[ti].size(); ++s) {
        const double est = report.estimate(ti, static_cast<int>(s));
        const double pub = table.published[ti][s];
        const double diff = std::abs(est - pub);
        max_diff = std::max(max_diff, diff);
        csv << table.times[ti] << ',' << s << ',' << est << ',' << report.half_width(ti, static_cast<int>(s))
            << ',' << pub << ',' << diff << "\n";
      }
    }
    per_table.push_back({{"name", table.name},
                         {"rule", table.rule_text},
                         {"max_abs_diff", max_diff},
                         {"file", "table_" + table.name + ".csv"}});
  }
  summary["tables"] = per_table;
  std::ofstream js(std::filesystem::path(out_dir) / "summary.json");
  js << summary.dump(2) << "\n";
}

const std::vector<FigureSpec>& figure_specs() {
  static const std::vector<FigureSpec> specs = {
      {"uniform3.pgm", "cyclic3", {1.0 / 3, 1.0 / 3, 1.0 / 3}, 1200, 800, 1},
      {"uniform4.pgm", "cyclic4", {0.25, 0.25, 0.25, 0.25}, 1200, 800, 2},
      {"uniform5.pgm", "cyclic5", {0.2, 0.2, 0.2, 0.2, 0.2}, 1200, 800, 3},
      {"nonuniform3.pgm", "cyclic3", {0.1, 0.3, 0.6}, 4000, 1000, 4},
      {"invasion_half.pgm", "prob3:0.5", {0.1, 0.3, 0.6}, 1200, 800, 5},
      {"g1.pgm", "tournament:g1", {0.05, 0.15, 0.3, 0.5}, 1200, 800, 6},
      {"g2.pgm", "tournament:g2", {0.025, 0.075, 0.15, 0.3, 0.45}, 1200, 800, 7}};
  return specs;
}

void render_figures(const std::string& out_dir, const SeedSpec& seed) {
  std::filesystem::create_directories(out_dir);
  for (const FigureSpec& fig : figure_specs()) {
    const RuleSpec rule = parse_rule(fig.rule_text);
    const BernoulliParams params(fig.params);
    const SeedSpec fig_seed = seed.substream(fig.salt);
    const Configuration init =
        sample_configuration(params, fig.width, 0, fig_seed.substream(0));
    std::optional<SeedSpec> noise;
    if (is_probabilistic(rule)) noise = fig_seed.substream(1);
    const auto rows = run_periodic(rule, init.cells, fig.steps, noise);
    std::ostringstream comment;
    comment << "rule=" << fig.rule_text << " width=" << fig.width << " steps=" << fig.steps
            << " seed=" << seed.master_seed << "/" << seed.stream_index
            << "\nboundary=periodic (approximate; wrap breaks the exact light cone)";
    write_pgm_file((std::filesystem::path(out_dir) / fig.file).string(), rows, comment.str());
  }
}

}  // namespace cca
