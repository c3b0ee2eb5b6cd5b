// Release gate: twelve end-to-end checks, one verdict line each.
// Exit status is the number of failed gates.
#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <cca/automata.hpp>
#include <cca/core.hpp>
#include <cca/exact.hpp>
#include <cca/experiments.hpp>
#include <cca/rng.hpp>
#include <cca/tournaments.hpp>
#include <cca/walks.hpp>

using namespace cca;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Gate = std::pair<const char*, std::function<Verdict()>>;

Verdict gate_oracle_sweep() {
  const OracleSweep sweep = oracle_equivalence_sweep(10, 10);
  std::ostringstream d;
  d << "checked=" << sweep.checked << " mismatches=" << sweep.mismatches;
  return {sweep.checked > 0 && sweep.mismatches == 0, d.str()};
}

Verdict gate_decomposition() {
  const bool ok = verify_c3_decomposition();
  return {ok, "all 27 length-3 words"};
}

Verdict gate_tail_laws() {
  // Integer identities of the 3-divisible tail for walks from 0, horizons
  // n <= 12.  The flat p0-rate marginal only holds when the prefix before the
  // tail has at most one step (m >= n-1); the renewal form R(n-m) * N_m holds
  // for every m, and the prefix factor cancels in the conditional ratio.
  for (const RationalParams& params :
       {RationalParams({1, 3, 6}, 10), RationalParams({1, 1, 1}, 3)}) {
    const long long a0 = params.num[0], a2 = params.num[2];
    const std::vector<BigInt> nums = barrier_survival_numerators(params, 12);
    std::vector<ExactTailLaw> laws;
    for (std::size_t t = 0; t <= 12; ++t) laws.push_back(enumerate_tail_law(params, 0, t));
    for (std::size_t n = 1; n <= 12; ++n) {
      const ExactTailLaw& law = laws[n];
      for (std::size_t m = 1; m <= n; ++m) {
        if (law.tail_and_max0[m] * nums[m] != a2 * nums[m - 1] * law.tail_mass[m])
          return {false, "conditional identity broken"};
        if (law.tail_mass[m] != laws[n - m].tail_mass[0] * nums[m])
          return {false, "renewal factorisation broken"};
      }
      if (law.tail_mass[n] != nums[n]) return {false, "m=n marginal broken"};
      if (n >= 2 && law.tail_mass[n - 1] != a0 * nums[n - 1])
        return {false, "m=n-1 marginal broken"};
    }
  }
  // Floating-point side of the conditional identity.
  const BernoulliParams p({0.1, 0.3, 0.6});
  double worst = 0;
  for (std::size_t n = 1; n <= 12; ++n)
    for (std::size_t m = 1; m <= n; ++m) {
      const ConditionalCheck c = conditional_tail_law_check(p, n, m, CheckMode::exhaustive);
      worst = std::max(worst, c.abs_error);
    }
  std::ostringstream d;
  d << "cond exact all m, fp err " << worst << "; flat p0 marginal only at m>=n-1 (renewal form all m)";
  return {worst <= 1e-12, d.str()};
}

Verdict gate_embedded_symmetry() {
  for (const RationalParams& params : {RationalParams({1, 3, 6}, 10),
                                       RationalParams({1, 1, 1}, 3),
                                       RationalParams({2, 5, 3}, 10)}) {
    for (std::size_t n = 1; n <= 10; ++n) {
      const EmbeddedStepWeights w = embedded_first_step_weights(params, n);
      if (w.up != w.down) return {false, "exact +-3 weight mismatch"};
    }
  }
  // Chi-square on pooled embedded steps of sampled walks.
  const BernoulliParams p({0.1, 0.3, 0.6});
  const SeedSpec seed{41, 0};
  std::uint64_t up = 0, down = 0;
  for (std::uint64_t s = 0; s < 100000; ++s) {
    const Walk w = sample_walk(p, 0, 1000, seed.substream(s));
    const EmbeddedWalk e = embed(w);
    for (std::size_t i = 1; i < e.values.size(); ++i)
      (e.values[i] > e.values[i - 1] ? up : down) += 1;
  }
  const double num = static_cast<double>(up) - static_cast<double>(down);
  const double chi2 = num * num / static_cast<double>(up + down);
  std::ostringstream d;
  d << "exact n<=10; chi2=" << chi2 << " (up=" << up << " down=" << down << ")";
  return {chi2 < 10.828, d.str()};
}

Verdict gate_convergence() {
  const ConvergenceReport rpt = theorem_convergence(BernoulliParams({0.1, 0.3, 0.6}), 0,
                                                    {100, 1000, 10000}, ConvergenceMode::exact_dp);
  const double l0 = rpt.points[0].linf, l1 = rpt.points[1].linf, l2 = rpt.points[2].linf;
  std::ostringstream d;
  d << "linf " << l0 << " > " << l1 << " > " << l2;
  return {l1 < l0 && l2 < l1 && l2 <= 0.05, d.str()};
}

Verdict gate_published_row() {
  EstimateOptions opts;
  opts.times = {150};
  opts.samples = 100000;
  opts.seed = SeedSpec{1, 0}.substream(0);
  const EstimateReport rpt =
      estimate_column_law(parse_rule("cyclic3"), BernoulliParams({0.1, 0.3, 0.6}), opts);
  const double pub[3] = {0.572, 0.091, 0.336};
  double worst = 0;
  for (int s = 0; s < 3; ++s) worst = std::max(worst, std::abs(rpt.estimate(0, s) - pub[s]));
  std::ostringstream d;
  d << "max |est-published| = " << worst;
  return {worst <= 0.01, d.str()};
}

Verdict gate_t0_rows() {
  double worst = 0;
  const auto& tables = baseline_tables();
  for (std::size_t tix = 0; tix < tables.size(); ++tix) {
    const BaselineTable& table = tables[tix];
    EstimateOptions opts;
    opts.times = {0};
    opts.samples = 100000;
    opts.seed = SeedSpec{1, 0}.substream(tix);
    const EstimateReport rpt =
        estimate_column_law(rule_for_baseline(table), BernoulliParams(table.params), opts);
    for (std::size_t s = 0; s < table.params.size(); ++s) {
      const int si = static_cast<int>(s);
      const double dev = std::abs(rpt.estimate(0, si) - table.params[s]);
      const double hw = rpt.half_width(0, si);
      if (dev > hw) return {false, "initial law outside CI (" + table.name + ")"};
      worst = std::max(worst, dev / hw);
    }
  }
  std::ostringstream d;
  d << "5 tables, worst |dev|/halfwidth = " << worst;
  return {true, d.str()};
}

Verdict gate_km_bounds() {
  const std::vector<std::vector<double>> grid = {{1.0 / 3, 1.0 / 3, 1.0 / 3},
                                                 {0.1, 0.3, 0.6},
                                                 {0.6, 0.3, 0.1},
                                                 {0.2, 0.5, 0.3},
                                                 {0.05, 0.475, 0.475}};
  double gmax = 0, worst_ratio = 0;
  for (const auto& probs : grid) {
    const BarrierDp dp(BernoulliParams(probs), 10000);
    double lo = 0, hi = 0;
    for (std::size_t m = 1; m <= 10000; ++m) {
      const double km = dp.k_m(m);
      if (km < 1.0 - 1e-12) return {false, "K_m < 1"};
      const double g = static_cast<double>(m) * (km - 1.0);
      if (m >= 100) gmax = std::max(gmax, g);
      if (m >= 100 && m <= 1000) lo = std::max(lo, g);
      if (m >= 1000) hi = std::max(hi, g);
    }
    worst_ratio = std::max(worst_ratio, hi / lo);
  }
  std::ostringstream d;
  d << "K_m>=1; max m(K_m-1)=" << gmax << " on [1e2,1e4], late/early ratio " << worst_ratio;
  return {gmax <= 1.0 && worst_ratio <= 1.25, d.str()};
}

Verdict gate_tail_decay() {
  const BernoulliParams p({0.1, 0.3, 0.6});
  const std::size_t ns[3] = {100, 1000, 10000};
  double frac[3], cmax = 0;
  for (int i = 0; i < 3; ++i) {
    const TailStatistics stats =
        tail_statistics(p, 0, ns[i], 100000, SeedSpec{9, 0}.substream(static_cast<std::uint64_t>(i)));
    frac[i] = stats.frac_tail_le_root4();
    cmax = std::max(cmax, frac[i] * std::pow(static_cast<double>(ns[i]), 0.25));
  }
  std::ostringstream d;
  d << "P(tail<=n^1/4): " << frac[0] << " > " << frac[1] << " > " << frac[2] << ", c=" << cmax;
  return {frac[1] < frac[0] && frac[2] < frac[1] && cmax <= 10.0, d.str()};
}

Verdict gate_path_counts() {
  for (std::size_t len = 0; len <= 18; ++len) {
    BigInt bridges = 0, dyck = 0, meanders = 0;
    for (std::uint64_t w = 0; w < (1ULL << len); ++w) {
      long long v = 0, lo = 0;
      for (std::size_t t = 0; t < len; ++t) {
        v += (w >> t) & 1 ? 1 : -1;
        lo = std::min(lo, v);
      }
      if (v == 0) ++bridges;
      if (v == 0 && lo >= 0) ++dyck;
      if (lo >= 0) ++meanders;
    }
    const PathCounts pc = path_counts(len);
    if (pc.bridges != bridges || pc.dyck != dyck || pc.meanders != meanders)
      return {false, "brute-force mismatch at len " + std::to_string(len)};
  }
  for (std::size_t n = 0; n <= 25; ++n)
    if (path_counts(2 * n).meanders != binomial(2 * n, n))
      return {false, "meanders(2n) != C(2n,n)"};
  return {true, "brute force n<=18; meanders(2n)=C(2n,n) n<=25"};
}

Verdict gate_tournaments() {
  const std::uint64_t expected[4] = {1, 4, 11, 26};
  for (int n = 3; n <= 6; ++n) {
    const MppCensus census = enumerate_mpp(n);
    const std::uint64_t e = eulerian_odd_subsets(n);
    if (e != expected[n - 3]) return {false, "odd-subset count mismatch"};
    if (census.family2 != e || census.family3 != e)
      return {false, "census family sizes off at n=" + std::to_string(n)};
  }
  std::uint64_t generated = 0;
  for (int n = 3; n <= 8; ++n) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      const int size = std::popcount(mask);
      if (size < 3 || size % 2 == 0) continue;
      std::vector<int> cuts;
      for (int v = 0; v < n; ++v)
        if (mask & (1u << v)) cuts.push_back(v);
      if (!is_max_path_preserving(generate_conjectural(n, cuts)))
        return {false, "generated tournament not max-path-preserving"};
      ++generated;
    }
  }
  std::ostringstream d;
  d << "census (1,4,11,26); " << generated << " generated members all max-path-preserving";
  return {true, d.str()};
}

Verdict gate_reproducibility() {
  const BernoulliParams p3({0.1, 0.3, 0.6});
  std::vector<std::string> reports[3];
  const int workers[3] = {1, 4, 16};
  for (int i = 0; i < 3; ++i) {
    const int w = workers[i];
    for (const char* rule : {"cyclic3", "cyclic3+", "prob3:0.5"}) {
      EstimateOptions opts;
      opts.times = {0, 20, 50};
      opts.samples = 20000;
      opts.seed = SeedSpec{12, 0};
      opts.workers = w;
      reports[i].push_back(estimate_column_law(parse_rule(rule), p3, opts).to_json().dump());
    }
    reports[i].push_back(theorem_convergence(p3, 0, {100, 300}, ConvergenceMode::walk_montecarlo,
                                             50000, SeedSpec{12, 1}, w)
                             .to_json()
                             .dump());
    reports[i].push_back(
        tail_statistics(p3, 0, 1000, 20000, SeedSpec{12, 2}, -1, w).to_json().dump());
  }
  if (reports[0] != reports[1] || reports[0] != reports[2])
    return {false, "reports differ across worker counts"};
  std::ostringstream d;
  d << reports[0].size() << " reports byte-identical across workers {1,4,16}";
  return {true, d.str()};
}

}  // namespace

int main() {
  const std::vector<Gate> gates = {
      {"walk-max oracle vs column iteration", gate_oracle_sweep},
      {"three-state decomposition identity", gate_decomposition},
      {"3-tail conditional/marginal laws", gate_tail_laws},
      {"embedded walk +-3 symmetry", gate_embedded_symmetry},
      {"max-law convergence (exact DP)", gate_convergence},
      {"published cyclic3 row at t=150", gate_published_row},
      {"published t=0 rows within CI", gate_t0_rows},
      {"K_m bounds and m(K_m-1) trend", gate_km_bounds},
      {"small-tail decay ~ n^(-1/4)", gate_tail_decay},
      {"lattice path counts", gate_path_counts},
      {"tournament census and generator", gate_tournaments},
      {"worker-count reproducibility", gate_reproducibility},
  };

  int failures = 0;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = gates[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass) ++failures;
    std::printf("[%2zu/12] %s  %-38s %s  [%.2fs]\n", i + 1, v.pass ? "PASS" : "FAIL",
                gates[i].first, v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/12 gates passed\n", 12 - failures);
  return failures;
}
