// Timing harness comparing the OpenMP kernels against their serial reference
// implementations.  On a single-core host the interesting number is the
// overhead column; on multi-core hosts the speedup column.
#include <omp.h>

#include <chrono>
#include <cstdio>

#include "cca/experiments.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& f) {
  const auto t0 = Clock::now();
  f();
  const auto t1 = Clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s serial %9.1f ms   parallel %9.1f ms   speedup %.2fx\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", omp_get_max_threads());
  const cca::BernoulliParams params({0.1, 0.3, 0.6});

  {
    const cca::RuleSpec rule = cca::CyclicRule{3};
    cca::EstimateOptions opts;
    opts.times = {0, 50, 100, 150};
    opts.samples = 20000;
    opts.seed = cca::SeedSpec{7, 0};
    cca::EstimateReport serial_report, parallel_report;
    const double serial_ms =
        time_ms([&] { serial_report = cca::estimate_column_law_reference(rule, params, opts); });
    const double parallel_ms =
        time_ms([&] { parallel_report = cca::estimate_column_law(rule, params, opts); });
    report("column-law MC (20k samples)", serial_ms, parallel_ms);
    if (serial_report.counts != parallel_report.counts) {
      std::printf("MISMATCH between serial and parallel column-law counts\n");
      return 1;
    }
  }

  {
    std::array<double, 3> serial_law{}, parallel_law{};
    const double serial_ms = time_ms([&] { serial_law = cca::exact_max_law_serial(params, 0, 4000); });
    const double parallel_ms = time_ms([&] { parallel_law = cca::exact_max_law(params, 0, 4000); });
    report("exact max-law DP (n=4000)", serial_ms, parallel_ms);
    if (serial_law != parallel_law) {
      std::printf("MISMATCH between serial and parallel max-law values\n");
      return 1;
    }
  }

  {
    cca::OracleSweep serial_sweep{}, parallel_sweep{};
    const double serial_ms = time_ms([&] { serial_sweep = cca::oracle_equivalence_sweep_serial(9, 9); });
    const double parallel_ms = time_ms([&] { parallel_sweep = cca::oracle_equivalence_sweep(9, 9); });
    report("oracle sweep (words <= 3^10)", serial_ms, parallel_ms);
    if (serial_sweep.checked != parallel_sweep.checked ||
        serial_sweep.mismatches != parallel_sweep.mismatches) {
      std::printf("MISMATCH between serial and parallel sweep tallies\n");
      return 1;
    }
  }

  {
    cca::TailStatistics serial_stats, parallel_stats;
    const double serial_ms = time_ms(
        [&] { serial_stats = cca::tail_statistics(params, 0, 1000, 20000, cca::SeedSpec{9, 0}, -1, 1); });
    const double parallel_ms = time_ms(
        [&] { parallel_stats = cca::tail_statistics(params, 0, 1000, 20000, cca::SeedSpec{9, 0}, -1, 0); });
    report("tail statistics (20k walks)", serial_ms, parallel_ms);
    if (serial_stats.tail_hist != parallel_stats.tail_hist) {
      std::printf("MISMATCH between serial and parallel tail histograms\n");
      return 1;
    }
  }

  return 0;
}
