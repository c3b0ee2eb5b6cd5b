#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cca/core.hpp"
#include "cca/rng.hpp"

namespace cca {

using BigInt = boost::multiprecision::cpp_int;

// Survival probabilities of the 3-state destination-residue walk started at
// value -1, absorbed on reaching 0 or above: survival(m) = P^{<0}_{-1,m}.
// Stored scaled (mantissa times power of two) so ratios stay exact even if the
// raw probabilities were to underflow.
class BarrierDp {
 public:
  BarrierDp(const BernoulliParams& params, std::size_t max_m);

  std::size_t max_m() const noexcept { return scaled_.size() - 1; }
  double survival(std::size_t m) const;
  double log_survival(std::size_t m) const;
  // K_m = survival(m-1) / survival(m), m >= 1.
  double k_m(std::size_t m) const;

 private:
  std::vector<double> scaled_;
  std::vector<long> exp2_;
};

// P^{<H}_{k,n}: walk from value k stays strictly below H for n steps.
// Requires k < H; depends on H only through H mod 3 and the deficit H - k.
double barrier_probability(const BernoulliParams& params, long long k, long long barrier,
                           std::size_t n);

// Law of (max of the walk over [0, n]) mod 3 for the walk started at k.
// Component r is the probability the running max is congruent to r.
std::array<double, 3> exact_max_law(const BernoulliParams& params, long long k, std::size_t n,
                                    int workers = 0);
std::array<double, 3> exact_max_law_serial(const BernoulliParams& params, long long k,
                                           std::size_t n);

// Exact rational parameters p_s = num[s] / den with positive integer parts.
struct RationalParams {
  std::array<long long, 3> num{};
  long long den = 0;

  RationalParams(std::array<long long, 3> num, long long den);
  BernoulliParams to_doubles() const;
};

// Integer numerators of P^{<0}_{-1,m} over den^m, m = 0..max_m (index 0 is 1).
std::vector<BigInt> barrier_survival_numerators(const RationalParams& params, std::size_t max_m);

// Exhaustive distribution of the 3-divisible tail for the n-step walk from k:
// all integer masses are numerators over den^n.
struct ExactTailLaw {
  std::size_t n = 0;
  long long k = 0;
  BigInt den_pow_n = 1;
  std::vector<BigInt> tail_mass;      // index m: P(3-tail = m), m = 0..n
  std::vector<BigInt> tail_and_max0;  // index m: P(3-tail = m and max divisible by 3)
  BigInt none_mass = 0;               // P(no record value divisible by 3)
};
ExactTailLaw enumerate_tail_law(const RationalParams& params, long long k, std::size_t n);

enum class CheckMode { exhaustive, montecarlo };

struct ConditionalCheck {
  double lhs = 0;  // P(max divisible by 3 | 3-tail = m), walk from 0
  double rhs = 0;  // p_2 * K_m
  double abs_error = 0;
  std::uint64_t support = 0;  // weight count behind the conditioning event
};

// Exhaustive mode enumerates all 3^n step words (n <= 15); Monte Carlo mode
// estimates the left side from `samples` walks.
ConditionalCheck conditional_tail_law_check(const BernoulliParams& params, std::size_t n,
                                            std::size_t m, CheckMode mode,
                                            std::uint64_t samples = 0, const SeedSpec& seed = {});

BigInt binomial(std::size_t n, std::size_t k);

struct PathCounts {
  BigInt bridges;   // paths of |len| +-1 steps from 0 to 0 (0 when len is odd)
  BigInt dyck;      // nonnegative bridges (0 when len is odd)
  BigInt meanders;  // nonnegative paths, any endpoint
};
PathCounts path_counts(std::size_t len);

// P(1-tail of the symmetric +-1 walk over [0, n] is <= cutoff).
double small_tail_probability(std::size_t n, long long cutoff);
std::pair<BigInt, BigInt> small_tail_probability_exact(std::size_t n, long long cutoff);

// Weights (over den^n) of the first embedded step resolving to +3 versus -3
// within n steps of the walk started at 0.  Exhaustive; n <= 15.
struct EmbeddedStepWeights {
  BigInt up = 0;
  BigInt down = 0;
  BigInt den_pow_n = 1;
};
EmbeddedStepWeights embedded_first_step_weights(const RationalParams& params, std::size_t n);

}  // namespace cca
