#include "cca/exact.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cca/walks.hpp"

namespace cca {

namespace {

inline int mod3i(long long v) noexcept {
  int r = static_cast<int>(v % 3);
  return r < 0 ? r + 3 : r;
}

// Rescale threshold: far below any probability this project produces (the
// barrier survival decays polynomially), kept so the class honours its
// contract even in extreme regimes.
constexpr double kTiny = 0x1.0p-500;
constexpr double kScale = 0x1.0p512;

}  // namespace

BarrierDp::BarrierDp(const BernoulliParams& params, std::size_t max_m) {
  if (params.states() != 3) throw std::invalid_argument("barrier walk needs 3-state parameters");
  const double p0 = params[0], p1 = params[1], p2 = params[2];
  scaled_.resize(max_m + 1);
  exp2_.resize(max_m + 1);
  // survival from deficit d (value -d); index 0 is the dead boundary.  Both
  // buffers start at 1: entries beyond the written frontier are exactly the
  // survival of a deficit the walk cannot exhaust in the steps taken so far.
  std::vector<double> cur(max_m + 3, 1.0), next(max_m + 3, 1.0);
  cur[0] = 0.0;
  long exponent = 0;
  scaled_[0] = 1.0;
  exp2_[0] = 0;
  // step coefficients by deficit residue: from value -d, moving up lands on
  // residue (1-d), flat on (-d), down on (-1-d), all mod 3
  const double p_up[3] = {p1, p0, p2};    // d mod 3 = 0, 1, 2
  const double p_flat[3] = {p0, p2, p1};  // residue of -d
  const double p_down[3] = {p2, p1, p0};  // residue of -d-1
  for (std::size_t m = 1; m <= max_m; ++m) {
    const std::size_t reach = std::min(max_m + 1, m + 1);
    next[0] = 0.0;
    for (std::size_t d = 1; d <= reach + 1 && d < cur.size() - 1; ++d) {
      const int dr = static_cast<int>(d % 3);
      next[d] = p_up[dr] * cur[d - 1] + p_flat[dr] * cur[d] + p_down[dr] * cur[d + 1];
    }
    cur.swap(next);
    if (cur[1] > 0 && cur[1] < kTiny) {
      for (double& v : cur) v *= kScale;
      exponent -= 512;
    }
    scaled_[m] = cur[1];
    exp2_[m] = exponent;
  }
}

double BarrierDp::survival(std::size_t m) const {
  if (m >= scaled_.size()) throw std::out_of_range("horizon beyond table");
  return std::ldexp(scaled_[m], exp2_[m]);
}

double BarrierDp::log_survival(std::size_t m) const {
  if (m >= scaled_.size()) throw std::out_of_range("horizon beyond table");
  return std::log(scaled_[m]) + static_cast<double>(exp2_[m]) * std::log(2.0);
}

double BarrierDp::k_m(std::size_t m) const {
  if (m == 0 || m >= scaled_.size()) throw std::out_of_range("ratio needs 1 <= m <= max_m");
  return std::ldexp(scaled_[m - 1] / scaled_[m], exp2_[m - 1] - exp2_[m]);
}

double barrier_probability(const BernoulliParams& params, long long k, long long barrier,
                           std::size_t n) {
  if (params.states() != 3) throw std::invalid_argument("barrier walk needs 3-state parameters");
  if (k >= barrier) throw std::invalid_argument("start must lie strictly below the barrier");
  const long long d0 = barrier - k;
  if (d0 > static_cast<long long>(n)) return 1.0;  // barrier out of reach
  // value with deficit d is barrier - d, with residue (barrier - d) mod 3
  const double p0 = params[0], p1 = params[1], p2 = params[2];
  const int hr = mod3i(barrier);
  const auto pr = [&](int residue) { return residue == 0 ? p0 : (residue == 1 ? p1 : p2); };
  const std::size_t cap = static_cast<std::size_t>(d0) + n + 2;
  std::vector<double> cur(cap, 1.0), next(cap, 1.0);
  cur[0] = 0.0;
  for (std::size_t m = 1; m <= n; ++m) {
    next[0] = 0.0;
    for (std::size_t d = 1; d + 1 < cap; ++d) {
      const int dr = static_cast<int>(d % 3);
      next[d] = pr((hr - dr + 1 + 6) % 3) * cur[d - 1] + pr((hr - dr + 6) % 3) * cur[d] +
                pr((hr - dr - 1 + 6) % 3) * cur[d + 1];
    }
    cur.swap(next);
  }
  return cur[static_cast<std::size_t>(d0)];
}

namespace {

std::array<double, 3> max_law_impl(const BernoulliParams& params, long long k, std::size_t n,
                                   int threads) {
  if (params.states() != 3) throw std::invalid_argument("max-law needs 3-state parameters");
  const double p[3] = {params[0], params[1], params[2]};
  // mass[r][d]: running max congruent to r, value = max - d
  const std::size_t cap = n + 3;
  std::vector<double> cur(3 * cap, 0.0), next(3 * cap, 0.0);
  cur[static_cast<std::size_t>(mod3i(k)) * cap + 0] = 1.0;
  for (std::size_t t = 1; t <= n; ++t) {
    const std::size_t dmax = std::min(t, n + 1);
    for (int r = 0; r < 3; ++r) {
      const double* m = cur.data() + static_cast<std::size_t>(r) * cap;
      const double* m_prev = cur.data() + static_cast<std::size_t>((r + 2) % 3) * cap;
      double* o = next.data() + static_cast<std::size_t>(r) * cap;
      o[0] = p[r] * (m[1] + m[0] + m_prev[0]);
      // destination residue for landing at deficit d is (r - d) mod 3
      const double c1 = p[(r + 2) % 3], c2 = p[(r + 1) % 3], c0 = p[r];
      const double coef[3] = {c0, c1, c2};
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1 && dmax > 4096)
      for (std::size_t d = 1; d <= dmax; ++d) o[d] = coef[d % 3] * (m[d + 1] + m[d] + m[d - 1]);
      for (std::size_t d = dmax + 1; d < cap; ++d) o[d] = 0.0;
    }
    cur.swap(next);
  }
  std::array<double, 3> law{0.0, 0.0, 0.0};
  for (int r = 0; r < 3; ++r) {
    // accumulate smallest terms first for reproducible, accurate sums
    double acc = 0.0;
    const double* m = cur.data() + static_cast<std::size_t>(r) * cap;
    for (std::size_t d = cap; d-- > 0;) acc += m[d];
    law[static_cast<std::size_t>(r)] = acc;
  }
  return law;
}

}  // namespace

std::array<double, 3> exact_max_law(const BernoulliParams& params, long long k, std::size_t n,
                                    int workers) {
  return max_law_impl(params, k, n, workers > 0 ? workers : omp_get_max_threads());
}

std::array<double, 3> exact_max_law_serial(const BernoulliParams& params, long long k,
                                           std::size_t n) {
  return max_law_impl(params, k, n, 1);
}

RationalParams::RationalParams(std::array<long long, 3> num_, long long den_)
    : num(num_), den(den_) {
  if (den <= 0) throw std::invalid_argument("denominator must be positive");
  long long sum = 0;
  for (long long a : num) {
    if (a <= 0) throw std::invalid_argument("numerators must be strictly positive");
    sum += a;
  }
  if (sum != den) throw std::invalid_argument("numerators must sum to the denominator");
}

BernoulliParams RationalParams::to_doubles() const {
  return BernoulliParams({static_cast<double>(num[0]) / static_cast<double>(den),
                          static_cast<double>(num[1]) / static_cast<double>(den),
                          static_cast<double>(num[2]) / static_cast<double>(den)});
}

std::vector<BigInt> barrier_survival_numerators(const RationalParams& params, std::size_t max_m) {
  const long long a0 = params.num[0], a1 = params.num[1], a2 = params.num[2];
  const long long up[3] = {a1, a0, a2};    // destination residue of -d+1 by d mod 3
  const long long flat[3] = {a0, a2, a1};  // residue of -d
  const long long down[3] = {a2, a1, a0};  // residue of -d-1
  const std::size_t cap = max_m + 3;
  std::vector<BigInt> cur(cap, 1), next(cap, 1);
  cur[0] = 0;
  std::vector<BigInt> out(max_m + 1);
  out[0] = 1;
  BigInt den_pow = 1;  // den^(m-1) entering step m: exact value at untouched deficits
  for (std::size_t m = 1; m <= max_m; ++m) {
    cur[cap - 1] = den_pow;
    next[0] = 0;
    for (std::size_t d = 1; d + 1 < cap; ++d) {
      const int dr = static_cast<int>(d % 3);
      next[d] = up[dr] * cur[d - 1] + flat[dr] * cur[d] + down[dr] * cur[d + 1];
    }
    cur.swap(next);
    out[m] = cur[1];
    den_pow *= params.den;
  }
  return out;
}

namespace {

void check_enumeration_size(const RationalParams& params, std::size_t n) {
  if (n > 15) throw std::invalid_argument("exhaustive enumeration limited to 15 steps");
  const long long amax = std::max({params.num[0], params.num[1], params.num[2]});
  if (static_cast<double>(n) * std::log2(static_cast<double>(amax)) > 62.0)
    throw std::invalid_argument("word weights would overflow 64-bit accumulation");
}

}  // namespace

ExactTailLaw enumerate_tail_law(const RationalParams& params, long long k, std::size_t n) {
  check_enumeration_size(params, n);
  ExactTailLaw law;
  law.n = n;
  law.k = k;
  law.den_pow_n = 1;
  for (std::size_t i = 0; i < n; ++i) law.den_pow_n *= params.den;
  law.tail_mass.assign(n + 1, 0);
  law.tail_and_max0.assign(n + 1, 0);
  std::uint64_t words = 1;
  for (std::size_t i = 0; i < n; ++i) words *= 3;
  for (std::uint64_t w = 0; w < words; ++w) {
    long long v = k;
    int prev = mod3i(k);
    long long best = v;
    long long lastrec3 = (v % 3 == 0) ? 0 : -1;
    long long weight = 1;
    std::uint64_t rem = w;
    for (std::size_t t = 1; t <= n; ++t) {
      const int z = static_cast<int>(rem % 3);
      rem /= 3;
      weight *= params.num[static_cast<std::size_t>(z)];
      v += residue_step(prev, z);
      prev = z;
      if (v >= best) {
        best = v;
        if (v % 3 == 0) lastrec3 = static_cast<long long>(t);
      }
    }
    if (lastrec3 < 0) {
      law.none_mass += weight;
    } else {
      const std::size_t m = n - static_cast<std::size_t>(lastrec3);
      law.tail_mass[m] += weight;
      if (best % 3 == 0) law.tail_and_max0[m] += weight;
    }
  }
  return law;
}

ConditionalCheck conditional_tail_law_check(const BernoulliParams& params, std::size_t n,
                                            std::size_t m, CheckMode mode, std::uint64_t samples,
                                            const SeedSpec& seed) {
  if (params.states() != 3) throw std::invalid_argument("tail law needs 3-state parameters");
  if (m < 1 || m > n) throw std::invalid_argument("tail length must lie in [1, n]");
  ConditionalCheck check;
  double mass_tail = 0, mass_both = 0;
  std::uint64_t support = 0;
  if (mode == CheckMode::exhaustive) {
    if (n > 15) throw std::invalid_argument("exhaustive enumeration limited to 15 steps");
    std::uint64_t words = 1;
    for (std::size_t i = 0; i < n; ++i) words *= 3;
    const double p[3] = {params[0], params[1], params[2]};
    for (std::uint64_t w = 0; w < words; ++w) {
      long long v = 0;
      int prev = 0;
      long long best = 0;
      long long lastrec3 = 0;
      double weight = 1;
      std::uint64_t rem = w;
      for (std::size_t t = 1; t <= n; ++t) {
        const int z = static_cast<int>(rem % 3);
        rem /= 3;
        weight *= p[z];
        v += residue_step(prev, z);
        prev = z;
        if (v >= best) {
          best = v;
          if (v % 3 == 0) lastrec3 = static_cast<long long>(t);
        }
      }
      if (n - static_cast<std::size_t>(lastrec3) == m) {
        mass_tail += weight;
        ++support;
        if (best % 3 == 0) mass_both += weight;
      }
    }
  } else {
    if (samples == 0) throw std::invalid_argument("Monte Carlo mode needs a sample count");
    for (std::uint64_t s = 0; s < samples; ++s) {
      const std::uint64_t key = stream_key(seed.substream(s));
      long long v = 0;
      int prev = 0;
      long long best = 0;
      long long lastrec3 = 0;
      for (std::size_t t = 1; t <= n; ++t) {
        const int z = params.sample(counter_unit(key, t - 1));
        v += residue_step(prev, z);
        prev = z;
        if (v >= best) {
          best = v;
          if (v % 3 == 0) lastrec3 = static_cast<long long>(t);
        }
      }
      if (n - static_cast<std::size_t>(lastrec3) == m) {
        mass_tail += 1;
        ++support;
        if (best % 3 == 0) mass_both += 1;
      }
    }
  }
  check.support = support;
  check.lhs = mass_tail > 0 ? mass_both / mass_tail : 0.0;
  BarrierDp dp(params, m);
  check.rhs = params[2] * dp.k_m(m);
  check.abs_error = std::abs(check.lhs - check.rhs);
  return check;
}

BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::size_t i = 0; i < k; ++i) {
    result *= static_cast<unsigned long long>(n - i);
    result /= static_cast<unsigned long long>(i + 1);
  }
  return result;
}

PathCounts path_counts(std::size_t len) {
  PathCounts counts;
  counts.meanders = binomial(len, len / 2);
  if (len % 2 == 0) {
    counts.bridges = binomial(len, len / 2);
    counts.dyck = counts.bridges / static_cast<unsigned long long>(len / 2 + 1);
  } else {
    counts.bridges = 0;
    counts.dyck = 0;
  }
  return counts;
}

namespace {

double log_meanders(std::size_t j) {
  const double dj = static_cast<double>(j);
  const double h = static_cast<double>(j / 2);
  return std::lgamma(dj + 1.0) - std::lgamma(h + 1.0) - std::lgamma(dj - h + 1.0);
}

}  // namespace

double small_tail_probability(std::size_t n, long long cutoff) {
  if (cutoff < 0) return 0.0;
  if (cutoff >= static_cast<long long>(n)) return 1.0;
  const double log2v = std::log(2.0);
  double total = std::exp(log_meanders(n) - static_cast<double>(n) * log2v);
  for (long long t = 1; t <= cutoff; ++t) {
    total += std::exp(log_meanders(n - static_cast<std::size_t>(t)) +
                      log_meanders(static_cast<std::size_t>(t) - 1) -
                      static_cast<double>(n) * log2v);
  }
  return std::min(total, 1.0);
}

std::pair<BigInt, BigInt> small_tail_probability_exact(std::size_t n, long long cutoff) {
  BigInt den = BigInt(1) << n;
  if (cutoff < 0) return {0, den};
  BigInt num = binomial(n, n / 2);
  const long long top = std::min(cutoff, static_cast<long long>(n));
  for (long long t = 1; t <= top; ++t) {
    const std::size_t a = n - static_cast<std::size_t>(t);
    const std::size_t b = static_cast<std::size_t>(t) - 1;
    num += binomial(a, a / 2) * binomial(b, b / 2);
  }
  return {num, den};
}

EmbeddedStepWeights embedded_first_step_weights(const RationalParams& params, std::size_t n) {
  check_enumeration_size(params, n);
  EmbeddedStepWeights weights;
  weights.den_pow_n = 1;
  for (std::size_t i = 0; i < n; ++i) weights.den_pow_n *= params.den;
  std::uint64_t words = 1;
  for (std::size_t i = 0; i < n; ++i) words *= 3;
  for (std::uint64_t w = 0; w < words; ++w) {
    long long v = 0;
    int prev = 0;
    int resolved = 0;  // +1, -1 or 0 (unresolved)
    long long weight = 1;
    std::uint64_t rem = w;
    for (std::size_t t = 1; t <= n; ++t) {
      const int z = static_cast<int>(rem % 3);
      rem /= 3;
      weight *= params.num[static_cast<std::size_t>(z)];
      v += residue_step(prev, z);
      prev = z;
      if (resolved == 0 && (v == 3 || v == -3)) resolved = v > 0 ? 1 : -1;
    }
    if (resolved > 0)
      weights.up += weight;
    else if (resolved < 0)
      weights.down += weight;
  }
  return weights;
}

}  // namespace cca
