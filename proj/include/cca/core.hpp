#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cca/rng.hpp"

namespace cca {

using State = std::uint8_t;

// Strictly positive state probabilities p_0..p_{n-1} summing to 1.
class BernoulliParams {
 public:
  explicit BernoulliParams(std::vector<double> probs);

  int states() const noexcept { return static_cast<int>(p_.size()); }
  double operator[](int s) const noexcept { return p_[static_cast<std::size_t>(s)]; }
  const std::vector<double>& probs() const noexcept { return p_; }

  // Inverse-CDF lookup for a uniform draw in [0,1).
  int sample(double unit) const noexcept;

 private:
  std::vector<double> p_;
  std::vector<double> cdf_;  // cdf_[s] = p_0 + ... + p_s
};

// Parses "0.1,0.3,0.6" into validated parameters.
BernoulliParams parse_params(const std::string& csv);

// A finite window of a configuration on the integer lattice: cell values over
// consecutive sites [origin, origin + cells.size() - 1].
struct Configuration {
  int alphabet_size = 3;
  long long origin = 0;
  std::vector<State> cells;

  Configuration() = default;
  Configuration(int alphabet_size, long long origin, std::vector<State> cells);

  std::size_t size() const noexcept { return cells.size(); }
  long long left() const noexcept { return origin; }
  long long right() const noexcept { return origin + static_cast<long long>(cells.size()) - 1; }
  bool covers(long long a, long long b) const noexcept { return a >= left() && b <= right() && a <= b; }

  // Value at lattice site i (must lie inside the window).
  State at(long long i) const;

  bool operator==(const Configuration&) const = default;
};

// i.i.d. cells drawn from the given law over [origin, origin + length - 1].
Configuration sample_configuration(const BernoulliParams& params, std::size_t length,
                                   long long origin, const SeedSpec& seed);

// Occurrences of `word` as a factor, and occurrences divided by window count
// (size - |word| + 1).  Requires 1 <= |word| <= size.
std::size_t count_word_occurrences(const Configuration& cfg, std::span<const State> word);
double word_frequency(const Configuration& cfg, std::span<const State> word);

// Text format: optional "origin=<k>" line, then one line of comma-separated
// state integers.  Blank lines and lines starting with '#' are skipped.
// alphabet_size 0 means infer it as max(3, largest value + 1).
Configuration read_configuration(std::istream& in, int alphabet_size = 0);
Configuration read_configuration_file(const std::string& path, int alphabet_size = 0);
void write_configuration(std::ostream& out, const Configuration& cfg);

}  // namespace cca
