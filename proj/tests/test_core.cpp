#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "cca/core.hpp"

using namespace cca;

TEST_CASE("BernoulliParams rejects invalid vectors") {
  CHECK_THROWS_AS(BernoulliParams({1.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(BernoulliParams({0.5, 0.5, -0.1, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(BernoulliParams({0.3, 0.3, 0.3}), std::invalid_argument);  // sums to 0.9
  CHECK_THROWS_AS(BernoulliParams({0.5}), std::invalid_argument);            // fewer than 2 states
  CHECK_THROWS_AS(BernoulliParams({}), std::invalid_argument);
  CHECK_NOTHROW(BernoulliParams({0.1, 0.3, 0.6}));
  CHECK_NOTHROW(BernoulliParams({0.25, 0.25, 0.25, 0.25}));
}

TEST_CASE("BernoulliParams inverse-CDF sampling maps unit interval to states") {
  const BernoulliParams p({0.1, 0.3, 0.6});
  CHECK(p.states() == 3);
  CHECK(p.sample(0.0) == 0);
  CHECK(p.sample(0.0999) == 0);
  CHECK(p.sample(0.1001) == 1);
  CHECK(p.sample(0.3999) == 1);
  CHECK(p.sample(0.4001) == 2);
  CHECK(p.sample(0.999999) == 2);
}

TEST_CASE("parse_params parses CSV and rejects junk") {
  const BernoulliParams p = parse_params("0.1,0.3,0.6");
  CHECK(p.states() == 3);
  CHECK(p[0] == doctest::Approx(0.1));
  CHECK(p[2] == doctest::Approx(0.6));
  CHECK_THROWS_AS(parse_params(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_params("0.5,abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_params("0.5,0.5x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_params("1.0,0.0"), std::invalid_argument);
}

TEST_CASE("Configuration validates cells and indexes by lattice site") {
  const Configuration cfg(3, -2, {0, 1, 2, 1});
  CHECK(cfg.left() == -2);
  CHECK(cfg.right() == 1);
  CHECK(cfg.covers(-2, 1));
  CHECK(!cfg.covers(-3, 1));
  CHECK(!cfg.covers(-2, 2));
  CHECK(cfg.at(-2) == 0);
  CHECK(cfg.at(0) == 2);
  CHECK(cfg.at(1) == 1);
  CHECK_THROWS_AS(cfg.at(2), std::out_of_range);
  CHECK_THROWS_AS(Configuration(3, 0, {0, 3}), std::invalid_argument);
  CHECK_THROWS_AS(Configuration(3, 0, {}), std::invalid_argument);
  CHECK_THROWS_AS(Configuration(1, 0, {0}), std::invalid_argument);
}

TEST_CASE("sample_configuration is deterministic and respects the law") {
  const BernoulliParams p({1.0 / 3, 1.0 / 3, 1.0 / 3});
  const SeedSpec seed{42, 0};
  const Configuration a = sample_configuration(p, 1000000, -5, seed);
  const Configuration b = sample_configuration(p, 1000000, -5, seed);
  CHECK(a == b);
  CHECK(a.origin == -5);
  CHECK(a.size() == 1000000);

  // 3-sigma binomial band around 1/3 at 1e6 cells (half-width ~0.0014).
  for (State s = 0; s < 3; ++s) {
    const std::vector<State> w{s};
    const double f = word_frequency(a, w);
    CHECK(f > 0.332);
    CHECK(f < 0.335);
  }

  const Configuration c = sample_configuration(p, 1000000, -5, SeedSpec{43, 0});
  CHECK(a.cells != c.cells);
}

TEST_CASE("word_frequency counts sliding-window factors") {
  const Configuration cfg(3, 0, {0, 1, 2, 0, 1, 2});
  const std::vector<State> w01{0, 1};
  CHECK(count_word_occurrences(cfg, w01) == 2);
  CHECK(word_frequency(cfg, w01) == doctest::Approx(2.0 / 5.0));

  const Configuration mono(3, 0, {0, 0, 0});
  const std::vector<State> w0{0};
  CHECK(word_frequency(mono, w0) == doctest::Approx(1.0));

  const std::vector<State> too_long{0, 1, 2, 0};
  CHECK_THROWS_AS(word_frequency(mono, too_long), std::invalid_argument);
  CHECK_THROWS_AS(word_frequency(mono, std::vector<State>{}), std::invalid_argument);
}

TEST_CASE("single-letter frequencies sum to 1 and match the sampling law") {
  const BernoulliParams p({0.1, 0.3, 0.6});
  const Configuration cfg = sample_configuration(p, 1000000, 0, SeedSpec{7, 3});
  double total = 0;
  for (State s = 0; s < 3; ++s) {
    total += word_frequency(cfg, std::vector<State>{s});
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // Birkhoff at 3-sigma binomial tolerance: sd(0.6) ~ 0.00049 at 1e6.
  CHECK(word_frequency(cfg, std::vector<State>{2}) == doctest::Approx(0.6).epsilon(0.0035));
  // Frequency of a two-letter word converges to the product law.
  const double f12 = word_frequency(cfg, std::vector<State>{1, 2});
  CHECK(f12 == doctest::Approx(0.3 * 0.6).epsilon(0.02));
}

TEST_CASE("configuration text round trip with origin header and comments") {
  const Configuration cfg(3, -4, {2, 0, 1, 1, 2});
  std::stringstream ss;
  write_configuration(ss, cfg);
  const Configuration back = read_configuration(ss, 3);
  CHECK(back == cfg);

  std::stringstream in("# comment line\norigin=-7\n\n1,0,2,2\n");
  const Configuration parsed = read_configuration(in, 3);
  CHECK(parsed.origin == -7);
  CHECK(parsed.cells == std::vector<State>{1, 0, 2, 2});

  // alphabet_size 0 infers max(3, max value + 1).
  std::stringstream in2("0,4,1\n");
  const Configuration inferred = read_configuration(in2, 0);
  CHECK(inferred.alphabet_size == 5);
  std::stringstream in3("0,1,0\n");
  CHECK(read_configuration(in3, 0).alphabet_size == 3);

  std::stringstream bad("0,1,junk\n");
  CHECK_THROWS_AS(read_configuration(bad, 3), std::invalid_argument);
  std::stringstream out_of_range("0,1,5\n");
  CHECK_THROWS_AS(read_configuration(out_of_range, 3), std::invalid_argument);
}

TEST_CASE("substreams and counters decorrelate draws") {
  const SeedSpec base{123, 0};
  const SeedSpec s1 = base.substream(1);
  const SeedSpec s2 = base.substream(2);
  CHECK(s1.stream_index != s2.stream_index);
  const std::uint64_t k1 = stream_key(s1);
  const std::uint64_t k2 = stream_key(s2);
  CHECK(k1 != k2);
  CHECK(counter_bits(k1, 0) != counter_bits(k1, 1));
  CHECK(counter_bits(k1, 0) != counter_bits(k2, 0));
  const double u = counter_unit(k1, 5);
  CHECK(u >= 0.0);
  CHECK(u < 1.0);
}
