// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qcube/sign_function.hpp"
#include "test_oracles.hpp"

using namespace qcube;

TEST_CASE("constant sign functions at the extremes") {
  const SignFunction plus = SignFunction::constant(2, +1);
  CHECK(plus(1, 2) == 1);
  const SignFunction minus = SignFunction::constant(2, -1);
  CHECK(minus(1, 2) == -1);

  const SignFunction big = SignFunction::constant(5, +1);
  for (int i = 1; i <= 5; ++i) {
    CHECK(big(i, i) == -1);
    for (int j = 1; j <= 5; ++j) CHECK(big(i, j) == big(j, i));
  }
  CHECK_THROWS(SignFunction::constant(0, 1));
  CHECK_THROWS(SignFunction::constant(3, 2));
}

TEST_CASE("sampling at q = +-1 is deterministic") {
  const SignFunction bosonic =
      SignFunction::sample(3, SignLaw{Rational(1), 123});
  const SignFunction fermionic =
      SignFunction::sample(3, SignLaw{Rational(-1), 123});
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      CHECK(bosonic(i, j) == (i == j ? -1 : 1));
      CHECK(fermionic(i, j) == -1);
    }
}

TEST_CASE("fair-coin sample has balanced signs") {
  // 4950 upper-triangle draws at q = 0; [0.4, 0.6] is a ~3 sigma band.
  const SignFunction eps = SignFunction::sample(100, SignLaw{Rational(0), 7});
  int plus = 0, total = 0;
  for (int i = 1; i <= 100; ++i)
    for (int j = i + 1; j <= 100; ++j) {
      ++total;
      if (eps(i, j) > 0) ++plus;
    }
  CHECK(total == 4950);
  const double frac = double(plus) / total;
  CHECK(frac > 0.4);
  CHECK(frac < 0.6);
}

TEST_CASE("sampling invariants and reproducibility") {
  for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
    const SignFunction eps =
        SignFunction::sample(9, SignLaw{Rational(1, 3), seed});
    for (int i = 1; i <= 9; ++i) {
      CHECK(eps(i, i) == -1);
      for (int j = 1; j <= 9; ++j) {
        CHECK(eps(i, j) == eps(j, i));
        const bool in_mask = (eps.negative_mask(i) >> (j - 1)) & 1;
        CHECK(in_mask == (eps(i, j) < 0));
      }
    }
  }
  const SignLaw law{Rational(-1, 2), 42};
  CHECK(SignFunction::sample(8, law) == SignFunction::sample(8, law));
  const SignFunction other = SignFunction::sample(8, SignLaw{Rational(-1, 2), 43});
  CHECK_FALSE(SignFunction::sample(8, law) == other);
}

TEST_CASE("rejects bad sampling input") {
  CHECK_THROWS(SignFunction::sample(0, SignLaw{Rational(0), 1}));
  CHECK_THROWS(SignFunction::sample(3, SignLaw{Rational(2), 1}));
  CHECK_THROWS(SignFunction::sample(3, SignLaw{Rational(-3, 2), 1}));
}

TEST_CASE("empirical mean of eps(i,j) approaches q") {
  // 2000 independent entries per q; allow 4 standard errors.
  for (const Rational q : {Rational(1, 2), Rational(0), Rational(-3, 4)}) {
    int sum = 0;
    const int trials = 2000;
    for (int t = 0; t < trials; ++t) {
      const SignFunction eps =
          SignFunction::sample(2, SignLaw{q, 1000 + static_cast<std::uint64_t>(t)});
      sum += eps(1, 2);
    }
    const double mean = double(sum) / trials;
    const double sigma = std::sqrt(1.0 - q.get_d() * q.get_d());
    CHECK(std::abs(mean - q.get_d()) <= 4.0 * sigma / std::sqrt(double(trials)) + 1e-12);
  }
}

TEST_CASE("vertex sign: empty product and single factor") {
  const SignFunction eps = testing::random_eps(8, 5);
  for (int i = 1; i <= 8; ++i) CHECK(eps.vertex_sign(0, i) == 1);
  CHECK(eps.vertex_sign(/*r={1}*/ 1, 2) == eps(2, 1));
}

TEST_CASE("vertex sign matches the naive loop") {
  const SignFunction eps = testing::random_eps(12, 17);
  const CounterRng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t r = rng.at(trial) & 0xfffull;
    const int i = 1 + static_cast<int>(rng.at(trial, 1) % 12);
    CHECK(eps.vertex_sign(r, i) == testing::naive_vertex_sign(eps, r, i));
  }
}

TEST_CASE("vertex sign bit-flip consistency") {
  const SignFunction eps = testing::random_eps(10, 23);
  const CounterRng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t r = rng.at(trial) & 0x3ffull;
    const int i = 2 + static_cast<int>(rng.at(trial, 1) % 9);
    const int j = 1 + static_cast<int>(rng.at(trial, 2) % (i - 1));
    const std::uint64_t flipped = r ^ (std::uint64_t{1} << (j - 1));
    CHECK(eps.vertex_sign(r, i) * eps.vertex_sign(flipped, i) == eps(i, j));
  }
}

TEST_CASE("text serialization round-trips exactly") {
  const SignFunction eps =
      SignFunction::sample(7, SignLaw{Rational(-1, 2), 99});
  const std::string text = eps.to_text();
  const SignFunction back = SignFunction::from_text(text);
  CHECK(back == eps);
  CHECK(back.law().q == eps.law().q);
  CHECK(back.law().seed == eps.law().seed);
  CHECK(back.to_text() == text);

  CHECK_THROWS(SignFunction::from_text(std::string("nonsense")));
  CHECK_THROWS(SignFunction::from_text(std::string("n=3 q=0 seed=0\n+\n")));
  CHECK_THROWS(SignFunction::from_text(std::string("n=3 q=0 seed=0\n+*\n+\n")));
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("-1/2") == Rational(-1, 2));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-0.5") == Rational(-1, 2));
  CHECK_THROWS(parse_rational("abc"));
  CHECK_THROWS(parse_rational(""));
}
