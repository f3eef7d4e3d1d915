// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "qcube/q_combinatorics.hpp"

using namespace qcube;

TEST_CASE("q integers") {
  const Rational half(1, 2);
  CHECK(q_integer(1, half) == 1);
  CHECK(q_integer(3, Rational(1)) == 3);  // regular at q = 1
  CHECK(q_integer(2, half) == Rational(3, 2));
  CHECK(q_integer(0, half) == 0);
  CHECK(q_integer_poly(3) == QPolynomial({BigInt(1), BigInt(1), BigInt(1)}));
  CHECK(q_factorial(3, Rational(1)) == 6);
  CHECK(q_factorial(2, Rational(-1)) == 0);
}

TEST_CASE("q-Hermite polynomials from the recurrence") {
  const Rational q(1, 3);
  CHECK(hermite_polynomial(0, q) == XPolynomial::constant(Rational(1)));
  CHECK(hermite_polynomial(1, q) == XPolynomial::monomial(1));
  // H_2 = x^2 - 1.
  CHECK(hermite_polynomial(2, q) ==
        XPolynomial({Rational(-1), Rational(0), Rational(1)}));
  // H_3 = x^3 - (2+q) x, unrolled by hand: [2]_q = 1 + q.
  for (const Rational qq : {Rational(1, 3), Rational(-1, 2), Rational(1)}) {
    const XPolynomial h3 = hermite_polynomial(3, qq);
    CHECK(h3 == XPolynomial({Rational(0), -(Rational(2) + qq), Rational(0),
                             Rational(1)}));
  }
}

TEST_CASE("pair partition enumeration") {
  CHECK(pair_partitions(2).size() == 1);
  CHECK(pair_partitions(4).size() == 3);
  CHECK(pair_partitions(8).size() == 105);  // 7!!
  CHECK_THROWS(pair_partitions(3));

  // Distinct and valid for all m <= 6: (2m-1)!! partitions covering the set.
  for (int m = 1; m <= 6; ++m) {
    std::set<PairPartition> seen;
    BigInt expected(1);
    for (int j = 3; j <= 2 * m - 1; j += 2) expected *= j;
    for_each_pair_partition(2 * m, [&](const PairPartition& pp) {
      REQUIRE(pp.size() == static_cast<std::size_t>(m));
      std::set<int> covered;
      for (const auto& [a, b] : pp) {
        CHECK(a < b);
        covered.insert(a);
        covered.insert(b);
      }
      CHECK(covered.size() == static_cast<std::size_t>(2 * m));
      seen.insert(pp);
    });
    CHECK(BigInt(seen.size()) == expected);
  }
}

TEST_CASE("crossing numbers") {
  CHECK(crossing_number({{1, 2}, {3, 4}}) == 0);
  CHECK(crossing_number({{1, 3}, {2, 4}}) == 1);
  CHECK(crossing_number({{1, 4}, {2, 5}, {3, 6}}) == 3);
  CHECK(crossing_number({{1, 4}, {2, 3}}) == 0);  // nested
}

TEST_CASE("q-Gaussian moments") {
  CHECK(q_gaussian_moment(2, Rational(1, 2)) == 1);
  CHECK(q_gaussian_moment(3, Rational(1, 2)) == 0);
  // m4 = 2 + q, m6 = 5 + 6q + 3q^2 + q^3 as exact polynomials.
  CHECK(q_gaussian_moment_poly(4) == QPolynomial({BigInt(2), BigInt(1)}));
  CHECK(q_gaussian_moment_poly(6) ==
        QPolynomial({BigInt(5), BigInt(6), BigInt(3), BigInt(1)}));
  CHECK(q_gaussian_moment_poly(6).to_string() == "5 + 6q + 3q^2 + q^3");

  // q = 0: Catalan numbers.
  const long catalan[] = {1, 1, 2, 5, 14, 42, 132};
  for (int m = 0; m <= 12; m += 2)
    CHECK(q_gaussian_moment(m, Rational(0)) == catalan[m / 2]);
  // q = 1: double factorials (normal moments).
  const long dfact[] = {1, 1, 3, 15, 105, 945};
  for (int m = 0; m <= 10; m += 2)
    CHECK(q_gaussian_moment(m, Rational(1)) == dfact[m / 2]);
  // q = -1: symmetric Bernoulli, all even moments 1.
  for (int m = 0; m <= 12; m += 2)
    CHECK(q_gaussian_moment(m, Rational(-1)) == 1);
}

TEST_CASE("pair-partition and Jacobi oracles agree") {
  for (int m = 0; m <= 10; ++m) {
    for (const Rational q : {Rational(-1, 2), Rational(0), Rational(1, 2)})
      CHECK(q_gaussian_moment(m, q) == q_gaussian_moment_jacobi(m, q));
    CHECK(q_gaussian_moment_poly(m) == q_gaussian_moment_jacobi_poly(m));
  }
}

TEST_CASE("orthogonality: tau(H_j H_k) = delta_{jk} [k]_q!") {
  for (const Rational q :
       {Rational(-1, 2), Rational(0), Rational(1, 2), Rational(3, 4)})
    for (int j = 0; j <= 5; ++j)
      for (int k = 0; k <= 5; ++k) {
        const std::vector<int> degrees{j, k};
        const Rational expected = j == k ? q_factorial(k, q) : Rational(0);
        CHECK(limit_moment(degrees, q) == expected);
      }
}

TEST_CASE("moment recursion consistency") {
  // tau(x H_k P) = tau(H_{k+1} P) + [k]_q tau(H_{k-1} P) for small P.
  const Rational q(1, 2);
  for (int k = 1; k <= 4; ++k)
    for (int pdeg = 0; pdeg <= 3; ++pdeg) {
      const XPolynomial p = XPolynomial::monomial(pdeg, Rational(2, 3));
      const XPolynomial hk = hermite_polynomial(k, q);
      const XPolynomial lhs_poly = XPolynomial::monomial(1) * hk * p;
      const XPolynomial rhs_poly =
          hermite_polynomial(k + 1, q) * p +
          [&] {
            XPolynomial scaled = hermite_polynomial(k - 1, q) * p;
            scaled *= q_integer(k, q);
            return scaled;
          }();
      Rational lhs(0), rhs(0);
      for (int d = 0; d <= lhs_poly.degree(); ++d)
        lhs += lhs_poly.coeff(d) * q_gaussian_moment(d, q);
      for (int d = 0; d <= rhs_poly.degree(); ++d)
        rhs += rhs_poly.coeff(d) * q_gaussian_moment(d, q);
      CHECK(lhs == rhs);
    }
}

TEST_CASE("limit moments of words") {
  for (const Rational q : {Rational(-1, 2), Rational(0), Rational(1, 2)}) {
    const std::vector<int> w22{2, 2};
    CHECK(limit_moment(w22, q) == Rational(1) + q);  // = [2]_q!
    const std::vector<int> w121{1, 2, 1};
    CHECK(limit_moment(w121, q) == Rational(1) + q);
    const std::vector<int> odd{1, 2, 2};
    CHECK(limit_moment(odd, q) == 0);
  }
}

TEST_CASE("Z mean and variance") {
  // q = 1: W is deterministic, variance 0.
  for (int k = 1; k <= 4; ++k) CHECK(z_variance(k, Rational(1)) == 0);
  // k = 1: Var(W) = Var(eps) = 1 - q^2.
  for (const Rational q : {Rational(0), Rational(1, 2), Rational(-2, 3)})
    CHECK(z_variance(1, q) == Rational(1) - q * q);
  CHECK(z_variance(1, Rational(0)) == 1);

  // Certified formula against the exhaustive 2^k oracle.
  for (int k = 1; k <= 5; ++k)
    for (const Rational q : {Rational(-1, 2), Rational(0), Rational(1, 2),
                             Rational(1), Rational(-1), Rational(3, 7)}) {
      const auto [mean, second] = z_moments_exhaustive(k, q);
      CHECK(mean == z_mean(k, q));
      CHECK(second - mean * mean == z_variance(k, q));
    }

  // The flat-exponent variant is not the variance of W: already at k = 2 it
  // disagrees with the exhaustive oracle for generic q.  The two coincide
  // for k = 1 and at q in {0, 1}.
  for (const Rational q : {Rational(1, 2), Rational(-1)}) {
    const auto [mean2, second2] = z_moments_exhaustive(2, q);
    CHECK(z_variance_flat_exponent(2, q) != second2 - mean2 * mean2);
  }
  for (const Rational q : {Rational(0), Rational(1)})
    CHECK(z_variance_flat_exponent(2, q) == z_variance(2, q));
  for (const Rational q : {Rational(1, 2), Rational(-2, 3)})
    CHECK(z_variance_flat_exponent(1, q) == z_variance(1, q));
}
