// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcube/rational.hpp"

namespace qcube {

/// Integer-coefficient polynomial in the deformation parameter q.
class QPolynomial {
 public:
  QPolynomial() = default;
  explicit QPolynomial(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) {
    trim();
  }
  static QPolynomial constant(BigInt v) { return QPolynomial({std::move(v)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const BigInt& coeff(int d) const {
    static const BigInt kZero(0);
    return d >= 0 && d < static_cast<int>(c_.size()) ? c_[d] : kZero;
  }
  const std::vector<BigInt>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  Rational eval(const Rational& q) const;
  std::string to_string() const;  // e.g. "5 + 6q + 3q^2 + q^3"

  QPolynomial& operator+=(const QPolynomial& o);
  QPolynomial& operator-=(const QPolynomial& o);
  friend QPolynomial operator+(QPolynomial a, const QPolynomial& b) {
    return a += b;
  }
  friend QPolynomial operator-(QPolynomial a, const QPolynomial& b) {
    return a -= b;
  }
  friend QPolynomial operator*(const QPolynomial& a, const QPolynomial& b);
  bool operator==(const QPolynomial& o) const { return c_ == o.c_; }

  /// Adds v * q^d.
  void add_monomial(int d, const BigInt& v);

 private:
  void trim();
  std::vector<BigInt> c_;  // c_[d] multiplies q^d
};

/// Rational-coefficient polynomial in a single commuting variable x;
/// carries q-Hermite expansions and their products.
class XPolynomial {
 public:
  XPolynomial() = default;
  explicit XPolynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    trim();
  }
  static XPolynomial constant(Rational v) { return XPolynomial({std::move(v)}); }
  static XPolynomial monomial(int d, Rational v = Rational(1));

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Rational& coeff(int d) const {
    static const Rational kZero(0);
    return d >= 0 && d < static_cast<int>(c_.size()) ? c_[d] : kZero;
  }
  Rational eval(const Rational& x) const;

  XPolynomial& operator+=(const XPolynomial& o);
  XPolynomial& operator-=(const XPolynomial& o);
  friend XPolynomial operator+(XPolynomial a, const XPolynomial& b) {
    return a += b;
  }
  friend XPolynomial operator-(XPolynomial a, const XPolynomial& b) {
    return a -= b;
  }
  friend XPolynomial operator*(const XPolynomial& a, const XPolynomial& b);
  XPolynomial& operator*=(const Rational& s);
  bool operator==(const XPolynomial& o) const { return c_ == o.c_; }

 private:
  void trim();
  std::vector<Rational> c_;
};

/// [k]_q = 1 + q + ... + q^{k-1}, as a geometric sum so q = 1 is regular.
Rational q_integer(int k, const Rational& q);
QPolynomial q_integer_poly(int k);

/// [k]_q! = [1]_q [2]_q ... [k]_q.
Rational q_factorial(int k, const Rational& q);

/// Monic q-Hermite polynomial H_k from H_0 = 1, H_1 = x and
/// x H_k = H_{k+1} + [k]_q H_{k-1}.
XPolynomial hermite_polynomial(int k, const Rational& q);

/// Pair partition of {1..2m}: disjoint pairs (a,b), a < b, covering the set.
using PairPartition = std::vector<std::pair<int, int>>;

/// Visits all (2m-1)!! pair partitions of {1..points}; `points` must be even.
void for_each_pair_partition(int points,
                             const std::function<void(const PairPartition&)>& fn);
std::vector<PairPartition> pair_partitions(int points);

/// Number of interleaved pairs a < c < b < d.
int crossing_number(const PairPartition& pp);

/// m-th moment of the q-Gaussian variable as a polynomial in q:
/// coefficient of q^c counts the pair partitions with crossing number c.
/// Zero polynomial for odd m.
QPolynomial q_gaussian_moment_poly(int m);
Rational q_gaussian_moment(int m, const Rational& q);

/// Independent oracle: moments of the Jacobi operator of the q-Hermite
/// recurrence, computed in the monic basis (no square roots, exact).
Rational q_gaussian_moment_jacobi(int m, const Rational& q);
QPolynomial q_gaussian_moment_jacobi_poly(int m);

/// tau(prod_i H_{k_i}(G_q)); all factors commute (one variable).
Rational limit_moment(std::span<const int> degrees, const Rational& q);

/// Mean of the Z-statistic summand W: [k+1]_q.
Rational z_mean(int k, const Rational& q);

/// Certified variance of W: (k+1) + 2 sum_{d=1}^{k} (k+1-d) q^d - [k+1]_q^2,
/// with the covariance exponent equal to the index distance d.
Rational z_variance(int k, const Rational& q);

/// Variant with a lag-independent covariance exponent q^k for every term.
/// Disagrees with the exhaustive oracle except at q in {0, +1, -1}; kept so
/// the discrepancy is checkable rather than silent.
Rational z_variance_flat_exponent(int k, const Rational& q);

/// Exhaustive oracle: (E W, E W^2) by enumerating all 2^k sign assignments.
std::pair<Rational, Rational> z_moments_exhaustive(int k, const Rational& q);

}  // namespace qcube
