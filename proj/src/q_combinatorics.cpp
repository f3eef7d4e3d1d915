// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcube/q_combinatorics.hpp"

#include <algorithm>
#include <stdexcept>

namespace qcube {

void QPolynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational QPolynomial::eval(const Rational& q) const {
  Rational acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * q + *it;
  return acc;
}

std::string QPolynomial::to_string() const {
  if (c_.empty()) return "0";
  std::string out;
  for (int d = 0; d <= degree(); ++d) {
    if (c_[d] == 0) continue;
    const bool first = out.empty();
    BigInt v = c_[d];
    if (!first) {
      out += v < 0 ? " - " : " + ";
      if (v < 0) v = -v;
    }
    const bool unit = (v == 1 || v == -1) && d > 0;
    if (!unit)
      out += v.get_str();
    else if (v == -1)
      out += "-";
    if (d == 1)
      out += "q";
    else if (d > 1)
      out += "q^" + std::to_string(d);
  }
  return out;
}

QPolynomial& QPolynomial::operator+=(const QPolynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), BigInt(0));
  for (std::size_t d = 0; d < o.c_.size(); ++d) c_[d] += o.c_[d];
  trim();
  return *this;
}

QPolynomial& QPolynomial::operator-=(const QPolynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), BigInt(0));
  for (std::size_t d = 0; d < o.c_.size(); ++d) c_[d] -= o.c_[d];
  trim();
  return *this;
}

QPolynomial operator*(const QPolynomial& a, const QPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return QPolynomial();
  std::vector<BigInt> c(a.c_.size() + b.c_.size() - 1, BigInt(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return QPolynomial(std::move(c));
}

void QPolynomial::add_monomial(int d, const BigInt& v) {
  if (d >= static_cast<int>(c_.size())) c_.resize(d + 1, BigInt(0));
  c_[d] += v;
  trim();
}

XPolynomial XPolynomial::monomial(int d, Rational v) {
  std::vector<Rational> c(d + 1, Rational(0));
  c[d] = std::move(v);
  return XPolynomial(std::move(c));
}

void XPolynomial::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

Rational XPolynomial::eval(const Rational& x) const {
  Rational acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

XPolynomial& XPolynomial::operator+=(const XPolynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t d = 0; d < o.c_.size(); ++d) c_[d] += o.c_[d];
  trim();
  return *this;
}

XPolynomial& XPolynomial::operator-=(const XPolynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t d = 0; d < o.c_.size(); ++d) c_[d] -= o.c_[d];
  trim();
  return *this;
}

XPolynomial operator*(const XPolynomial& a, const XPolynomial& b) {
  if (a.c_.empty() || b.c_.empty()) return XPolynomial();
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return XPolynomial(std::move(c));
}

XPolynomial& XPolynomial::operator*=(const Rational& s) {
  for (Rational& v : c_) v *= s;
  trim();
  return *this;
}

Rational q_integer(int k, const Rational& q) {
  if (k < 0) throw std::invalid_argument("q_integer: k < 0");
  Rational acc(0);
  Rational power(1);
  for (int j = 0; j < k; ++j) {
    acc += power;
    power *= q;
  }
  return acc;
}

QPolynomial q_integer_poly(int k) {
  if (k < 0) throw std::invalid_argument("q_integer_poly: k < 0");
  return QPolynomial(std::vector<BigInt>(k, BigInt(1)));
}

Rational q_factorial(int k, const Rational& q) {
  Rational acc(1);
  for (int j = 1; j <= k; ++j) acc *= q_integer(j, q);
  return acc;
}

XPolynomial hermite_polynomial(int k, const Rational& q) {
  if (k < 0) throw std::invalid_argument("hermite_polynomial: k < 0");
  XPolynomial prev = XPolynomial::constant(Rational(1));
  if (k == 0) return prev;
  XPolynomial cur = XPolynomial::monomial(1);
  const XPolynomial x = XPolynomial::monomial(1);
  for (int j = 1; j < k; ++j) {
    XPolynomial scaled = prev;
    scaled *= q_integer(j, q);
    XPolynomial next = x * cur - scaled;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

namespace {

void enumerate_partitions(std::vector<int>& free_points, PairPartition& acc,
                          const std::function<void(const PairPartition&)>& fn) {
  if (free_points.empty()) {
    fn(acc);
    return;
  }
  // Pair the smallest free point with each remaining one.
  const int a = free_points.front();
  for (std::size_t pos = 1; pos < free_points.size(); ++pos) {
    const int b = free_points[pos];
    std::vector<int> rest;
    rest.reserve(free_points.size() - 2);
    for (std::size_t i = 1; i < free_points.size(); ++i)
      if (i != pos) rest.push_back(free_points[i]);
    acc.emplace_back(a, b);
    enumerate_partitions(rest, acc, fn);
    acc.pop_back();
  }
}

}  // namespace

void for_each_pair_partition(
    int points, const std::function<void(const PairPartition&)>& fn) {
  if (points < 0 || points % 2 != 0)
    throw std::invalid_argument("pair partitions need an even point count");
  std::vector<int> free_points(points);
  for (int i = 0; i < points; ++i) free_points[i] = i + 1;
  PairPartition acc;
  enumerate_partitions(free_points, acc, fn);
}

std::vector<PairPartition> pair_partitions(int points) {
  std::vector<PairPartition> out;
  for_each_pair_partition(points,
                          [&out](const PairPartition& pp) { out.push_back(pp); });
  return out;
}

int crossing_number(const PairPartition& pp) {
  int crossings = 0;
  for (std::size_t i = 0; i < pp.size(); ++i)
    for (std::size_t j = 0; j < pp.size(); ++j) {
      if (i == j) continue;
      // a < c < b < d with (a,b) = pp[i], (c,d) = pp[j]
      if (pp[i].first < pp[j].first && pp[j].first < pp[i].second &&
          pp[i].second < pp[j].second)
        ++crossings;
    }
  return crossings;
}

QPolynomial q_gaussian_moment_poly(int m) {
  if (m < 0) throw std::invalid_argument("q_gaussian_moment: m < 0");
  if (m % 2 != 0) return QPolynomial();
  QPolynomial poly;
  for_each_pair_partition(m, [&poly](const PairPartition& pp) {
    poly.add_monomial(crossing_number(pp), BigInt(1));
  });
  return poly;
}

Rational q_gaussian_moment(int m, const Rational& q) {
  return q_gaussian_moment_poly(m).eval(q);
}

Rational q_gaussian_moment_jacobi(int m, const Rational& q) {
  if (m < 0) throw std::invalid_argument("q_gaussian_moment_jacobi: m < 0");
  // Coefficient vector in the monic H-basis; multiplication by x maps
  // e_j -> e_{j+1} + [j]_q e_{j-1}.
  std::vector<Rational> c(m + 2, Rational(0));
  c[0] = 1;
  for (int step = 0; step < m; ++step) {
    std::vector<Rational> next(m + 2, Rational(0));
    for (int j = 0; j <= m; ++j) {
      if (sgn(c[j]) == 0) continue;
      next[j + 1] += c[j];
      if (j >= 1) next[j - 1] += q_integer(j, q) * c[j];
    }
    c = std::move(next);
  }
  return c[0];
}

QPolynomial q_gaussian_moment_jacobi_poly(int m) {
  if (m < 0) throw std::invalid_argument("q_gaussian_moment_jacobi: m < 0");
  std::vector<QPolynomial> c(m + 2);
  c[0] = QPolynomial::constant(BigInt(1));
  for (int step = 0; step < m; ++step) {
    std::vector<QPolynomial> next(m + 2);
    for (int j = 0; j <= m; ++j) {
      if (c[j].is_zero()) continue;
      next[j + 1] += c[j];
      if (j >= 1) next[j - 1] += q_integer_poly(j) * c[j];
    }
    c = std::move(next);
  }
  return c[0];
}

Rational limit_moment(std::span<const int> degrees, const Rational& q) {
  XPolynomial prod = XPolynomial::constant(Rational(1));
  for (int k : degrees) prod = prod * hermite_polynomial(k, q);
  Rational acc(0);
  for (int d = 0; d <= prod.degree(); ++d) {
    const Rational& c = prod.coeff(d);
    if (sgn(c) != 0) acc += c * q_gaussian_moment(d, q);
  }
  return acc;
}

Rational z_mean(int k, const Rational& q) { return q_integer(k + 1, q); }

Rational z_variance(int k, const Rational& q) {
  if (k < 1) throw std::invalid_argument("z_variance: k < 1");
  Rational second(k + 1);
  Rational qd(1);
  for (int d = 1; d <= k; ++d) {
    qd *= q;
    second += Rational(2 * (k + 1 - d)) * qd;
  }
  const Rational mean = q_integer(k + 1, q);
  return second - mean * mean;
}

Rational z_variance_flat_exponent(int k, const Rational& q) {
  if (k < 1) throw std::invalid_argument("z_variance_flat_exponent: k < 1");
  const Rational qk = pow_rational(q, k);
  Rational second(k + 1);
  for (int d = 1; d <= k; ++d) second += Rational(2 * (k + 1 - d)) * qk;
  const Rational mean = q_integer(k + 1, q);
  return second - mean * mean;
}

std::pair<Rational, Rational> z_moments_exhaustive(int k, const Rational& q) {
  if (k < 1 || k > 24)
    throw std::invalid_argument("z_moments_exhaustive: k out of range");
  const Rational p_minus = (Rational(1) - q) / 2;
  const Rational p_plus = (Rational(1) + q) / 2;
  Rational mean(0);
  Rational second(0);
  for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << k); ++bits) {
    // bit j set: the sign eps(i, i_{j+1}) is -1.
    Rational prob(1);
    int suffix = 1;
    long w = 1;
    for (int j = k - 1; j >= 0; --j) {
      const bool negative = (bits >> j) & 1;
      prob *= negative ? p_minus : p_plus;
      suffix *= negative ? -1 : 1;
      w += suffix;
    }
    mean += prob * Rational(w);
    second += prob * Rational(w * w);
  }
  return {mean, second};
}

}  // namespace qcube
