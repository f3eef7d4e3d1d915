// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "qcube/rational.hpp"
#include "qcube/sign_function.hpp"

namespace qcube {

/// Element of the 2^n-dimensional space H, indexed by subset bitmask.
/// Doubles as an algebra element via the identification X <-> X.1.
template <class Scalar>
struct FockVector {
  int n = 0;
  std::vector<Scalar> coeff;

  static FockVector zero(int n) {
    FockVector v;
    v.n = n;
    v.coeff.assign(std::size_t{1} << n, Scalar(0));
    return v;
  }

  /// The cyclic vector 1: coefficient 1 on the empty subset.
  static FockVector vacuum(int n) {
    FockVector v = zero(n);
    v.coeff[0] = Scalar(1);
    return v;
  }

  static FockVector basis(int n, std::uint32_t subset) {
    FockVector v = zero(n);
    v.coeff.at(subset) = Scalar(1);
    return v;
  }

  std::size_t dim() const { return coeff.size(); }

  bool operator==(const FockVector& other) const {
    return n == other.n && coeff == other.coeff;
  }
};

using RationalVector = FockVector<Rational>;
using RealVector = FockVector<double>;

template <class Scalar>
Scalar dot(const FockVector<Scalar>& u, const FockVector<Scalar>& v) {
  if (u.n != v.n) throw std::invalid_argument("dot: dimension mismatch");
  Scalar acc(0);
  for (std::size_t a = 0; a < u.coeff.size(); ++a) acc += u.coeff[a] * v.coeff[a];
  return acc;
}

inline RealVector to_real(const RationalVector& v) {
  RealVector out = RealVector::zero(v.n);
  for (std::size_t a = 0; a < v.coeff.size(); ++a)
    out.coeff[a] = v.coeff[a].get_d();
  return out;
}

/// gamma_i v: basis action x_A -> s x_{A xor {i}} with s the product of
/// eps(i,j) over j in A, j < i, extended linearly.
template <class Scalar>
FockVector<Scalar> gamma_apply(const SignFunction& eps, int i,
                               const FockVector<Scalar>& v) {
  if (i < 1 || i > v.n) throw std::out_of_range("gamma_apply: index");
  if (eps.size() < v.n)
    throw std::invalid_argument("gamma_apply: sign table too small");
  FockVector<Scalar> out = FockVector<Scalar>::zero(v.n);
  const std::uint32_t flip = std::uint32_t{1} << (i - 1);
  for (std::uint32_t a = 0; a < v.coeff.size(); ++a) {
    const Scalar& c = v.coeff[a];
    if (c == Scalar(0)) continue;
    if (eps.vertex_sign(a, i) > 0)
      out.coeff[a ^ flip] += c;
    else
      out.coeff[a ^ flip] -= c;
  }
  return out;
}

/// N v: scales coeff(A) by |A|.
template <class Scalar>
FockVector<Scalar> number_operator_apply(const FockVector<Scalar>& v) {
  FockVector<Scalar> out = v;
  for (std::uint32_t a = 0; a < out.coeff.size(); ++a)
    out.coeff[a] *= Scalar(std::popcount(a));
  return out;
}

/// "bitmask value" lines, nonzero entries in ascending bitmask order.
void write_vector(std::ostream& out, const RationalVector& v);
RationalVector read_vector(std::istream& in, int n);

/// Ornstein-Uhlenbeck semigroup in coefficient form: coeff(A) * e^{-t|A|}.
inline RealVector ou_semigroup(double t, const RealVector& v) {
  if (t < 0) throw std::invalid_argument("ou_semigroup: t must be >= 0");
  RealVector out = v;
  std::vector<double> decay(v.n + 1);
  for (int d = 0; d <= v.n; ++d) decay[d] = std::exp(-t * d);
  for (std::uint32_t a = 0; a < out.coeff.size(); ++a)
    out.coeff[a] *= decay[std::popcount(a)];
  return out;
}

}  // namespace qcube
