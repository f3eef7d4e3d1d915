// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace qcube {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Canonical "num/den" rendering; integers print without the "/1".
inline std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// "num/den" with the denominator always explicit (file formats).
inline std::string to_fraction_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Parses "3", "-1/2" or a plain decimal such as "0.25" into an exact rational.
Rational parse_rational(const std::string& text);

/// Canonicalized num/den (the raw two-argument mpq constructor is not).
inline Rational frac(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}
inline Rational frac(long num, long den) {
  return frac(BigInt(num), BigInt(den));
}

/// r^e for integer e >= 0.
inline Rational pow_rational(const Rational& r, unsigned long e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), r.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), r.get_den_mpz_t(), e);
  out.canonicalize();
  return out;
}

inline BigInt pow_bigint(const BigInt& b, unsigned long e) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), e);
  return out;
}

inline BigInt factorial(unsigned long k) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), k);
  return out;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

}  // namespace qcube
