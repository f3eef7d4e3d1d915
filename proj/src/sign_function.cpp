// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcube/sign_function.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qcube {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    Rational r;
    if (r.set_str(text, 10) != 0 || r.get_den() == 0)
      throw std::invalid_argument("bad rational literal: " + text);
    r.canonicalize();
    return r;
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    Rational r;
    if (r.set_str(text, 10) != 0)
      throw std::invalid_argument("bad rational literal: " + text);
    r.canonicalize();
    return r;
  }
  // Decimal literal: scale the digits by a power of ten.
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  if (digits.empty() || digits == "-" || digits == "+")
    throw std::invalid_argument("bad rational literal: " + text);
  BigInt num;
  if (mpz_set_str(num.get_mpz_t(), digits.c_str(), 10) != 0)
    throw std::invalid_argument("bad rational literal: " + text);
  BigInt den = pow_bigint(10, text.size() - dot - 1);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::uint64_t negative_sign_threshold(const Rational& q) {
  if (q < -1 || q > 1) throw std::invalid_argument("q must lie in [-1, 1]");
  if (q == -1) return UINT64_MAX;
  // floor(2^63 * (den - num) / den): exact for every rational q, < 2^64.
  BigInt t = (q.get_den() - q.get_num()) << 63;
  t /= q.get_den();
  return mpz_get_ui(t.get_mpz_t());
}

SignFunction::SignFunction(int n, SignLaw law)
    : n_(n), law_(std::move(law)) {
  if (n < 1) throw std::invalid_argument("sign function needs n >= 1");
  signs_.assign(static_cast<std::size_t>(n) * n, -1);
  neg_mask_.assign(n, 0);
}

void SignFunction::set_pair(int i, int j, int value) {
  signs_[idx(i, j)] = static_cast<std::int8_t>(value);
  signs_[idx(j, i)] = static_cast<std::int8_t>(value);
}

void SignFunction::rebuild_masks() {
  for (int i = 1; i <= n_; ++i) {
    std::uint64_t mask = 0;
    const int jmax = n_ < 64 ? n_ : 64;
    for (int j = 1; j <= jmax; ++j)
      if (signs_[idx(i, j)] < 0) mask |= std::uint64_t{1} << (j - 1);
    neg_mask_[i - 1] = mask;
  }
}

SignFunction SignFunction::constant(int n, int value) {
  if (value != 1 && value != -1)
    throw std::invalid_argument("off-diagonal value must be +1 or -1");
  SignFunction eps(n, SignLaw{Rational(value), 0});
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) eps.set_pair(i, j, value);
  eps.rebuild_masks();
  return eps;
}

SignFunction SignFunction::sample(int n, const SignLaw& law) {
  SignFunction eps(n, law);
  const std::uint64_t threshold = negative_sign_threshold(law.q);
  const CounterRng rng(law.seed);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      eps.set_pair(i, j, sign_from_draw(rng.at(i, j), threshold));
  eps.rebuild_masks();
  return eps;
}

void SignFunction::to_text(std::ostream& out) const {
  out << "n=" << n_ << " q=" << to_string(law_.q) << " seed=" << law_.seed
      << "\n";
  for (int i = 1; i < n_; ++i) {
    for (int j = i + 1; j <= n_; ++j) out << ((*this)(i, j) > 0 ? '+' : '-');
    out << "\n";
  }
}

std::string SignFunction::to_text() const {
  std::ostringstream out;
  to_text(out);
  return out.str();
}

SignFunction SignFunction::from_text(std::istream& in) {
  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error("sign function: missing header");
  int n = 0;
  std::string q_text;
  std::uint64_t seed = 0;
  {
    std::istringstream hs(header);
    std::string field;
    while (hs >> field) {
      if (field.rfind("n=", 0) == 0)
        n = std::stoi(field.substr(2));
      else if (field.rfind("q=", 0) == 0)
        q_text = field.substr(2);
      else if (field.rfind("seed=", 0) == 0)
        seed = std::stoull(field.substr(5));
      else
        throw std::runtime_error("sign function: unknown header field " +
                                 field);
    }
  }
  if (n < 1) throw std::runtime_error("sign function: bad n in header");
  SignFunction eps(n, SignLaw{q_text.empty() ? Rational(0)
                                             : parse_rational(q_text),
                              seed});
  for (int i = 1; i < n; ++i) {
    std::string row;
    if (!std::getline(in, row))
      throw std::runtime_error("sign function: truncated at row " +
                               std::to_string(i));
    if (static_cast<int>(row.size()) != n - i)
      throw std::runtime_error("sign function: row " + std::to_string(i) +
                               " has wrong length");
    for (int j = i + 1; j <= n; ++j) {
      const char c = row[j - i - 1];
      if (c != '+' && c != '-')
        throw std::runtime_error("sign function: bad character in row " +
                                 std::to_string(i));
      eps.set_pair(i, j, c == '+' ? +1 : -1);
    }
  }
  eps.rebuild_masks();
  return eps;
}

SignFunction SignFunction::from_text(const std::string& text) {
  std::istringstream in(text);
  return from_text(in);
}

}  // namespace qcube
