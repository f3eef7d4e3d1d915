// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "qcube/rational.hpp"
#include "qcube/rng.hpp"

namespace qcube {

/// Law of the random off-diagonal signs: P(-1) = (1-q)/2, P(+1) = (1+q)/2.
struct SignLaw {
  Rational q;
  std::uint64_t seed = 0;
};

/// Symmetric choice-of-sign table eps : {1..n}^2 -> {+1,-1} with eps(i,i) = -1.
///
/// The table is dense; in addition each row i carries the bitmask of
/// {j : eps(i,j) = -1} so that sign products over subsets reduce to a
/// popcount parity.  Immutable after construction, safe to share.
class SignFunction {
 public:
  /// All off-diagonal entries equal to `value` (+1 or -1).
  static SignFunction constant(int n, int value);

  /// Upper-triangle entries drawn i.i.d. under `law`, mirrored down;
  /// deterministic in (n, law).
  static SignFunction sample(int n, const SignLaw& law);

  static SignFunction from_text(std::istream& in);
  static SignFunction from_text(const std::string& text);
  void to_text(std::ostream& out) const;
  std::string to_text() const;

  int size() const { return n_; }
  const SignLaw& law() const { return law_; }

  /// Entry eps(i,j), 1-based indices.
  int operator()(int i, int j) const { return signs_[idx(i, j)]; }

  /// Bitmask (bit j-1) of the columns j <= 64 where eps(i,j) = -1.
  std::uint64_t negative_mask(int i) const { return neg_mask_[i - 1]; }

  /// Product of eps(i,j) over j < i with bit j-1 set in r.  O(1).
  int vertex_sign(std::uint64_t r, int i) const {
    const std::uint64_t below = (std::uint64_t{1} << (i - 1)) - 1;
    const int parity = std::popcount(neg_mask_[i - 1] & r & below) & 1;
    return 1 - 2 * parity;
  }

  /// Product of eps(i,j) over ALL j != i with bit j-1 set in r.
  int row_sign(std::uint64_t r, int i) const {
    const std::uint64_t cleared = r & ~(std::uint64_t{1} << (i - 1));
    const int parity = std::popcount(neg_mask_[i - 1] & cleared) & 1;
    return 1 - 2 * parity;
  }

  bool operator==(const SignFunction& other) const {
    return n_ == other.n_ && signs_ == other.signs_;
  }

 private:
  SignFunction(int n, SignLaw law);
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i - 1) * n_ + (j - 1);
  }
  void set_pair(int i, int j, int value);
  void rebuild_masks();

  int n_;
  SignLaw law_;
  std::vector<std::int8_t> signs_;
  std::vector<std::uint64_t> neg_mask_;
};

using SignFunctionPtr = std::shared_ptr<const SignFunction>;

/// Threshold t with P(u64 < t) = (1-q)/2 for a uniform 64-bit draw.
/// q = -1 maps to the sentinel UINT64_MAX meaning "always -1".
std::uint64_t negative_sign_threshold(const Rational& q);

/// One +-1 draw given a uniform 64-bit value and the threshold above.
inline int sign_from_draw(std::uint64_t u, std::uint64_t threshold) {
  if (threshold == UINT64_MAX) return -1;
  return u < threshold ? -1 : +1;
}

}  // namespace qcube
