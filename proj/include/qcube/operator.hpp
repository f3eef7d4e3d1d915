// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "qcube/fock_vector.hpp"
#include "qcube/rational.hpp"
#include "qcube/sign_function.hpp"

namespace qcube {

/// Normal form of a gamma word with distinct letters:
/// gamma_{w_1}...gamma_{w_k} = sign * gamma-word of the sorted subset.
struct WordNormalForm {
  int sign = 1;
  std::uint32_t subset = 0;
};

/// One term coeff * gamma_J of a gamma-word combination (J a sorted subset,
/// encoded as a bitmask).
struct GammaTerm {
  std::uint32_t subset = 0;
  Rational coeff;
};

/// Raw matrix entry: action contributes weight * v[source] to out[target].
struct SparseEntry {
  std::uint32_t source = 0;
  std::uint32_t target = 0;
  Rational weight;
};

/// Exact vacuum expectation with integer-scaled normalization:
/// true value = coeff / n^{half_power/2}.
struct ScaledMoment {
  Rational coeff;
  int half_power = 0;
  int n = 1;

  double value() const;
  /// Exact rational value; requires half_power even.
  Rational exact_value() const;
  /// The integer numerator; requires coeff to be an integer.
  BigInt integer_numerator() const;
};

/// Self-adjoint-capable operator on H with a matrix-free raw action and the
/// normalization tag (h, scale): true operator = scale * raw / n^{h/2}.
///
/// Two carriers: a combination of gamma words (needs the sign table) or an
/// explicit sparse entry list.
class FockOperator {
 public:
  enum class Kind { GammaPoly, Sparse };

  static FockOperator identity(int n);
  static FockOperator zero(int n);
  static FockOperator gamma_polynomial(SignFunctionPtr eps, int n,
                                       std::vector<GammaTerm> terms,
                                       int half_power,
                                       Rational scale = Rational(1),
                                       int degree = -1);
  static FockOperator sparse(int n, std::vector<SparseEntry> entries,
                             int half_power, Rational scale,
                             bool self_adjoint);

  Kind kind() const { return kind_; }
  int space_exponent() const { return n_; }  // H has dimension 2^n
  int half_power() const { return half_power_; }
  const Rational& scale() const { return scale_; }
  bool self_adjoint() const { return self_adjoint_; }
  int degree() const { return degree_; }
  const std::vector<GammaTerm>& terms() const { return terms_; }
  const SignFunctionPtr& sign_function() const { return eps_; }

  /// Raw action only: no scale, no n^{h/2}.  Exact for rational scalars.
  template <class Scalar>
  FockVector<Scalar> apply_raw(const FockVector<Scalar>& v) const;

  /// scale * raw action; still exact.
  RationalVector apply_scaled(const RationalVector& v) const;

  /// Full normalized action scale * raw / n^{h/2} in floating point.
  RealVector apply_normalized(const RealVector& v) const;

  /// Explicit raw-action entries, sorted by (source, target), zeros dropped.
  std::vector<SparseEntry> to_entries() const;

  bool raw_is_integer() const;

  /// Normalization factor scale / n^{h/2} as a double.
  double normalization() const;

 private:
  FockOperator() = default;

  int n_ = 0;
  int half_power_ = 0;
  int degree_ = -1;
  Rational scale_ = Rational(1);
  bool self_adjoint_ = false;
  Kind kind_ = Kind::GammaPoly;
  SignFunctionPtr eps_;
  std::vector<GammaTerm> terms_;
  std::vector<SparseEntry> entries_;
};

/// sign and sorted subset of gamma_{w_1}...gamma_{w_k}; letters must be
/// distinct and in range.
WordNormalForm word_normal_form(const SignFunction& eps,
                                std::span<const int> word);

/// Sum of word_normal_form signs over all orderings of the subset.
BigInt permutation_sign_sum(const SignFunction& eps, std::uint32_t subset);

/// Z(i_1,...,i_k) = (1/n) sum over i not in the tuple of the k+1 suffix
/// products of eps(i, i_j).  `sign` is any callable (i, j) -> +-1.
template <class SignFn>
Rational z_statistic_generic(SignFn&& sign, int n, std::span<const int> tuple);

Rational z_statistic(const SignFunction& eps, std::span<const int> tuple);

/// X_{n,k}: normalized sum of gamma words over ordered distinct k-tuples.
/// Raw action is integer with tag h = k, scale 1.
FockOperator build_x_operator(SignFunctionPtr eps, int k);

/// q-free core of Y_{n,k}: sum of (n Z(tuple)) gamma words over ordered
/// distinct k-tuples, tag h = k+2, scale 1.  Equals [k+1]_q * Y_{n,k}.
/// k = 0 is allowed and yields n * I (the constant completion term).
FockOperator build_y_core_operator(SignFunctionPtr eps, int k);

/// Y_{n,k}: the core scaled by 1/[k+1]_q.  Throws when [k+1]_q = 0
/// (q = -1, k odd); use the core form there.
FockOperator build_y_operator(SignFunctionPtr eps, int k, const Rational& q);

/// Left multiplication by the algebra element with the given coefficients.
FockOperator left_multiplication_operator(SignFunctionPtr eps,
                                          const RationalVector& element);

/// Sign of reversing the gamma word of `subset`: product of eps(i,j) over
/// all pairs i < j in the subset.
int reversal_sign(const SignFunction& eps, std::uint32_t subset);

/// Sign of the gamma word of `subset` acting at basis state A:
/// product of vertex signs, all evaluated at A.
int gamma_word_sign(const SignFunction& eps, std::uint32_t subset,
                    std::uint32_t state);

FockOperator adjoint(const FockOperator& op);

/// a*A + b*B for gamma-word operators over the same sign table.  Tags are
/// aligned to max(h_A, h_B); the difference must be even.
FockOperator linear_combination(const Rational& a, const FockOperator& A,
                                const Rational& b, const FockOperator& B);

/// tau(op^m) by m successive raw applications to the vacuum.
ScaledMoment vacuum_moment(const FockOperator& op, int m);

/// tau(op^m) for all m = 0..m_max in one pass.
std::vector<ScaledMoment> vacuum_moment_table(const FockOperator& op,
                                              int m_max);

/// tau(op_1 ... op_r), applied right to left; tags add, scales multiply.
ScaledMoment mixed_vacuum_moment(std::span<const FockOperator* const> ops);

/// Product of algebra elements: (sum_A x_A gamma_A) applied to y.
template <class Scalar>
FockVector<Scalar> algebra_multiply(const SignFunction& eps,
                                    const FockVector<Scalar>& x,
                                    const FockVector<Scalar>& y);

/// Coefficients of x^*: coeff(A) times the reversal sign of A.
template <class Scalar>
FockVector<Scalar> adjoint_element(const SignFunction& eps,
                                   const FockVector<Scalar>& x);

/// Raw-action export: header "n k h", lines "source target integer_weight".
/// Requires an integer raw action.
void write_sparse_operator(std::ostream& out, const FockOperator& op);

// -- template implementations -----------------------------------------------

namespace detail {
inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_zero(double x) { return x == 0.0; }
inline Rational to_scalar(const Rational& c, const Rational*) { return c; }
inline double to_scalar(const Rational& c, const double*) { return c.get_d(); }
}  // namespace detail

template <class Scalar>
FockVector<Scalar> FockOperator::apply_raw(const FockVector<Scalar>& v) const {
  if (v.n != n_) throw std::invalid_argument("apply: dimension mismatch");
  FockVector<Scalar> out = FockVector<Scalar>::zero(n_);
  if (kind_ == Kind::Sparse) {
    for (const SparseEntry& e : entries_) {
      const Scalar& c = v.coeff[e.source];
      if (detail::is_zero(c)) continue;
      out.coeff[e.target] +=
          detail::to_scalar(e.weight, static_cast<Scalar*>(nullptr)) * c;
    }
    return out;
  }
  const std::size_t dim = v.coeff.size();
  for (const GammaTerm& term : terms_) {
    const std::uint32_t J = term.subset;
    // Per-letter sign masks: applying the word letter by letter from the
    // highest index down, every sign is evaluated at the original state.
    std::uint64_t masks[32];
    int k = 0;
    for (std::uint32_t rest = J; rest;) {
      const int bit = std::countr_zero(rest);
      rest &= rest - 1;
      masks[k++] = eps_->negative_mask(bit + 1) &
                   ((std::uint64_t{1} << bit) - 1);
    }
    const Scalar cpos =
        detail::to_scalar(term.coeff, static_cast<Scalar*>(nullptr));
    const Scalar cneg = -cpos;
    for (std::uint32_t a = 0; a < dim; ++a) {
      const Scalar& c = v.coeff[a];
      if (detail::is_zero(c)) continue;
      int parity = 0;
      for (int l = 0; l < k; ++l)
        parity ^= std::popcount(masks[l] & a) & 1;
      out.coeff[a ^ J] += (parity ? cneg : cpos) * c;
    }
  }
  return out;
}

template <class SignFn>
Rational z_statistic_generic(SignFn&& sign, int n,
                             std::span<const int> tuple) {
  const int k = static_cast<int>(tuple.size());
  std::uint64_t used = 0;
  for (int j : tuple) {
    if (j < 1 || j > n) throw std::out_of_range("z_statistic: index");
    const std::uint64_t bit = std::uint64_t{1} << (j - 1);
    if (used & bit) throw std::invalid_argument("z_statistic: repeated index");
    used |= bit;
  }
  BigInt total = 0;
  for (int i = 1; i <= n; ++i) {
    if (used & (std::uint64_t{1} << (i - 1))) continue;
    // Suffix products eps(i,i_{j+1})...eps(i,i_k) for j = k..0; the empty
    // product contributes the trailing +1.
    int suffix = 1;
    int row_sum = 1;
    for (int j = k - 1; j >= 0; --j) {
      suffix *= sign(i, tuple[j]);
      row_sum += suffix;
    }
    total += row_sum;
  }
  Rational z(total, n);
  z.canonicalize();
  return z;
}

template <class Scalar>
FockVector<Scalar> algebra_multiply(const SignFunction& eps,
                                    const FockVector<Scalar>& x,
                                    const FockVector<Scalar>& y) {
  if (x.n != y.n) throw std::invalid_argument("algebra_multiply: mismatch");
  FockVector<Scalar> out = FockVector<Scalar>::zero(x.n);
  for (std::uint32_t A = 0; A < x.coeff.size(); ++A) {
    const Scalar& cA = x.coeff[A];
    if (detail::is_zero(cA)) continue;
    std::uint64_t masks[32];
    int k = 0;
    for (std::uint32_t rest = A; rest;) {
      const int bit = std::countr_zero(rest);
      rest &= rest - 1;
      masks[k++] = eps.negative_mask(bit + 1) &
                   ((std::uint64_t{1} << bit) - 1);
    }
    const Scalar cneg = -cA;
    for (std::uint32_t b = 0; b < y.coeff.size(); ++b) {
      const Scalar& c = y.coeff[b];
      if (detail::is_zero(c)) continue;
      int parity = 0;
      for (int l = 0; l < k; ++l)
        parity ^= std::popcount(masks[l] & b) & 1;
      out.coeff[b ^ A] += (parity ? cneg : cA) * c;
    }
  }
  return out;
}

template <class Scalar>
FockVector<Scalar> adjoint_element(const SignFunction& eps,
                                   const FockVector<Scalar>& x) {
  FockVector<Scalar> out = x;
  for (std::uint32_t A = 0; A < out.coeff.size(); ++A)
    if (reversal_sign(eps, A) < 0) out.coeff[A] = -out.coeff[A];
  return out;
}

}  // namespace qcube
