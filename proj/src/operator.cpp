// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcube/operator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace qcube {

namespace {

std::vector<int> subset_indices(std::uint32_t subset) {
  std::vector<int> out;
  for (std::uint32_t rest = subset; rest;) {
    const int bit = std::countr_zero(rest);
    rest &= rest - 1;
    out.push_back(bit + 1);
  }
  return out;
}

/// Visits every k-subset of {1..n} as a bitmask, ascending.
template <class Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  if (k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i + 1;
  while (true) {
    std::uint32_t mask = 0;
    for (int i : idx) mask |= std::uint32_t{1} << (i - 1);
    fn(mask, idx);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - (k - 1 - pos)) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
}

/// n * Z(tuple): integer total of the suffix-product sums.
BigInt z_numerator(const SignFunction& eps, std::span<const int> tuple) {
  std::uint64_t used = 0;
  for (int j : tuple) used |= std::uint64_t{1} << (j - 1);
  long total = 0;
  for (int i = 1; i <= eps.size(); ++i) {
    if (used & (std::uint64_t{1} << (i - 1))) continue;
    int suffix = 1;
    int row_sum = 1;
    for (int j = static_cast<int>(tuple.size()) - 1; j >= 0; --j) {
      suffix *= eps(i, tuple[j]);
      row_sum += suffix;
    }
    total += row_sum;
  }
  return BigInt(total);
}

bool gamma_poly_self_adjoint(const SignFunction* eps,
                             const std::vector<GammaTerm>& terms) {
  for (const GammaTerm& t : terms) {
    if (sgn(t.coeff) == 0) continue;
    if (std::popcount(t.subset) < 2) continue;
    if (!eps) return false;
    if (reversal_sign(*eps, t.subset) < 0) return false;
  }
  return true;
}

}  // namespace

double ScaledMoment::value() const {
  return coeff.get_d() * std::pow(static_cast<double>(n),
                                  -0.5 * static_cast<double>(half_power));
}

Rational ScaledMoment::exact_value() const {
  if (half_power % 2 != 0)
    throw std::logic_error("exact_value: odd half-power tag");
  Rational r = coeff / Rational(pow_bigint(n, half_power / 2));
  r.canonicalize();
  return r;
}

BigInt ScaledMoment::integer_numerator() const {
  if (coeff.get_den() != 1)
    throw std::logic_error("integer_numerator: non-integer moment");
  return coeff.get_num();
}

FockOperator FockOperator::identity(int n) {
  FockOperator op;
  op.n_ = n;
  op.half_power_ = 0;
  op.degree_ = 0;
  op.self_adjoint_ = true;
  op.terms_ = {GammaTerm{0, Rational(1)}};
  return op;
}

FockOperator FockOperator::zero(int n) {
  FockOperator op;
  op.n_ = n;
  op.self_adjoint_ = true;
  op.degree_ = 0;
  return op;
}

FockOperator FockOperator::gamma_polynomial(SignFunctionPtr eps, int n,
                                            std::vector<GammaTerm> terms,
                                            int half_power, Rational scale,
                                            int degree) {
  if (n < 1 || n > 30)
    throw std::invalid_argument("gamma_polynomial: n out of range");
  for (const GammaTerm& t : terms) {
    if (t.subset >> n)
      throw std::invalid_argument("gamma_polynomial: subset out of range");
    if (t.subset != 0 && !eps)
      throw std::invalid_argument("gamma_polynomial: sign table required");
  }
  if (eps && eps->size() < n)
    throw std::invalid_argument("gamma_polynomial: sign table too small");
  FockOperator op;
  op.n_ = n;
  op.half_power_ = half_power;
  op.degree_ = degree;
  op.scale_ = std::move(scale);
  op.eps_ = std::move(eps);
  op.terms_ = std::move(terms);
  std::sort(op.terms_.begin(), op.terms_.end(),
            [](const GammaTerm& a, const GammaTerm& b) {
              return a.subset < b.subset;
            });
  op.self_adjoint_ = gamma_poly_self_adjoint(op.eps_.get(), op.terms_);
  return op;
}

FockOperator FockOperator::sparse(int n, std::vector<SparseEntry> entries,
                                  int half_power, Rational scale,
                                  bool self_adjoint) {
  FockOperator op;
  op.n_ = n;
  op.half_power_ = half_power;
  op.scale_ = std::move(scale);
  op.self_adjoint_ = self_adjoint;
  op.kind_ = Kind::Sparse;
  op.entries_ = std::move(entries);
  for (const SparseEntry& e : op.entries_)
    if ((e.source >> n) || (e.target >> n))
      throw std::invalid_argument("sparse: entry out of range");
  return op;
}

RationalVector FockOperator::apply_scaled(const RationalVector& v) const {
  RationalVector out = apply_raw(v);
  if (scale_ != 1)
    for (Rational& c : out.coeff) c *= scale_;
  return out;
}

RealVector FockOperator::apply_normalized(const RealVector& v) const {
  RealVector out = apply_raw(v);
  const double f = normalization();
  if (f != 1.0)
    for (double& c : out.coeff) c *= f;
  return out;
}

double FockOperator::normalization() const {
  return scale_.get_d() * std::pow(static_cast<double>(n_),
                                   -0.5 * static_cast<double>(half_power_));
}

std::vector<SparseEntry> FockOperator::to_entries() const {
  std::vector<SparseEntry> out;
  if (kind_ == Kind::Sparse) {
    out = entries_;
  } else {
    const std::uint32_t dim = std::uint32_t{1} << n_;
    for (const GammaTerm& term : terms_) {
      if (sgn(term.coeff) == 0) continue;
      const std::vector<int> letters = subset_indices(term.subset);
      for (std::uint32_t a = 0; a < dim; ++a) {
        int sign = 1;
        for (int i : letters) sign *= eps_ ? eps_->vertex_sign(a, i) : 1;
        out.push_back(SparseEntry{a, a ^ term.subset,
                                  sign > 0 ? term.coeff : -term.coeff});
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const SparseEntry& a, const SparseEntry& b) {
              return std::tie(a.source, a.target) <
                     std::tie(b.source, b.target);
            });
  // Merge duplicates, drop zeros.
  std::vector<SparseEntry> merged;
  for (SparseEntry& e : out) {
    if (!merged.empty() && merged.back().source == e.source &&
        merged.back().target == e.target)
      merged.back().weight += e.weight;
    else
      merged.push_back(std::move(e));
  }
  std::erase_if(merged,
                [](const SparseEntry& e) { return sgn(e.weight) == 0; });
  return merged;
}

bool FockOperator::raw_is_integer() const {
  if (kind_ == Kind::Sparse) {
    for (const SparseEntry& e : entries_)
      if (e.weight.get_den() != 1) return false;
    return true;
  }
  for (const GammaTerm& t : terms_)
    if (t.coeff.get_den() != 1) return false;
  return true;
}

WordNormalForm word_normal_form(const SignFunction& eps,
                                std::span<const int> word) {
  std::vector<int> w(word.begin(), word.end());
  std::uint32_t subset = 0;
  for (int i : w) {
    if (i < 1 || i > eps.size())
      throw std::out_of_range("word_normal_form: index out of range");
    const std::uint32_t bit = std::uint32_t{1} << (i - 1);
    if (subset & bit)
      throw std::invalid_argument("word_normal_form: repeated index");
    subset |= bit;
  }
  int sign = 1;
  // Bubble sort; each adjacent swap of p > r picks up eps(p, r).
  for (std::size_t pass = 0; pass + 1 < w.size(); ++pass)
    for (std::size_t l = 0; l + 1 < w.size(); ++l)
      if (w[l] > w[l + 1]) {
        sign *= eps(w[l], w[l + 1]);
        std::swap(w[l], w[l + 1]);
      }
  return WordNormalForm{sign, subset};
}

BigInt permutation_sign_sum(const SignFunction& eps, std::uint32_t subset) {
  std::vector<int> word = subset_indices(subset);
  if (word.size() > 8)
    throw std::invalid_argument("permutation_sign_sum: k too large");
  BigInt total = 0;
  std::sort(word.begin(), word.end());
  do {
    total += word_normal_form(eps, word).sign;
  } while (std::next_permutation(word.begin(), word.end()));
  return total;
}

Rational z_statistic(const SignFunction& eps, std::span<const int> tuple) {
  return z_statistic_generic(
      [&eps](int i, int j) { return eps(i, j); }, eps.size(), tuple);
}

FockOperator build_x_operator(SignFunctionPtr eps, int k) {
  const int n = eps->size();
  if (k < 1 || k > n)
    throw std::invalid_argument("build_x_operator: need 1 <= k <= n");
  std::vector<GammaTerm> terms;
  for_each_subset(n, k, [&](std::uint32_t mask, const std::vector<int>&) {
    BigInt c = permutation_sign_sum(*eps, mask);
    if (c != 0) terms.push_back(GammaTerm{mask, Rational(c)});
  });
  return FockOperator::gamma_polynomial(std::move(eps), n, std::move(terms),
                                        /*half_power=*/k, Rational(1), k);
}

FockOperator build_y_core_operator(SignFunctionPtr eps, int k) {
  const int n = eps->size();
  if (k < 0 || k > n - 1)
    throw std::invalid_argument("build_y_core_operator: need 0 <= k <= n-1");
  std::vector<GammaTerm> terms;
  if (k == 0) {
    terms.push_back(GammaTerm{0, Rational(n)});
  } else {
    for_each_subset(n, k, [&](std::uint32_t mask, const std::vector<int>& ix) {
      std::vector<int> word = ix;
      BigInt d = 0;
      do {
        d += word_normal_form(*eps, word).sign * z_numerator(*eps, word);
      } while (std::next_permutation(word.begin(), word.end()));
      if (d != 0) terms.push_back(GammaTerm{mask, Rational(d)});
    });
  }
  return FockOperator::gamma_polynomial(std::move(eps), n, std::move(terms),
                                        /*half_power=*/k + 2, Rational(1), k);
}

FockOperator build_y_operator(SignFunctionPtr eps, int k, const Rational& q) {
  const int n = eps->size();
  if (k < 1 || k > n - 1)
    throw std::invalid_argument("build_y_operator: need 1 <= k <= n-1");
  // [k+1]_q as the geometric sum, regular at q = 1.
  Rational qint(0);
  Rational power(1);
  for (int j = 0; j <= k; ++j) {
    qint += power;
    power *= q;
  }
  if (sgn(qint) == 0)
    throw std::domain_error(
        "build_y_operator: [k+1]_q = 0; use the q-free core form");
  FockOperator core = build_y_core_operator(std::move(eps), k);
  return FockOperator::gamma_polynomial(core.sign_function(), n,
                                        core.terms(), k + 2,
                                        Rational(1) / qint, k);
}

FockOperator left_multiplication_operator(SignFunctionPtr eps,
                                          const RationalVector& element) {
  std::vector<GammaTerm> terms;
  for (std::uint32_t a = 0; a < element.coeff.size(); ++a)
    if (sgn(element.coeff[a]) != 0)
      terms.push_back(GammaTerm{a, element.coeff[a]});
  return FockOperator::gamma_polynomial(std::move(eps), element.n,
                                        std::move(terms), 0);
}

int gamma_word_sign(const SignFunction& eps, std::uint32_t subset,
                    std::uint32_t state) {
  int parity = 0;
  for (std::uint32_t rest = subset; rest;) {
    const int bit = std::countr_zero(rest);
    rest &= rest - 1;
    parity ^= (eps.vertex_sign(state, bit + 1) < 0) ? 1 : 0;
  }
  return parity ? -1 : 1;
}

int reversal_sign(const SignFunction& eps, std::uint32_t subset) {
  int parity = 0;
  for (std::uint32_t rest = subset; rest;) {
    const int bit = std::countr_zero(rest);
    rest &= rest - 1;
    parity ^= (eps.vertex_sign(subset, bit + 1) < 0) ? 1 : 0;
  }
  return parity ? -1 : 1;
}

FockOperator adjoint(const FockOperator& op) {
  if (op.kind() == FockOperator::Kind::Sparse) {
    std::vector<SparseEntry> entries = op.to_entries();
    for (SparseEntry& e : entries) std::swap(e.source, e.target);
    return FockOperator::sparse(op.space_exponent(), std::move(entries),
                                op.half_power(), op.scale(),
                                op.self_adjoint());
  }
  std::vector<GammaTerm> terms = op.terms();
  const SignFunctionPtr& eps = op.sign_function();
  for (GammaTerm& t : terms)
    if (eps && reversal_sign(*eps, t.subset) < 0) t.coeff = -t.coeff;
  return FockOperator::gamma_polynomial(eps, op.space_exponent(),
                                        std::move(terms), op.half_power(),
                                        op.scale(), op.degree());
}

FockOperator linear_combination(const Rational& a, const FockOperator& A,
                                const Rational& b, const FockOperator& B) {
  if (A.kind() != FockOperator::Kind::GammaPoly ||
      B.kind() != FockOperator::Kind::GammaPoly)
    throw std::invalid_argument("linear_combination: gamma polynomials only");
  if (A.space_exponent() != B.space_exponent())
    throw std::invalid_argument("linear_combination: dimension mismatch");
  SignFunctionPtr eps = A.sign_function() ? A.sign_function()
                                          : B.sign_function();
  if (A.sign_function() && B.sign_function() &&
      A.sign_function() != B.sign_function() &&
      !(*A.sign_function() == *B.sign_function()))
    throw std::invalid_argument("linear_combination: different sign tables");
  const int n = A.space_exponent();
  const int h = std::max(A.half_power(), B.half_power());
  if ((h - A.half_power()) % 2 != 0 || (h - B.half_power()) % 2 != 0)
    throw std::invalid_argument("linear_combination: tag parity mismatch");
  const Rational fa =
      a * A.scale() * Rational(pow_bigint(n, (h - A.half_power()) / 2));
  const Rational fb =
      b * B.scale() * Rational(pow_bigint(n, (h - B.half_power()) / 2));
  std::map<std::uint32_t, Rational> acc;
  for (const GammaTerm& t : A.terms()) acc[t.subset] += fa * t.coeff;
  for (const GammaTerm& t : B.terms()) acc[t.subset] += fb * t.coeff;
  std::vector<GammaTerm> terms;
  for (auto& [subset, coeff] : acc)
    if (sgn(coeff) != 0) terms.push_back(GammaTerm{subset, coeff});
  const int degree =
      A.degree() == B.degree() ? A.degree() : -1;
  return FockOperator::gamma_polynomial(std::move(eps), n, std::move(terms),
                                        h, Rational(1), degree);
}

namespace {

/// Sparse state: coefficients plus the list of (possibly) nonzero slots.
struct SparseState {
  RationalVector v;
  std::vector<std::uint32_t> support;

  static SparseState vacuum(int n) {
    SparseState s{RationalVector::vacuum(n), {0}};
    return s;
  }
};

/// One raw application visiting only the support of the input.
SparseState apply_raw_sparse(const FockOperator& op, const SparseState& in) {
  SparseState out{RationalVector::zero(in.v.n), {}};
  if (op.kind() == FockOperator::Kind::Sparse) {
    out.v = op.apply_raw(in.v);
    for (std::uint32_t a = 0; a < out.v.coeff.size(); ++a)
      if (sgn(out.v.coeff[a]) != 0) out.support.push_back(a);
    return out;
  }
  const SignFunctionPtr& eps = op.sign_function();
  std::vector<char> seen(in.v.coeff.size(), 0);
  for (const GammaTerm& term : op.terms()) {
    for (const std::uint32_t a : in.support) {
      const Rational& c = in.v.coeff[a];
      if (sgn(c) == 0) continue;
      const std::uint32_t b = a ^ term.subset;
      const int sign =
          term.subset ? gamma_word_sign(*eps, term.subset, a) : 1;
      if (sign > 0)
        out.v.coeff[b] += term.coeff * c;
      else
        out.v.coeff[b] -= term.coeff * c;
      if (!seen[b]) {
        seen[b] = 1;
        out.support.push_back(b);
      }
    }
  }
  return out;
}

Rational sparse_dot(const SparseState& a, const SparseState& b) {
  const SparseState& small = a.support.size() <= b.support.size() ? a : b;
  const SparseState& other = a.support.size() <= b.support.size() ? b : a;
  Rational acc(0);
  for (const std::uint32_t i : small.support)
    acc += small.v.coeff[i] * other.v.coeff[i];
  return acc;
}

}  // namespace

std::vector<ScaledMoment> vacuum_moment_table(const FockOperator& op,
                                              int m_max) {
  if (m_max < 0) throw std::invalid_argument("vacuum_moment_table: m < 0");
  const int n = op.space_exponent();
  std::vector<ScaledMoment> table;
  table.reserve(m_max + 1);
  if (op.self_adjoint()) {
    // tau(op^m) = <op^{m-j} 1, op^j 1>: only ceil(m_max/2) applications.
    std::vector<SparseState> powers;
    powers.push_back(SparseState::vacuum(n));
    for (int j = 1; j <= (m_max + 1) / 2; ++j)
      powers.push_back(apply_raw_sparse(op, powers.back()));
    Rational scale_power(1);
    for (int m = 0; m <= m_max; ++m) {
      Rational c = scale_power * sparse_dot(powers[m / 2], powers[m - m / 2]);
      c.canonicalize();
      table.push_back(ScaledMoment{c, m * op.half_power(), n});
      scale_power *= op.scale();
    }
    return table;
  }
  SparseState state = SparseState::vacuum(n);
  Rational scale_power(1);
  for (int m = 0; m <= m_max; ++m) {
    if (m > 0) {
      state = apply_raw_sparse(op, state);
      scale_power *= op.scale();
    }
    Rational c = scale_power * state.v.coeff[0];
    c.canonicalize();
    table.push_back(ScaledMoment{c, m * op.half_power(), n});
  }
  return table;
}

ScaledMoment vacuum_moment(const FockOperator& op, int m) {
  return vacuum_moment_table(op, m).back();
}

ScaledMoment mixed_vacuum_moment(std::span<const FockOperator* const> ops) {
  if (ops.empty()) return ScaledMoment{Rational(1), 0, 1};
  const int n = ops.front()->space_exponent();
  SparseState state = SparseState::vacuum(n);
  Rational scale(1);
  int half = 0;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const FockOperator* op = *it;
    if (op->space_exponent() != n)
      throw std::invalid_argument("mixed_vacuum_moment: dimension mismatch");
    state = apply_raw_sparse(*op, state);
    scale *= op->scale();
    half += op->half_power();
  }
  Rational c = scale * state.v.coeff[0];
  c.canonicalize();
  return ScaledMoment{c, half, n};
}

void write_sparse_operator(std::ostream& out, const FockOperator& op) {
  if (!op.raw_is_integer())
    throw std::invalid_argument(
        "write_sparse_operator: raw action is not integral");
  out << op.space_exponent() << " " << (op.degree() >= 0 ? op.degree() : 0)
      << " " << op.half_power() << "\n";
  for (const SparseEntry& e : op.to_entries())
    out << e.source << " " << e.target << " " << e.weight.get_num().get_str()
        << "\n";
}

}  // namespace qcube
