// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcube/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcube {

namespace {

Eigen::MatrixXd dense_matrix(const FockOperator& op) {
  const std::size_t dim = std::size_t{1} << op.space_exponent();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  const double f = op.normalization();
  for (const SparseEntry& e : op.to_entries())
    m(e.target, e.source) += f * e.weight.get_d();
  return m;
}

void check_cap(const FockOperator& op, int eigen_cap) {
  if (op.space_exponent() > eigen_cap)
    throw std::invalid_argument("dense eigensolve cap exceeded");
}

/// tau((op^* op)^{p/2}) via raw applications to the vacuum; p even.
double even_lp_power(const FockOperator& op, int p) {
  const FockOperator adj = adjoint(op);
  RealVector v = RealVector::vacuum(op.space_exponent());
  for (int i = 0; i < p / 2; ++i) {
    v = op.apply_normalized(v);
    v = adj.apply_normalized(v);
  }
  return v.coeff[0];
}

}  // namespace

Rational l2_norm_squared(const FockOperator& op) {
  // tau(op^* op) = ||op.1||^2; the squared tag divides by n^h, not n^{h/2}.
  Rational acc(0);
  if (op.kind() == FockOperator::Kind::GammaPoly) {
    for (const GammaTerm& t : op.terms()) acc += t.coeff * t.coeff;
  } else {
    for (const SparseEntry& e : op.to_entries())
      if (e.source == 0) acc += e.weight * e.weight;
  }
  acc *= op.scale() * op.scale();
  Rational out =
      acc / Rational(pow_bigint(op.space_exponent(), op.half_power()));
  out.canonicalize();
  return out;
}

std::vector<double> spectrum(const FockOperator& op, int eigen_cap) {
  if (!op.self_adjoint())
    throw std::invalid_argument("spectrum: operator not self-adjoint");
  check_cap(op, eigen_cap);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      dense_matrix(op), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

double lp_norm(const FockOperator& op, double p, int eigen_cap) {
  if (p < 1) throw std::invalid_argument("lp_norm: p must be >= 1");
  const double rounded = std::round(p);
  if (p == rounded && static_cast<long>(rounded) % 2 == 0)
    return std::pow(even_lp_power(op, static_cast<int>(rounded)), 1.0 / p);
  if (!op.self_adjoint())
    throw std::invalid_argument("lp_norm: non-even p needs self-adjoint input");
  check_cap(op, eigen_cap);
  const std::vector<double> ev = spectrum(op, eigen_cap);
  double acc = 0;
  for (double lambda : ev) acc += std::pow(std::abs(lambda), p);
  return std::pow(acc / static_cast<double>(ev.size()), 1.0 / p);
}

double element_l2_norm(const RealVector& element) {
  double acc = 0;
  for (double c : element.coeff) acc += c * c;
  return std::sqrt(acc);
}

double element_lp_norm(const SignFunction& eps, const RealVector& element,
                       double p, int eigen_cap) {
  if (p < 1) throw std::invalid_argument("element_lp_norm: p must be >= 1");
  if (p == 2.0) return element_l2_norm(element);
  const double rounded = std::round(p);
  if (p == rounded && static_cast<long>(rounded) % 2 == 0) {
    // tau((x^* x)^{p/2}): exact algebra powers, matrix-free.
    const RealVector xstar = adjoint_element(eps, element);
    const RealVector gram = algebra_multiply(eps, xstar, element);
    RealVector acc = gram;
    for (int i = 1; i < static_cast<int>(rounded) / 2; ++i)
      acc = algebra_multiply(eps, acc, gram);
    return std::pow(acc.coeff[0], 1.0 / p);
  }
  if (element.n > eigen_cap)
    throw std::invalid_argument("dense eigensolve cap exceeded");
  // Singular values of left multiplication by the element.
  const std::size_t dim = element.dim();
  Eigen::MatrixXd m(dim, dim);
  for (std::uint32_t b = 0; b < dim; ++b) {
    RealVector col = algebra_multiply(
        eps, element, RealVector::basis(element.n, b));
    for (std::uint32_t a = 0; a < dim; ++a) m(a, b) = col.coeff[a];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  double acc = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    acc += std::pow(svd.singularValues()[i], p);
  return std::pow(acc / static_cast<double>(dim), 1.0 / p);
}

std::vector<HistogramBin> make_histogram(const std::vector<double>& values,
                                         int bins) {
  if (values.empty()) return {};
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();
  if (bins <= 0) {
    const std::size_t nvals = sorted.size();
    const double q1 = sorted[nvals / 4];
    const double q3 = sorted[(3 * nvals) / 4];
    const double width = 2.0 * (q3 - q1) / std::cbrt(double(nvals));
    bins = width > 0 ? static_cast<int>(std::ceil((hi - lo) / width)) : 1;
    bins = std::clamp(bins, 1, 4096);
  }
  std::vector<HistogramBin> out(bins);
  const double span = hi > lo ? hi - lo : 1.0;
  for (int b = 0; b < bins; ++b) {
    out[b].lo = lo + span * b / bins;
    out[b].hi = lo + span * (b + 1) / bins;
  }
  for (double v : sorted) {
    int b = static_cast<int>((v - lo) / span * bins);
    b = std::clamp(b, 0, bins - 1);
    ++out[b].count;
  }
  return out;
}

}  // namespace qcube
