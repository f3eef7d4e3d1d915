// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "qcube/fock_vector.hpp"
#include "qcube/operator.hpp"

namespace qcube {

/// Dense eigensolves materialize the full 2^n x 2^n matrix; keep n small.
inline constexpr int kDefaultEigenCap = 12;

/// Exact tau(op^* op): squared L^2(tau) norm of op as an algebra element.
Rational l2_norm_squared(const FockOperator& op);

/// Full sorted eigenvalue list (with multiplicity) of a self-adjoint
/// operator, at its true normalization.
std::vector<double> spectrum(const FockOperator& op,
                             int eigen_cap = kDefaultEigenCap);

/// ||op||_p = (tau(|op|^p))^{1/p}.  Even integer p uses exact trace powers
/// (matrix-free); other p goes through the dense spectrum.
double lp_norm(const FockOperator& op, double p,
               int eigen_cap = kDefaultEigenCap);

/// L^p norm of an algebra element (via left multiplication).
double element_lp_norm(const SignFunction& eps, const RealVector& element,
                       double p, int eigen_cap = kDefaultEigenCap);

/// ||x||_2 = sqrt(sum coeff^2): the basis {x_A} is orthonormal.
double element_l2_norm(const RealVector& element);

struct HistogramBin {
  double lo = 0;
  double hi = 0;
  long count = 0;
};

/// Freedman-Diaconis binning when bins == 0.
std::vector<HistogramBin> make_histogram(const std::vector<double>& values,
                                         int bins = 0);

}  // namespace qcube
