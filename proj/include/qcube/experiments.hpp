// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qcube/operator.hpp"
#include "qcube/q_combinatorics.hpp"
#include "qcube/rational.hpp"
#include "qcube/sign_function.hpp"

namespace qcube {

struct ExperimentConfig {
  std::vector<Rational> qs;
  std::vector<int> n_grid;
  std::vector<int> ks;
  int m_max = 4;
  int samples = 3;
  std::uint64_t seed = 1;
  int threads = 1;
  int matrix_free_cap = 20;
  int eigen_cap = 12;
};

/// One factor of a mixed-moment word: X_k or Y_k.
struct WordFactor {
  char kind = 'X';  // 'X' or 'Y'
  int degree = 1;
};

std::vector<WordFactor> parse_word(const std::string& text);
std::string word_to_string(const std::vector<WordFactor>& word);

struct ConvergenceCell {
  Rational q;
  int k = 0;       // 0 in joint-word mode
  int m = 0;       // 0 in joint-word mode
  int n = 0;
  int sample = 0;
  Rational moment_coeff;  // exact moment = coeff / n^{half_power/2}
  int half_power = 0;
  Rational limit;
  Rational gap;  // exact |finite - limit|
  bool ok = true;
  std::string note;
};

struct TrendRow {
  Rational q;
  int k = 0;
  int m = 0;
  std::vector<int> ns;
  std::vector<Rational> median_gaps;
  bool monotone = false;
  double decay_exponent = 0;  // -inf when the gap reaches exact zero
  bool decay_ok = false;      // monotone decay criterion at kDecayThreshold
};

inline constexpr double kDecayThreshold = -0.3;

struct ConvergenceReport {
  ExperimentConfig config;
  std::vector<WordFactor> word;  // empty: plain per-operator moments
  std::vector<ConvergenceCell> cells;
  std::vector<TrendRow> trends;
  bool all_trends_pass = false;  // judged over even-m trends (joint: all)
};

ConvergenceReport run_convergence(const ExperimentConfig& config);
ConvergenceReport run_joint_convergence(const ExperimentConfig& config,
                                        const std::vector<WordFactor>& word);

void write_convergence_csv(std::ostream& out, const ConvergenceReport& r);
void write_convergence_json(std::ostream& out, const ConvergenceReport& r);
/// Lossless inverse of write_convergence_json (exact fields are strings).
ConvergenceReport read_convergence_json(std::istream& in);

/// Exact check of the q-free recurrence on all basis vectors:
/// raw(X_{k+1}) = raw(X_k) raw(X_1) - raw(core_{k-1}); returns the maximum
/// absolute deviation (exactly zero on success).
Rational check_recurrence(const SignFunctionPtr& eps, int k);

struct XYGapRow {
  Rational q;
  int k = 0;
  int n = 0;
  int sample = 0;
  Rational norm_sq;  // exact tau((X-Y)^*(X-Y))
  double norm = 0;
  double ratio_to_inv_sqrt_n = 0;
  bool ok = true;
  std::string note;
};

struct XYGapReport {
  ExperimentConfig config;
  int p = 2;
  std::vector<XYGapRow> rows;
  std::vector<TrendRow> trends;  // median norm_sq per n
  bool all_decreasing = false;
};

XYGapReport run_xy_gap(const ExperimentConfig& config, int p = 2);
void write_xy_gap_csv(std::ostream& out, const XYGapReport& r);
void write_xy_gap_json(std::ostream& out, const XYGapReport& r);

struct KhinchineResult {
  int n = 0, k = 0, p = 0, trials = 0;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  bool pass = false;
  int violations = 0;
  double worst_upper = 0;  // max ||X||_p / ((p-1)^{k/2} ||X||_2)
  double worst_lower = 0;  // max ||X||_2 / ||X||_p
};

/// Random homogeneous degree-k elements; checks
/// ||X||_2 <= ||X||_p <= (p-1)^{k/2} ||X||_2 within the tolerance.
KhinchineResult check_khinchine(const SignFunctionPtr& eps, int k, int p,
                                int trials, std::uint64_t seed,
                                double tolerance = 1e-9);

struct HypercontractivityResult {
  int n = 0, trials = 0;
  double p = 2, r = 4, t = 0;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  bool admissible = false;  // e^{-2t} <= (p-1)/(r-1)
  bool pass = false;
  int violations = 0;
  double worst_ratio = 0;  // max ||P_t X||_r / ||X||_p
};

HypercontractivityResult check_hypercontractivity(const SignFunctionPtr& eps,
                                                  double p, double r, double t,
                                                  int trials,
                                                  std::uint64_t seed,
                                                  double tolerance = 1e-9);

struct CltZResult {
  int k = 0, n = 0;
  Rational q;
  long samples = 0;
  std::uint64_t seed = 0;
  Rational mean;           // exact empirical mean of Z/[k+1]_q
  Rational variance;       // exact empirical variance of sqrt(n)(Z/[k+1]_q - 1)
  Rational target_variance;  // sigma^2 / [k+1]_q^2 from the certified formula
  double standardized_fourth = 0;
  double mean_abs_dev_se = 0;  // |mean - 1| in units of the standard error
  bool mean_ok = false;        // within 3 standard errors of 1
  bool variance_ok = false;    // within 5% of the target (exact comparison)
  bool formula_certified = false;  // certified variance == exhaustive oracle
};

/// Samples a fresh sign environment per draw (lazily, counter-keyed) and
/// evaluates Z at the fixed tuple (1..k).
CltZResult run_clt_z(int k, const Rational& q, int n, long samples,
                     std::uint64_t seed, int threads = 1);

void write_clt_json(std::ostream& out, const CltZResult& r);

std::string format_double(double v);  // 15 significant digits

}  // namespace qcube
