// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one pass/fail line per criterion.  Run with no
// arguments for the full suite or `--criterion N` (repeatable) to select.

#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qcube/experiments.hpp"
#include "qcube/fock_vector.hpp"
#include "qcube/operator.hpp"
#include "qcube/q_combinatorics.hpp"
#include "qcube/spectral.hpp"
#include "qcube/weighted_graph.hpp"

using namespace qcube;

namespace {

SignFunctionPtr make_eps(int n, const Rational& q, std::uint64_t seed) {
  return std::make_shared<SignFunction>(
      SignFunction::sample(n, SignLaw{q, seed}));
}

const std::vector<Rational> kQGrid{Rational(-1, 2), Rational(0),
                                   Rational(1, 2)};

bool criterion_commutation(std::string& detail) {
  int checked = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 7;  // n in {2,...,8}
    const Rational q = kQGrid[t % kQGrid.size()];
    const SignFunctionPtr eps = make_eps(n, q, 9000 + t);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        for (std::uint32_t a = 0; a < (std::uint32_t{1} << n); ++a) {
          const RationalVector basis = RationalVector::basis(n, a);
          if (i == j) {
            if (!(gamma_apply(*eps, i, gamma_apply(*eps, i, basis)) == basis))
              return false;
            continue;
          }
          const RationalVector lhs =
              gamma_apply(*eps, i, gamma_apply(*eps, j, basis));
          RationalVector rhs =
              gamma_apply(*eps, j, gamma_apply(*eps, i, basis));
          for (Rational& c : rhs.coeff) c *= Rational((*eps)(i, j));
          if (!(lhs == rhs)) return false;
          ++checked;
        }
  }
  detail = std::to_string(checked) + " pair/basis checks, exact";
  return true;
}

bool criterion_hermite_base(std::string& detail) {
  int cases = 0;
  for (int n = 2; n <= 10; ++n)
    for (std::uint64_t s = 0; s < 3; ++s) {
      const Rational q = kQGrid[(n + s) % kQGrid.size()];
      // k = 1 recurrence is exactly X_{n,2} = X_{n,1}^2 - I.
      if (check_recurrence(make_eps(n, q, 9100 + 10 * n + s), 1) != 0)
        return false;
      ++cases;
    }
  detail = std::to_string(cases) + " sign tables, zero deviation";
  return true;
}

bool criterion_recurrence(std::string& detail) {
  int cases = 0;
  for (int t = 0; t < 20; ++t) {
    const int n = 4 + t % 7;  // n in {4,...,10}
    const Rational q = kQGrid[t % kQGrid.size()];
    const SignFunctionPtr eps = make_eps(n, q, 9200 + t);
    for (int k = 1; k <= 3 && k + 1 <= n; ++k) {
      if (check_recurrence(eps, k) != 0) return false;
      ++cases;
    }
  }
  detail = std::to_string(cases) + " (eps, k) cells, zero deviation";
  return true;
}

bool criterion_limit_oracle(std::string& detail) {
  const long catalan[] = {1, 1, 2, 5, 14, 42, 132};
  for (int m = 0; m <= 12; m += 2)
    if (q_gaussian_moment(m, Rational(0)) != catalan[m / 2]) return false;
  const long dfact[] = {1, 1, 3, 15, 105, 945};
  for (int m = 0; m <= 10; m += 2)
    if (q_gaussian_moment(m, Rational(1)) != dfact[m / 2]) return false;
  for (int m = 0; m <= 12; m += 2)
    if (q_gaussian_moment(m, Rational(-1)) != 1) return false;
  if (!(q_gaussian_moment_poly(4) == QPolynomial({BigInt(2), BigInt(1)})))
    return false;
  if (!(q_gaussian_moment_poly(6) ==
        QPolynomial({BigInt(5), BigInt(6), BigInt(3), BigInt(1)})))
    return false;
  for (int m = 0; m <= 10; ++m)
    for (const Rational& q : kQGrid)
      if (q_gaussian_moment(m, q) != q_gaussian_moment_jacobi(m, q))
        return false;
  detail = "Catalan/double-factorial/Bernoulli rows, m4 = 2+q, m6 = "
           "5+6q+3q^2+q^3, Jacobi oracle agreement";
  return true;
}

bool criterion_graph_operator(std::string& detail) {
  int cases = 0;
  for (int t = 0; t < 20; ++t) {
    const int n = 4 + t % 5;  // n in {4,...,8}
    const Rational q = kQGrid[t % kQGrid.size()];
    const SignFunctionPtr eps = make_eps(n, q, 9300 + t);
    for (int k = 1; k <= 3 && k <= n; ++k) {
      const WeightedGraph g = build_weighted_distance_k_graph(*eps, k);
      const FockOperator adj = adjacency_operator(g);
      const FockOperator x = build_x_operator(eps, k);
      const Rational kfact(factorial(k));
      const auto a_entries = adj.to_entries();
      auto x_entries = x.to_entries();
      for (SparseEntry& e : x_entries) e.weight /= kfact;
      if (a_entries.size() != x_entries.size()) return false;
      for (std::size_t i = 0; i < a_entries.size(); ++i)
        if (a_entries[i].source != x_entries[i].source ||
            a_entries[i].target != x_entries[i].target ||
            a_entries[i].weight != x_entries[i].weight)
          return false;
      ++cases;
    }
  }
  detail = std::to_string(cases) + " graphs, entrywise exact";
  return true;
}

bool criterion_extremes(std::string& detail) {
  for (int n = 2; n <= 16; ++n) {
    const auto eps = std::make_shared<SignFunction>(
        SignFunction::constant(n, +1));
    const ScaledMoment m4 = vacuum_moment(build_x_operator(eps, 1), 4);
    if (m4.exact_value() != Rational(3) - frac(2, n)) return false;
  }
  for (int n = 2; n <= 10; ++n) {
    const auto eps = std::make_shared<SignFunction>(
        SignFunction::constant(n, -1));
    const FockOperator x = build_x_operator(eps, 1);
    for (std::uint32_t a = 0; a < (std::uint32_t{1} << n); ++a) {
      const RationalVector basis = RationalVector::basis(n, a);
      const RationalVector xx = x.apply_raw(x.apply_raw(basis));
      // raw X^2 = n I at q = -1
      RationalVector scaled = basis;
      for (Rational& c : scaled.coeff) c *= n;
      if (!(xx == scaled)) return false;
    }
    if (n >= 2 && !build_x_operator(eps, 2).terms().empty()) return false;
  }
  detail = "tau(X^4) = 3 - 2/n for n <= 16; X^2 = I and X_{n,2} = 0 at q = -1";
  return true;
}

// Pinned experiment seeds.  The trend statistics run at the configured
// sample counts, so each criterion is a fixed, reproducible experiment.
ExperimentConfig trend_config(std::uint64_t seed) {
  ExperimentConfig config;
  config.qs = kQGrid;
  config.n_grid = {8, 12, 16};
  config.ks = {1, 2, 3};
  config.m_max = 4;
  config.samples = 3;
  config.seed = seed;
  config.threads = 2;
  return config;
}

bool criterion_convergence_trend(std::string& detail) {
  const ConvergenceReport report = run_convergence(trend_config(543));
  int judged = 0;
  std::ostringstream worst;
  for (const TrendRow& t : report.trends) {
    if (t.m % 2 != 0) continue;
    ++judged;
    if (!(t.monotone && t.decay_ok))
      worst << " (q=" << to_string(t.q) << ",k=" << t.k << ",m=" << t.m
            << " monotone=" << t.monotone << " slope=" << t.decay_exponent
            << ")";
  }
  detail = std::to_string(judged) + " trends at m in {2,4}" + worst.str();
  return report.all_trends_pass;
}

bool criterion_joint_trend(std::string& detail) {
  ExperimentConfig config = trend_config(159);
  config.ks.clear();
  const ConvergenceReport report =
      run_joint_convergence(config, parse_word("1,2,1"));
  for (const ConvergenceCell& cell : report.cells)
    if (cell.ok && cell.limit != Rational(1) + cell.q) return false;
  std::ostringstream info;
  for (const TrendRow& t : report.trends)
    info << " q=" << to_string(t.q) << " slope="
         << (std::isinf(t.decay_exponent) ? std::string("-inf")
                                          : format_double(t.decay_exponent));
  detail = "word (1,2,1) vs 1+q;" + info.str();
  return report.all_trends_pass;
}

bool criterion_xy_gap(std::string& detail) {
  ExperimentConfig config;
  config.qs = {Rational(0), Rational(1, 2)};
  config.n_grid = {6, 8, 10, 12};
  config.ks = {1, 2};
  config.samples = 5;
  config.seed = 142;
  config.threads = 2;
  const XYGapReport report = run_xy_gap(config);
  // Exact identity at q = 1: ||X - Y||_2 = (k/n) ||X||_2.
  for (int n : {6, 8})
    for (int k : {1, 2}) {
      const auto eps =
          std::make_shared<SignFunction>(SignFunction::constant(n, +1));
      const FockOperator x = build_x_operator(eps, k);
      const FockOperator y = build_y_operator(eps, k, Rational(1));
      const Rational gap_sq = l2_norm_squared(
          linear_combination(Rational(1), x, Rational(-1), y));
      if (gap_sq != l2_norm_squared(x) * frac(k * k, n * n)) return false;
    }
  detail = "median ||X-Y||_2 decreasing on n in {6,8,10,12}; q=1 identity "
           "exact";
  return report.all_decreasing;
}

bool criterion_khinchine(std::string& detail) {
  double worst = 0;
  for (int k : {1, 2, 3})
    for (int p : {4, 6}) {
      const SignFunctionPtr eps = make_eps(8, Rational(0), 9500 + 10 * k + p);
      const KhinchineResult res =
          check_khinchine(eps, k, p, 100, 9600 + 10 * k + p);
      if (!res.pass) return false;
      worst = std::max({worst, res.worst_lower, res.worst_upper});
    }
  detail = "600 elements, worst normalized ratio " + format_double(worst);
  return true;
}

bool criterion_hypercontractivity(std::string& detail) {
  const double t_star = 0.5 * std::log(3.0);
  double worst = 0;
  for (int n : {4, 6, 8})
    for (double t : {t_star, t_star + 0.5}) {
      const SignFunctionPtr eps = make_eps(n, Rational(0), 9700 + n);
      const HypercontractivityResult res = check_hypercontractivity(
          eps, 2.0, 4.0, t, 100, 9800 + n + static_cast<int>(10 * t));
      if (!res.admissible || !res.pass) return false;
      worst = std::max(worst, res.worst_ratio);
    }
  detail = "p=2 -> r=4 at t in {ln(3)/2, ln(3)/2 + 0.5}, worst ratio " +
           format_double(worst);
  return true;
}

bool criterion_clt(std::string& detail) {
  std::ostringstream info;
  for (int k : {1, 2})
    for (const Rational& q : {Rational(0), Rational(1, 2)}) {
      const CltZResult res = run_clt_z(k, q, 4000, 10000, 5, 2);
      if (!res.formula_certified || !res.mean_ok || !res.variance_ok) {
        detail = "failed at k=" + std::to_string(k) + ", q=" + to_string(q) +
                 ": mean_dev=" + format_double(res.mean_abs_dev_se) +
                 " se units, var=" + format_double(res.variance.get_d()) +
                 " target=" + format_double(res.target_variance.get_d());
        return false;
      }
      info << " (k=" << k << ",q=" << to_string(q)
           << ": dev=" << format_double(res.mean_abs_dev_se) << "se)";
    }
  // The certified formula matches the exhaustive oracle for k <= 5.
  for (int k = 1; k <= 5; ++k)
    for (const Rational& q :
         {Rational(-1, 2), Rational(0), Rational(1, 2), Rational(9, 10)}) {
      const auto [mean, second] = z_moments_exhaustive(k, q);
      if (mean != z_mean(k, q)) return false;
      if (second - mean * mean != z_variance(k, q)) return false;
    }
  detail = "10^4 samples at n=4000;" + info.str();
  return true;
}

bool criterion_reproducibility(std::string& detail) {
  ExperimentConfig config;
  config.qs = {Rational(1, 2), Rational(-1, 2)};
  config.n_grid = {6, 8};
  config.ks = {1, 2};
  config.m_max = 4;
  config.samples = 3;
  config.seed = 777;
  const auto render = [](const ConvergenceReport& r) {
    std::ostringstream csv, js;
    write_convergence_csv(csv, r);
    write_convergence_json(js, r);
    return csv.str() + js.str();
  };
  config.threads = 1;
  const std::string serial = render(run_convergence(config));
  config.threads = 3;
  const std::string parallel = render(run_convergence(config));
  if (serial != parallel) return false;

  std::ostringstream clt1, clt4;
  write_clt_json(clt1, run_clt_z(2, Rational(1, 2), 500, 4000, 777, 1));
  write_clt_json(clt4, run_clt_z(2, Rational(1, 2), 500, 4000, 777, 4));
  if (clt1.str() != clt4.str()) return false;

  ExperimentConfig xy = config;
  xy.threads = 1;
  std::ostringstream xy1, xy2;
  write_xy_gap_json(xy1, run_xy_gap(xy));
  xy.threads = 3;
  write_xy_gap_json(xy2, run_xy_gap(xy));
  if (xy1.str() != xy2.str()) return false;
  detail = "convergence, clt-z and xy-gap reports byte-identical at 1 vs "
           "3/4 threads";
  return true;
}

struct Criterion {
  int id;
  const char* title;
  std::function<bool(std::string&)> run;
};

const std::vector<Criterion> kCriteria{
    {1, "exact commutation suite", criterion_commutation},
    {2, "Hermite base case X_{n,2} = X_{n,1}^2 - I", criterion_hermite_base},
    {3, "exact q-free recurrence", criterion_recurrence},
    {4, "limit oracle certification", criterion_limit_oracle},
    {5, "graph/operator equivalence", criterion_graph_operator},
    {6, "Bosonic and Fermionic closed forms", criterion_extremes},
    {7, "convergence trend", criterion_convergence_trend},
    {8, "joint convergence of the word (1,2,1)", criterion_joint_trend},
    {9, "X-Y gap decay", criterion_xy_gap},
    {10, "Khinchine inequality suite", criterion_khinchine},
    {11, "hypercontractivity suite", criterion_hypercontractivity},
    {12, "Z-statistic CLT", criterion_clt},
    {13, "thread-count reproducibility", criterion_reproducibility},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected.insert(std::atoi(argv[++i]));
    } else if (std::strcmp(argv[i], "--list") == 0) {
      for (const Criterion& c : kCriteria)
        std::cout << c.id << ": " << c.title << "\n";
      return 0;
    } else {
      std::cerr << "usage: qcube_acceptance [--criterion N]... [--list]\n";
      return 2;
    }
  }
  bool all_pass = true;
  for (const Criterion& c : kCriteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    std::string det;
    bool pass = false;
    try {
      pass = c.run(det);
    } catch (const std::exception& e) {
      det = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": "
              << c.title << " (" << format_double(secs) << " s"
              << (det.empty() ? "" : "; " + det) << ")" << std::endl;
    all_pass = all_pass && pass;
  }
  return all_pass ? 0 : 1;
}
