// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

// qcube: weighted distance-k hypercube graphs from random sign environments,
// exact vacuum moments, q-Hermite limit laws, and the associated inequality
// and CLT experiment suites.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "qcube/experiments.hpp"
#include "qcube/operator.hpp"
#include "qcube/q_combinatorics.hpp"
#include "qcube/spectral.hpp"
#include "qcube/weighted_graph.hpp"

using namespace qcube;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;

int default_threads() {
  if (const char* env = std::getenv("QCUBE_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return 1;
}

/// Writes to the path or stdout when the path is empty.
void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

struct CommonOpts {
  std::string q_text = "0";
  std::uint64_t seed = 1;
  int threads = default_threads();
  std::string out_path;
  std::string format = "csv";

  Rational q() const { return parse_rational(q_text); }
};

SignFunctionPtr load_or_sample_eps(const std::string& eps_path, int n,
                                   const Rational& q, std::uint64_t seed) {
  if (!eps_path.empty()) {
    std::ifstream in(eps_path);
    if (!in) throw std::runtime_error("cannot open sign file: " + eps_path);
    return std::make_shared<SignFunction>(SignFunction::from_text(in));
  }
  return std::make_shared<SignFunction>(
      SignFunction::sample(n, SignLaw{q, seed}));
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoi(item));
  if (out.empty()) throw std::runtime_error("empty integer list");
  return out;
}

std::vector<Rational> parse_q_list(const std::string& text) {
  std::vector<Rational> qs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) qs.push_back(parse_rational(item));
  if (qs.empty()) throw std::runtime_error("empty q list");
  return qs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qcube: weighted distance-k hypercube graphs, baby Fock operators "
      "and q-Hermite limit experiments"};
  app.require_subcommand(1);

  // ---- sample-eps ----------------------------------------------------------
  struct {
    int n = 8;
    CommonOpts common;
  } sample_opts;
  auto* sample_cmd =
      app.add_subcommand("sample-eps", "Sample a sign function and print it");
  sample_cmd->add_option("--n", sample_opts.n, "Index count")->required();
  sample_cmd->add_option("--q", sample_opts.common.q_text,
                         "Sign bias in [-1,1], exact rational");
  sample_cmd->add_option("--seed", sample_opts.common.seed, "Seed");
  sample_cmd->add_option("--out", sample_opts.common.out_path, "Output path");

  // ---- build-graph ---------------------------------------------------------
  struct {
    int n = 6, k = 2;
    CommonOpts common;
    std::string eps_path;
  } graph_opts;
  auto* graph_cmd = app.add_subcommand(
      "build-graph", "Weighted distance-k graph as an edge list");
  graph_cmd->add_option("--n", graph_opts.n, "Cube dimension")->required();
  graph_cmd->add_option("--k", graph_opts.k, "Hamming distance")->required();
  graph_cmd->add_option("--q", graph_opts.common.q_text, "Sign bias");
  graph_cmd->add_option("--seed", graph_opts.common.seed, "Seed");
  graph_cmd->add_option("--eps", graph_opts.eps_path,
                        "Sign function file (overrides --q/--seed)");
  graph_cmd->add_option("--out", graph_opts.common.out_path, "Output path");

  // ---- moments -------------------------------------------------------------
  struct {
    int n = 8, k = 1, m_max = 4;
    std::string op = "X";
    CommonOpts common;
    std::string eps_path;
    std::string state_out;
  } mom_opts;
  auto* mom_cmd = app.add_subcommand(
      "moments", "Exact vacuum moments tau(op^m) for m <= mmax");
  mom_cmd->add_option("--n", mom_opts.n, "Index count")->required();
  mom_cmd->add_option("--k", mom_opts.k, "Word length k")->required();
  mom_cmd->add_option("--mmax", mom_opts.m_max, "Largest power");
  mom_cmd->add_option("--op", mom_opts.op, "Operator: X or Y");
  mom_cmd->add_option("--q", mom_opts.common.q_text, "Sign bias");
  mom_cmd->add_option("--seed", mom_opts.common.seed, "Seed");
  mom_cmd->add_option("--eps", mom_opts.eps_path, "Sign function file");
  mom_cmd->add_option("--out", mom_opts.common.out_path, "Output path");
  mom_cmd->add_option("--state-out", mom_opts.state_out,
                      "Dump op^mmax . vacuum as 'bitmask value' lines");

  // ---- limit-moments -------------------------------------------------------
  struct {
    int k = 1, m_max = 6;
    bool gq = false;
    bool symbolic = false;
    CommonOpts common;
  } lim_opts;
  auto* lim_cmd = app.add_subcommand(
      "limit-moments", "Exact limit moments tau(H_k(G_q)^m) or G_q moments");
  lim_cmd->add_option("--k", lim_opts.k, "Hermite degree");
  lim_cmd->add_option("--mmax", lim_opts.m_max, "Largest power");
  lim_cmd->add_option("--q", lim_opts.common.q_text, "q value");
  lim_cmd->add_flag("--gq", lim_opts.gq, "Raw G_q moments instead of H_k");
  lim_cmd->add_flag("--symbolic", lim_opts.symbolic,
                    "Print G_q moments as integer polynomials in q");
  lim_cmd->add_option("--out", lim_opts.common.out_path, "Output path");

  // ---- converge ------------------------------------------------------------
  struct {
    std::string qs = "-1/2,0,1/2";
    std::string n_grid = "8,12,16";
    std::string ks = "1,2,3";
    int m_max = 4, samples = 3;
    CommonOpts common;
  } conv_opts;
  auto* conv_cmd = app.add_subcommand(
      "converge", "Moment convergence sweep against the q-Hermite limits");
  conv_cmd->add_option("--q", conv_opts.qs, "Comma-separated q list");
  conv_cmd->add_option("--n", conv_opts.n_grid, "Comma-separated n grid");
  conv_cmd->add_option("--k", conv_opts.ks, "Comma-separated k list");
  conv_cmd->add_option("--mmax", conv_opts.m_max, "Largest power");
  conv_cmd->add_option("--samples", conv_opts.samples, "Samples per cell");
  conv_cmd->add_option("--seed", conv_opts.common.seed, "Seed");
  conv_cmd->add_option("--threads", conv_opts.common.threads, "Worker count");
  conv_cmd->add_option("--format", conv_opts.common.format, "csv or json");
  conv_cmd->add_option("--out", conv_opts.common.out_path, "Output path");

  // ---- converge-joint ------------------------------------------------------
  struct {
    std::string word = "1,2,1";
    std::string qs = "-1/2,0,1/2";
    std::string n_grid = "8,12,16";
    int samples = 3;
    CommonOpts common;
  } joint_opts;
  auto* joint_cmd = app.add_subcommand(
      "converge-joint", "Mixed-moment convergence of a word of X/Y factors");
  joint_cmd->add_option("--word", joint_opts.word,
                        "Word, e.g. 1,2,1 or X1,Y2 (degrees)");
  joint_cmd->add_option("--q", joint_opts.qs, "Comma-separated q list");
  joint_cmd->add_option("--n", joint_opts.n_grid, "Comma-separated n grid");
  joint_cmd->add_option("--samples", joint_opts.samples, "Samples per cell");
  joint_cmd->add_option("--seed", joint_opts.common.seed, "Seed");
  joint_cmd->add_option("--threads", joint_opts.common.threads, "Workers");
  joint_cmd->add_option("--format", joint_opts.common.format, "csv or json");
  joint_cmd->add_option("--out", joint_opts.common.out_path, "Output path");

  // ---- recurrence-check ----------------------------------------------------
  struct {
    int n = 8, k = 2, samples = 1;
    CommonOpts common;
  } rec_opts;
  auto* rec_cmd = app.add_subcommand(
      "recurrence-check",
      "Exact q-free word-sum recurrence on all basis vectors");
  rec_cmd->add_option("--n", rec_opts.n, "Index count")->required();
  rec_cmd->add_option("--k", rec_opts.k, "Recurrence step k")->required();
  rec_cmd->add_option("--q", rec_opts.common.q_text, "Sign bias");
  rec_cmd->add_option("--seed", rec_opts.common.seed, "Seed");
  rec_cmd->add_option("--samples", rec_opts.samples, "Sign samples");

  // ---- xy-gap --------------------------------------------------------------
  struct {
    std::string qs = "0,1/2";
    std::string n_grid = "6,8,10,12";
    std::string ks = "1,2";
    int samples = 5, p = 2;
    CommonOpts common;
  } xy_opts;
  auto* xy_cmd = app.add_subcommand(
      "xy-gap", "Exact ||X - Y||_p decay over the n grid");
  xy_cmd->add_option("--q", xy_opts.qs, "Comma-separated q list");
  xy_cmd->add_option("--n", xy_opts.n_grid, "Comma-separated n grid");
  xy_cmd->add_option("--k", xy_opts.ks, "Comma-separated k list");
  xy_cmd->add_option("--p", xy_opts.p, "Even integer norm index");
  xy_cmd->add_option("--samples", xy_opts.samples, "Samples per cell");
  xy_cmd->add_option("--seed", xy_opts.common.seed, "Seed");
  xy_cmd->add_option("--threads", xy_opts.common.threads, "Workers");
  xy_cmd->add_option("--format", xy_opts.common.format, "csv or json");
  xy_cmd->add_option("--out", xy_opts.common.out_path, "Output path");

  // ---- khinchine -----------------------------------------------------------
  struct {
    int n = 8, k = 2, p = 4, trials = 100;
    CommonOpts common;
  } kh_opts;
  auto* kh_cmd = app.add_subcommand(
      "khinchine",
      "||X||_2 <= ||X||_p <= (p-1)^{k/2} ||X||_2 on random elements");
  kh_cmd->add_option("--n", kh_opts.n, "Index count")->required();
  kh_cmd->add_option("--k", kh_opts.k, "Homogeneity degree")->required();
  kh_cmd->add_option("--p", kh_opts.p, "Even integer norm index");
  kh_cmd->add_option("--trials", kh_opts.trials, "Random elements");
  kh_cmd->add_option("--q", kh_opts.common.q_text, "Sign bias");
  kh_cmd->add_option("--seed", kh_opts.common.seed, "Seed");

  // ---- hypercontract -------------------------------------------------------
  struct {
    int n = 8, trials = 100;
    double p = 2, r = 4, t = 0.5493061443340549;  // ln(3)/2
    CommonOpts common;
  } hyper_opts;
  auto* hyper_cmd = app.add_subcommand(
      "hypercontract", "||P_t X||_r <= ||X||_p for e^{-2t} <= (p-1)/(r-1)");
  hyper_cmd->add_option("--n", hyper_opts.n, "Index count")->required();
  hyper_cmd->add_option("--p", hyper_opts.p, "Source norm");
  hyper_cmd->add_option("--r", hyper_opts.r, "Target norm");
  hyper_cmd->add_option("--t", hyper_opts.t, "Semigroup time");
  hyper_cmd->add_option("--trials", hyper_opts.trials, "Random elements");
  hyper_cmd->add_option("--q", hyper_opts.common.q_text, "Sign bias");
  hyper_cmd->add_option("--seed", hyper_opts.common.seed, "Seed");

  // ---- clt-z ---------------------------------------------------------------
  struct {
    int k = 1, n = 4000;
    long samples = 10000;
    CommonOpts common;
  } clt_opts;
  auto* clt_cmd = app.add_subcommand(
      "clt-z", "CLT experiment for the Z statistic at a fixed tuple");
  clt_cmd->add_option("--k", clt_opts.k, "Tuple length")->required();
  clt_cmd->add_option("--n", clt_opts.n, "Index count");
  clt_cmd->add_option("--samples", clt_opts.samples, "Sample count");
  clt_cmd->add_option("--q", clt_opts.common.q_text, "Sign bias");
  clt_cmd->add_option("--seed", clt_opts.common.seed, "Seed");
  clt_cmd->add_option("--threads", clt_opts.common.threads, "Workers");
  clt_cmd->add_option("--out", clt_opts.common.out_path, "Output path");

  // ---- spectrum ------------------------------------------------------------
  struct {
    int n = 8, k = 1, bins = 0;
    std::string op = "X";
    bool histogram = false;
    CommonOpts common;
    std::string eps_path;
  } spec_opts;
  auto* spec_cmd = app.add_subcommand(
      "spectrum", "Eigenvalues (or histogram) of the normalized operator");
  spec_cmd->add_option("--n", spec_opts.n, "Index count")->required();
  spec_cmd->add_option("--k", spec_opts.k, "Word length k");
  spec_cmd->add_option("--op", spec_opts.op, "Operator: X, Y or A (graph)");
  spec_cmd->add_option("--q", spec_opts.common.q_text, "Sign bias");
  spec_cmd->add_option("--seed", spec_opts.common.seed, "Seed");
  spec_cmd->add_option("--eps", spec_opts.eps_path, "Sign function file");
  spec_cmd->add_flag("--histogram", spec_opts.histogram,
                     "Emit (bin_left,bin_right,count) rows");
  spec_cmd->add_option("--bins", spec_opts.bins,
                       "Histogram bin count (0: Freedman-Diaconis)");
  spec_cmd->add_option("--out", spec_opts.common.out_path, "Output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample_cmd->parsed()) {
      const auto eps = SignFunction::sample(
          sample_opts.n,
          SignLaw{sample_opts.common.q(), sample_opts.common.seed});
      write_output(sample_opts.common.out_path, eps.to_text());
      return kExitOk;
    }

    if (graph_cmd->parsed()) {
      const auto eps =
          load_or_sample_eps(graph_opts.eps_path, graph_opts.n,
                             graph_opts.common.q(), graph_opts.common.seed);
      const WeightedGraph g =
          build_weighted_distance_k_graph(*eps, graph_opts.k);
      std::ostringstream out;
      export_graph(out, g);
      write_output(graph_opts.common.out_path, out.str());
      return kExitOk;
    }

    if (mom_cmd->parsed()) {
      const auto eps =
          load_or_sample_eps(mom_opts.eps_path, mom_opts.n,
                             mom_opts.common.q(), mom_opts.common.seed);
      const FockOperator op =
          mom_opts.op == "Y"
              ? build_y_operator(eps, mom_opts.k, mom_opts.common.q())
              : build_x_operator(eps, mom_opts.k);
      std::ostringstream out;
      out << "m,moment,half_power,value\n";
      const auto table = vacuum_moment_table(op, mom_opts.m_max);
      for (int m = 0; m <= mom_opts.m_max; ++m)
        out << m << "," << to_string(table[m].coeff) << ","
            << table[m].half_power << "," << format_double(table[m].value())
            << "\n";
      write_output(mom_opts.common.out_path, out.str());
      if (!mom_opts.state_out.empty()) {
        RationalVector v = RationalVector::vacuum(mom_opts.n);
        for (int m = 0; m < mom_opts.m_max; ++m) v = op.apply_raw(v);
        std::ostringstream dump;
        write_vector(dump, v);
        write_output(mom_opts.state_out, dump.str());
      }
      return kExitOk;
    }

    if (lim_cmd->parsed()) {
      std::ostringstream out;
      if (lim_opts.symbolic) {
        out << "m,polynomial\n";
        for (int m = 0; m <= lim_opts.m_max; ++m)
          out << m << "," << q_gaussian_moment_poly(m).to_string() << "\n";
      } else if (lim_opts.gq) {
        out << "m,q,moment_numerator,moment_denominator\n";
        for (int m = 0; m <= lim_opts.m_max; ++m) {
          const Rational v = q_gaussian_moment(m, lim_opts.common.q());
          out << m << "," << to_string(lim_opts.common.q()) << ","
              << v.get_num().get_str() << "," << v.get_den().get_str() << "\n";
        }
      } else {
        out << "m,q,k,moment_numerator,moment_denominator\n";
        for (int m = 0; m <= lim_opts.m_max; ++m) {
          const std::vector<int> degrees(m, lim_opts.k);
          const Rational v = limit_moment(degrees, lim_opts.common.q());
          out << m << "," << to_string(lim_opts.common.q()) << "," << lim_opts.k
              << "," << v.get_num().get_str() << "," << v.get_den().get_str()
              << "\n";
        }
      }
      write_output(lim_opts.common.out_path, out.str());
      return kExitOk;
    }

    if (conv_cmd->parsed()) {
      ExperimentConfig config;
      config.qs = parse_q_list(conv_opts.qs);
      config.n_grid = parse_int_list(conv_opts.n_grid);
      config.ks = parse_int_list(conv_opts.ks);
      config.m_max = conv_opts.m_max;
      config.samples = conv_opts.samples;
      config.seed = conv_opts.common.seed;
      config.threads = conv_opts.common.threads;
      const ConvergenceReport report = run_convergence(config);
      std::ostringstream out;
      if (conv_opts.common.format == "json")
        write_convergence_json(out, report);
      else
        write_convergence_csv(out, report);
      write_output(conv_opts.common.out_path, out.str());
      return report.all_trends_pass ? kExitOk : kExitViolation;
    }

    if (joint_cmd->parsed()) {
      ExperimentConfig config;
      config.qs = parse_q_list(joint_opts.qs);
      config.n_grid = parse_int_list(joint_opts.n_grid);
      config.samples = joint_opts.samples;
      config.seed = joint_opts.common.seed;
      config.threads = joint_opts.common.threads;
      const ConvergenceReport report =
          run_joint_convergence(config, parse_word(joint_opts.word));
      std::ostringstream out;
      if (joint_opts.common.format == "json")
        write_convergence_json(out, report);
      else
        write_convergence_csv(out, report);
      write_output(joint_opts.common.out_path, out.str());
      return report.all_trends_pass ? kExitOk : kExitViolation;
    }

    if (rec_cmd->parsed()) {
      bool all_zero = true;
      for (int s = 0; s < rec_opts.samples; ++s) {
        const auto eps = std::make_shared<SignFunction>(SignFunction::sample(
            rec_opts.n, SignLaw{rec_opts.common.q(),
                                rec_opts.common.seed + s}));
        const Rational dev = check_recurrence(eps, rec_opts.k);
        std::cout << "sample " << s << ": max deviation " << to_string(dev)
                  << "\n";
        all_zero = all_zero && dev == 0;
      }
      return all_zero ? kExitOk : kExitViolation;
    }

    if (xy_cmd->parsed()) {
      ExperimentConfig config;
      config.qs = parse_q_list(xy_opts.qs);
      config.n_grid = parse_int_list(xy_opts.n_grid);
      config.ks = parse_int_list(xy_opts.ks);
      config.samples = xy_opts.samples;
      config.seed = xy_opts.common.seed;
      config.threads = xy_opts.common.threads;
      const XYGapReport report = run_xy_gap(config, xy_opts.p);
      std::ostringstream out;
      if (xy_opts.common.format == "json")
        write_xy_gap_json(out, report);
      else
        write_xy_gap_csv(out, report);
      write_output(xy_opts.common.out_path, out.str());
      return report.all_decreasing ? kExitOk : kExitViolation;
    }

    if (kh_cmd->parsed()) {
      const auto eps = std::make_shared<SignFunction>(SignFunction::sample(
          kh_opts.n, SignLaw{kh_opts.common.q(), kh_opts.common.seed}));
      const KhinchineResult res = check_khinchine(
          eps, kh_opts.k, kh_opts.p, kh_opts.trials, kh_opts.common.seed);
      std::cout << "trials " << res.trials << ", violations " << res.violations
                << ", worst lower ratio " << format_double(res.worst_lower)
                << ", worst upper ratio " << format_double(res.worst_upper)
                << "\n";
      return res.pass ? kExitOk : kExitViolation;
    }

    if (hyper_cmd->parsed()) {
      const auto eps = std::make_shared<SignFunction>(SignFunction::sample(
          hyper_opts.n,
          SignLaw{hyper_opts.common.q(), hyper_opts.common.seed}));
      const HypercontractivityResult res = check_hypercontractivity(
          eps, hyper_opts.p, hyper_opts.r, hyper_opts.t, hyper_opts.trials,
          hyper_opts.common.seed);
      if (!res.admissible) {
        std::cerr << "inadmissible: e^{-2t} > (p-1)/(r-1)\n";
        return kExitConfig;
      }
      std::cout << "trials " << res.trials << ", violations " << res.violations
                << ", worst ratio " << format_double(res.worst_ratio) << "\n";
      return res.pass ? kExitOk : kExitViolation;
    }

    if (clt_cmd->parsed()) {
      const CltZResult res =
          run_clt_z(clt_opts.k, clt_opts.common.q(), clt_opts.n,
                    clt_opts.samples, clt_opts.common.seed,
                    clt_opts.common.threads);
      std::ostringstream out;
      write_clt_json(out, res);
      write_output(clt_opts.common.out_path, out.str());
      return res.mean_ok && res.variance_ok && res.formula_certified
                 ? kExitOk
                 : kExitViolation;
    }

    if (spec_cmd->parsed()) {
      const auto eps =
          load_or_sample_eps(spec_opts.eps_path, spec_opts.n,
                             spec_opts.common.q(), spec_opts.common.seed);
      std::optional<FockOperator> op;
      if (spec_opts.op == "X")
        op = build_x_operator(eps, spec_opts.k);
      else if (spec_opts.op == "Y")
        op = build_y_operator(eps, spec_opts.k, spec_opts.common.q());
      else if (spec_opts.op == "A")
        op = adjacency_operator(
            build_weighted_distance_k_graph(*eps, spec_opts.k));
      else
        throw std::runtime_error("unknown operator: " + spec_opts.op);
      const std::vector<double> ev = spectrum(*op);
      std::ostringstream out;
      if (spec_opts.histogram) {
        out << "bin_left,bin_right,count\n";
        for (const HistogramBin& b : make_histogram(ev, spec_opts.bins))
          out << format_double(b.lo) << "," << format_double(b.hi) << ","
              << b.count << "\n";
      } else {
        out << "eigenvalue\n";
        for (double lambda : ev) out << format_double(lambda) << "\n";
      }
      write_output(spec_opts.common.out_path, out.str());
      return kExitOk;
    }
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
