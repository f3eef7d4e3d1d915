// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcube/experiments.hpp"

#include "qcube/spectral.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace qcube {

namespace {

using nlohmann::json;

// Domain tags keep cell substreams of different runners disjoint.
enum : std::uint64_t {
  kDomainConverge = 1,
  kDomainJoint = 2,
  kDomainXYGap = 3,
  kDomainKhinchine = 4,
  kDomainHyper = 5,
  kDomainClt = 6,
};

void run_tasks(std::size_t count, int threads,
               const std::function<void(std::size_t)>& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const int workers =
      static_cast<int>(std::min<std::size_t>(threads, count));
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&]() {
      for (std::size_t i = next.fetch_add(1); i < count;
           i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Rational median(std::vector<Rational> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  Rational m = (values[mid - 1] + values[mid]) / 2;
  m.canonicalize();
  return m;
}

/// Least-squares slope of log(gap) against log(n) over the positive medians.
/// All medians zero (or a single positive point) counts as perfect decay.
std::pair<double, bool> fit_decay(const std::vector<int>& ns,
                                  const std::vector<Rational>& medians) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < ns.size(); ++i)
    if (sgn(medians[i]) > 0) {
      xs.push_back(std::log(static_cast<double>(ns[i])));
      ys.push_back(std::log(medians[i].get_d()));
    }
  if (xs.size() < 2) return {-INFINITY, true};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double m = static_cast<double>(xs.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return {slope, slope <= kDecayThreshold};
}

TrendRow make_trend(const Rational& q, int k, int m,
                    const std::vector<int>& ns,
                    std::vector<std::vector<Rational>> gaps_by_n) {
  TrendRow row;
  row.q = q;
  row.k = k;
  row.m = m;
  row.ns = ns;
  for (auto& gaps : gaps_by_n) row.median_gaps.push_back(median(std::move(gaps)));
  row.monotone = true;
  for (std::size_t i = 0; i + 1 < row.median_gaps.size(); ++i)
    if (row.median_gaps[i + 1] > row.median_gaps[i]) row.monotone = false;
  auto [slope, ok] = fit_decay(ns, row.median_gaps);
  row.decay_exponent = slope;
  row.decay_ok = ok;
  return row;
}

std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n') c = ';';
  return s;
}

json rational_json(const Rational& r) {
  return json{{"num", r.get_num().get_str()},
              {"den", r.get_den().get_str()},
              {"value", r.get_d()}};
}

json config_json(const ExperimentConfig& c) {
  json qs = json::array();
  for (const Rational& q : c.qs) qs.push_back(to_string(q));
  return json{{"qs", qs},          {"n_grid", c.n_grid},
              {"ks", c.ks},        {"m_max", c.m_max},
              {"samples", c.samples}, {"seed", c.seed},
              {"matrix_free_cap", c.matrix_free_cap},
              {"eigen_cap", c.eigen_cap}};
}

json trend_json(const TrendRow& t) {
  json medians = json::array();
  for (const Rational& m : t.median_gaps) medians.push_back(to_string(m));
  return json{{"q", to_string(t.q)},
              {"k", t.k},
              {"m", t.m},
              {"ns", t.ns},
              {"median_gaps", medians},
              {"monotone", t.monotone},
              {"decay_exponent", std::isinf(t.decay_exponent)
                                     ? json("-inf")
                                     : json(t.decay_exponent)},
              {"decay_ok", t.decay_ok}};
}

/// Builds the operator of one word factor; the caller owns error handling
/// for [k+1]_q = 0.
FockOperator factor_operator(const WordFactor& f, const SignFunctionPtr& eps,
                             const Rational& q) {
  if (f.kind == 'X') return build_x_operator(eps, f.degree);
  return build_y_operator(eps, f.degree, q);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::vector<WordFactor> parse_word(const std::string& text) {
  std::vector<WordFactor> word;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    WordFactor f;
    std::size_t pos = 0;
    if (token[0] == 'X' || token[0] == 'x') {
      f.kind = 'X';
      pos = 1;
    } else if (token[0] == 'Y' || token[0] == 'y') {
      f.kind = 'Y';
      pos = 1;
    }
    f.degree = std::stoi(token.substr(pos));
    if (f.degree < 1) throw std::invalid_argument("word degree must be >= 1");
    word.push_back(f);
  }
  if (word.empty()) throw std::invalid_argument("empty word");
  return word;
}

std::string word_to_string(const std::vector<WordFactor>& word) {
  std::string out;
  for (const WordFactor& f : word) {
    if (!out.empty()) out += ".";
    out += f.kind;
    out += std::to_string(f.degree);
  }
  return out;
}

ConvergenceReport run_convergence(const ExperimentConfig& config) {
  ConvergenceReport report;
  report.config = config;
  if (config.qs.empty() || config.n_grid.empty() || config.ks.empty())
    throw std::invalid_argument("run_convergence: empty grid");

  // Limit moments precomputed up front so worker cells stay pure.
  std::vector<std::vector<std::vector<Rational>>> limits(config.qs.size());
  for (std::size_t qi = 0; qi < config.qs.size(); ++qi) {
    limits[qi].resize(config.ks.size());
    for (std::size_t ki = 0; ki < config.ks.size(); ++ki) {
      limits[qi][ki].resize(config.m_max + 1, Rational(0));
      for (int m = 1; m <= config.m_max; ++m) {
        std::vector<int> degrees(m, config.ks[ki]);
        limits[qi][ki][m] = limit_moment(degrees, config.qs[qi]);
      }
    }
  }

  struct Task {
    std::size_t qi, ki, ni;
    int sample;
  };
  std::vector<Task> tasks;
  for (std::size_t qi = 0; qi < config.qs.size(); ++qi)
    for (std::size_t ki = 0; ki < config.ks.size(); ++ki)
      for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni)
        for (int s = 0; s < config.samples; ++s)
          tasks.push_back(Task{qi, ki, ni, s});

  std::vector<std::vector<ConvergenceCell>> results(tasks.size());
  const CounterRng master(config.seed);
  run_tasks(tasks.size(), config.threads, [&](std::size_t ti) {
    const Task& t = tasks[ti];
    const Rational& q = config.qs[t.qi];
    const int k = config.ks[t.ki];
    const int n = config.n_grid[t.ni];
    std::vector<ConvergenceCell>& cells = results[ti];
    ConvergenceCell base;
    base.q = q;
    base.k = k;
    base.n = n;
    base.sample = t.sample;
    if (k > n || n > config.matrix_free_cap) {
      base.ok = false;
      base.note = k > n ? "k exceeds n" : "matrix-free cap exceeded";
      cells.push_back(base);
      return;
    }
    // One sign environment per (q, sample), shared across k, m and the whole
    // n grid: the counter-keyed sampler makes the n-row table a restriction
    // of the larger one, so each sample traces a single environment through
    // the growing graphs, jointly for every operator degree.
    const std::uint64_t cell_seed =
        master.at(kDomainConverge, t.qi, static_cast<std::uint64_t>(t.sample));
    auto eps = std::make_shared<SignFunction>(
        SignFunction::sample(n, SignLaw{q, cell_seed}));
    const FockOperator x = build_x_operator(eps, k);
    const std::vector<ScaledMoment> moments =
        vacuum_moment_table(x, config.m_max);
    for (int m = 1; m <= config.m_max; ++m) {
      ConvergenceCell cell = base;
      cell.m = m;
      cell.moment_coeff = moments[m].coeff;
      cell.half_power = moments[m].half_power;
      cell.limit = limits[t.qi][t.ki][m];
      if (cell.half_power % 2 == 0) {
        cell.gap = abs(moments[m].exact_value() - cell.limit);
      } else if (sgn(cell.moment_coeff) == 0) {
        cell.gap = abs(cell.limit);
      } else {
        cell.ok = false;
        cell.note = "odd tag with nonzero moment";
      }
      cells.push_back(std::move(cell));
    }
  });

  for (auto& cells : results)
    for (auto& cell : cells) report.cells.push_back(std::move(cell));

  report.all_trends_pass = true;
  for (std::size_t qi = 0; qi < config.qs.size(); ++qi)
    for (std::size_t ki = 0; ki < config.ks.size(); ++ki)
      for (int m = 1; m <= config.m_max; ++m) {
        std::vector<int> ns;
        std::vector<std::vector<Rational>> gaps_by_n;
        for (int n : config.n_grid) {
          std::vector<Rational> gaps;
          for (const ConvergenceCell& c : report.cells)
            if (c.ok && c.q == config.qs[qi] && c.k == config.ks[ki] &&
                c.m == m && c.n == n)
              gaps.push_back(c.gap);
          if (!gaps.empty()) {
            ns.push_back(n);
            gaps_by_n.push_back(std::move(gaps));
          }
        }
        if (ns.empty()) continue;
        TrendRow row = make_trend(config.qs[qi], config.ks[ki], m, ns,
                                  std::move(gaps_by_n));
        // Only even powers enter the pass judgment: odd-power moments of the
        // limit vanish by parity, so their gaps carry no decay signal.
        if (m % 2 == 0 && !(row.monotone && row.decay_ok))
          report.all_trends_pass = false;
        report.trends.push_back(std::move(row));
      }
  return report;
}

ConvergenceReport run_joint_convergence(const ExperimentConfig& config,
                                        const std::vector<WordFactor>& word) {
  ConvergenceReport report;
  report.config = config;
  report.word = word;
  if (config.qs.empty() || config.n_grid.empty() || word.empty())
    throw std::invalid_argument("run_joint_convergence: empty grid");

  std::vector<int> degrees;
  for (const WordFactor& f : word) degrees.push_back(f.degree);
  std::vector<Rational> limits;
  for (const Rational& q : config.qs)
    limits.push_back(limit_moment(degrees, q));

  struct Task {
    std::size_t qi, ni;
    int sample;
  };
  std::vector<Task> tasks;
  for (std::size_t qi = 0; qi < config.qs.size(); ++qi)
    for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni)
      for (int s = 0; s < config.samples; ++s) tasks.push_back({qi, ni, s});

  std::vector<ConvergenceCell> results(tasks.size());
  const CounterRng master(config.seed);
  const int max_degree = *std::max_element(degrees.begin(), degrees.end());
  run_tasks(tasks.size(), config.threads, [&](std::size_t ti) {
    const Task& t = tasks[ti];
    const Rational& q = config.qs[t.qi];
    const int n = config.n_grid[t.ni];
    ConvergenceCell cell;
    cell.q = q;
    cell.n = n;
    cell.sample = t.sample;
    cell.limit = limits[t.qi];
    if (max_degree > n || n > config.matrix_free_cap) {
      cell.ok = false;
      cell.note = max_degree > n ? "degree exceeds n" : "matrix-free cap exceeded";
      results[ti] = std::move(cell);
      return;
    }
    const std::uint64_t cell_seed =
        master.at(kDomainJoint, t.qi, static_cast<std::uint64_t>(t.sample));
    auto eps = std::make_shared<SignFunction>(
        SignFunction::sample(n, SignLaw{q, cell_seed}));
    try {
      std::vector<FockOperator> ops;
      ops.reserve(word.size());
      for (const WordFactor& f : word)
        ops.push_back(factor_operator(f, eps, q));
      std::vector<const FockOperator*> ptrs;
      for (const FockOperator& op : ops) ptrs.push_back(&op);
      const ScaledMoment moment = mixed_vacuum_moment(ptrs);
      cell.moment_coeff = moment.coeff;
      cell.half_power = moment.half_power;
      if (moment.half_power % 2 == 0)
        cell.gap = abs(moment.exact_value() - cell.limit);
      else if (sgn(moment.coeff) == 0)
        cell.gap = abs(cell.limit);
      else {
        cell.ok = false;
        cell.note = "odd tag with nonzero moment";
      }
    } catch (const std::domain_error& err) {
      cell.ok = false;
      cell.note = err.what();
    }
    results[ti] = std::move(cell);
  });
  report.cells = std::move(results);

  report.all_trends_pass = true;
  for (std::size_t qi = 0; qi < config.qs.size(); ++qi) {
    std::vector<int> ns;
    std::vector<std::vector<Rational>> gaps_by_n;
    for (int n : config.n_grid) {
      std::vector<Rational> gaps;
      for (const ConvergenceCell& c : report.cells)
        if (c.ok && c.q == config.qs[qi] && c.n == n) gaps.push_back(c.gap);
      if (!gaps.empty()) {
        ns.push_back(n);
        gaps_by_n.push_back(std::move(gaps));
      }
    }
    if (ns.empty()) continue;
    TrendRow row =
        make_trend(config.qs[qi], 0, 0, ns, std::move(gaps_by_n));
    if (!(row.monotone && row.decay_ok)) report.all_trends_pass = false;
    report.trends.push_back(std::move(row));
  }
  return report;
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& r) {
  out << "row_type,word,q,k,m,n,sample,moment,half_power,moment_value,limit,"
         "gap,gap_value,ok,note,ns,median_gaps,monotone,decay_exponent,"
         "decay_ok\n";
  const std::string word = word_to_string(r.word);
  for (const ConvergenceCell& c : r.cells) {
    out << "cell," << word << "," << to_string(c.q) << "," << c.k << ","
        << c.m << "," << c.n << "," << c.sample << ","
        << to_string(c.moment_coeff) << "," << c.half_power << ","
        << format_double(
               ScaledMoment{c.moment_coeff, c.half_power, c.n}.value())
        << "," << to_string(c.limit) << "," << to_string(c.gap) << ","
        << format_double(c.gap.get_d()) << "," << (c.ok ? 1 : 0) << ","
        << csv_safe(c.note) << ",,,,,\n";
  }
  for (const TrendRow& t : r.trends) {
    out << "trend," << word << "," << to_string(t.q) << "," << t.k << ","
        << t.m << ",,,,,,,,,,,";
    for (std::size_t i = 0; i < t.ns.size(); ++i)
      out << (i ? ";" : "") << t.ns[i];
    out << ",";
    for (std::size_t i = 0; i < t.median_gaps.size(); ++i)
      out << (i ? ";" : "") << to_string(t.median_gaps[i]);
    out << "," << (t.monotone ? 1 : 0) << ","
        << (std::isinf(t.decay_exponent) ? "-inf"
                                         : format_double(t.decay_exponent))
        << "," << (t.decay_ok ? 1 : 0) << "\n";
  }
}

void write_convergence_json(std::ostream& out, const ConvergenceReport& r) {
  json cells = json::array();
  for (const ConvergenceCell& c : r.cells)
    cells.push_back(
        json{{"q", to_string(c.q)},
             {"k", c.k},
             {"m", c.m},
             {"n", c.n},
             {"sample", c.sample},
             {"moment", rational_json(c.moment_coeff)},
             {"half_power", c.half_power},
             {"moment_value",
              ScaledMoment{c.moment_coeff, c.half_power, c.n}.value()},
             {"limit", to_string(c.limit)},
             {"gap", rational_json(c.gap)},
             {"ok", c.ok},
             {"note", c.note}});
  json trends = json::array();
  for (const TrendRow& t : r.trends) trends.push_back(trend_json(t));
  json doc{{"report", r.word.empty() ? "convergence" : "joint-convergence"},
           {"word", word_to_string(r.word)},
           {"config", config_json(r.config)},
           {"statistic",
            "per-sample exact moments; median-over-samples trend (no "
            "almost-everywhere selection)"},
           {"cells", cells},
           {"trends", trends},
           {"all_trends_pass", r.all_trends_pass}};
  out << doc.dump(2) << "\n";
}

ConvergenceReport read_convergence_json(std::istream& in) {
  json doc = json::parse(in);
  ConvergenceReport r;
  const json& cfg = doc.at("config");
  for (const auto& q : cfg.at("qs"))
    r.config.qs.push_back(parse_rational(q.get<std::string>()));
  r.config.n_grid = cfg.at("n_grid").get<std::vector<int>>();
  r.config.ks = cfg.at("ks").get<std::vector<int>>();
  r.config.m_max = cfg.at("m_max").get<int>();
  r.config.samples = cfg.at("samples").get<int>();
  r.config.seed = cfg.at("seed").get<std::uint64_t>();
  r.config.matrix_free_cap = cfg.at("matrix_free_cap").get<int>();
  r.config.eigen_cap = cfg.at("eigen_cap").get<int>();
  const std::string word = doc.at("word").get<std::string>();
  if (!word.empty()) {
    std::istringstream ws(word);
    std::string token;
    while (std::getline(ws, token, '.')) {
      WordFactor f;
      f.kind = token.at(0);
      f.degree = std::stoi(token.substr(1));
      r.word.push_back(f);
    }
  }
  const auto read_rational = [](const json& j) {
    return frac(BigInt(j.at("num").get<std::string>()),
                BigInt(j.at("den").get<std::string>()));
  };
  for (const json& c : doc.at("cells")) {
    ConvergenceCell cell;
    cell.q = parse_rational(c.at("q").get<std::string>());
    cell.k = c.at("k").get<int>();
    cell.m = c.at("m").get<int>();
    cell.n = c.at("n").get<int>();
    cell.sample = c.at("sample").get<int>();
    cell.moment_coeff = read_rational(c.at("moment"));
    cell.half_power = c.at("half_power").get<int>();
    cell.limit = parse_rational(c.at("limit").get<std::string>());
    cell.gap = read_rational(c.at("gap"));
    cell.ok = c.at("ok").get<bool>();
    cell.note = c.at("note").get<std::string>();
    r.cells.push_back(std::move(cell));
  }
  for (const json& t : doc.at("trends")) {
    TrendRow row;
    row.q = parse_rational(t.at("q").get<std::string>());
    row.k = t.at("k").get<int>();
    row.m = t.at("m").get<int>();
    row.ns = t.at("ns").get<std::vector<int>>();
    for (const auto& g : t.at("median_gaps"))
      row.median_gaps.push_back(parse_rational(g.get<std::string>()));
    row.monotone = t.at("monotone").get<bool>();
    const json& slope = t.at("decay_exponent");
    row.decay_exponent =
        slope.is_string() ? -INFINITY : slope.get<double>();
    row.decay_ok = t.at("decay_ok").get<bool>();
    r.trends.push_back(std::move(row));
  }
  r.all_trends_pass = doc.at("all_trends_pass").get<bool>();
  return r;
}

Rational check_recurrence(const SignFunctionPtr& eps, int k) {
  const int n = eps->size();
  if (k + 1 > n)
    throw std::invalid_argument("check_recurrence: need k + 1 <= n");
  const FockOperator x1 = build_x_operator(eps, 1);
  const FockOperator xk = build_x_operator(eps, k);
  const FockOperator xk1 = build_x_operator(eps, k + 1);
  const FockOperator core = build_y_core_operator(eps, k - 1);
  const std::uint32_t dim = std::uint32_t{1} << n;
  // Accumulate raw(X_{k+1}) + raw(core) - raw(X_k) raw(X_1) row by row;
  // every touched slot must come back to exactly zero.
  std::vector<Rational> scratch(dim, Rational(0));
  std::vector<std::uint32_t> touched;
  Rational worst(0);
  const auto add_row = [&](const FockOperator& op, std::uint32_t a,
                           bool subtract) {
    for (const GammaTerm& t : op.terms()) {
      const std::uint32_t b = a ^ t.subset;
      const bool neg =
          (gamma_word_sign(*eps, t.subset, a) < 0) != subtract;
      if (neg)
        scratch[b] -= t.coeff;
      else
        scratch[b] += t.coeff;
      touched.push_back(b);
    }
  };
  for (std::uint32_t a = 0; a < dim; ++a) {
    touched.clear();
    add_row(xk1, a, false);
    add_row(core, a, false);
    for (const GammaTerm& t1 : x1.terms()) {
      const std::uint32_t mid = a ^ t1.subset;
      const bool neg1 = gamma_word_sign(*eps, t1.subset, a) < 0;
      for (const GammaTerm& t2 : xk.terms()) {
        const std::uint32_t b = mid ^ t2.subset;
        const bool neg =
            (gamma_word_sign(*eps, t2.subset, mid) < 0) != neg1;
        const Rational w = t1.coeff * t2.coeff;
        if (neg)
          scratch[b] += w;
        else
          scratch[b] -= w;
        touched.push_back(b);
      }
    }
    for (const std::uint32_t b : touched) {
      if (sgn(scratch[b]) != 0) {
        Rational dev = abs(scratch[b]);
        if (dev > worst) worst = dev;
        scratch[b] = 0;
      }
    }
  }
  return worst;
}

XYGapReport run_xy_gap(const ExperimentConfig& config, int p) {
  if (p < 2 || p % 2 != 0)
    throw std::invalid_argument("run_xy_gap: p must be a positive even integer");
  XYGapReport report;
  report.config = config;
  report.p = p;

  struct Task {
    std::size_t qi, ki, ni;
    int sample;
  };
  std::vector<Task> tasks;
  for (std::size_t qi = 0; qi < config.qs.size(); ++qi)
    for (std::size_t ki = 0; ki < config.ks.size(); ++ki)
      for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni)
        for (int s = 0; s < config.samples; ++s)
          tasks.push_back({qi, ki, ni, s});

  std::vector<XYGapRow> rows(tasks.size());
  const CounterRng master(config.seed);
  run_tasks(tasks.size(), config.threads, [&](std::size_t ti) {
    const Task& t = tasks[ti];
    XYGapRow row;
    row.q = config.qs[t.qi];
    row.k = config.ks[t.ki];
    row.n = config.n_grid[t.ni];
    row.sample = t.sample;
    if (row.k + 1 > row.n || row.n > config.matrix_free_cap) {
      row.ok = false;
      row.note = "cap exceeded";
      rows[ti] = std::move(row);
      return;
    }
    const std::uint64_t cell_seed =
        master.at(kDomainXYGap, t.qi, static_cast<std::uint64_t>(t.sample));
    auto eps = std::make_shared<SignFunction>(
        SignFunction::sample(row.n, SignLaw{row.q, cell_seed}));
    try {
      const FockOperator x = build_x_operator(eps, row.k);
      const FockOperator y = build_y_operator(eps, row.k, row.q);
      const FockOperator diff =
          linear_combination(Rational(1), x, Rational(-1), y);
      if (p == 2) {
        row.norm_sq = l2_norm_squared(diff);
      } else {
        const FockOperator diff_adj = adjoint(diff);
        std::vector<const FockOperator*> ops;
        for (int i = 0; i < p / 2; ++i) {
          ops.push_back(&diff_adj);
          ops.push_back(&diff);
        }
        row.norm_sq = mixed_vacuum_moment(ops).exact_value();  // tau(|D|^p)
      }
      row.norm = std::pow(row.norm_sq.get_d(), 1.0 / p);
      row.ratio_to_inv_sqrt_n = row.norm * std::sqrt(double(row.n));
    } catch (const std::domain_error& err) {
      row.ok = false;
      row.note = err.what();
    }
    rows[ti] = std::move(row);
  });
  report.rows = std::move(rows);

  report.all_decreasing = true;
  for (std::size_t qi = 0; qi < config.qs.size(); ++qi)
    for (std::size_t ki = 0; ki < config.ks.size(); ++ki) {
      std::vector<int> ns;
      std::vector<std::vector<Rational>> by_n;
      for (int n : config.n_grid) {
        std::vector<Rational> vals;
        for (const XYGapRow& r2 : report.rows)
          if (r2.ok && r2.q == config.qs[qi] && r2.k == config.ks[ki] &&
              r2.n == n)
            vals.push_back(r2.norm_sq);
        if (!vals.empty()) {
          ns.push_back(n);
          by_n.push_back(std::move(vals));
        }
      }
      if (ns.empty()) continue;
      TrendRow row = make_trend(config.qs[qi], config.ks[ki], p, ns,
                                std::move(by_n));
      if (!row.monotone) report.all_decreasing = false;
      report.trends.push_back(std::move(row));
    }
  return report;
}

void write_xy_gap_csv(std::ostream& out, const XYGapReport& r) {
  out << "row_type,q,k,n,sample,p,norm_power,norm,ratio_sqrt_n,ok,note,ns,"
         "median_norm_powers,monotone\n";
  for (const XYGapRow& row : r.rows)
    out << "cell," << to_string(row.q) << "," << row.k << "," << row.n << ","
        << row.sample << "," << r.p << "," << to_string(row.norm_sq) << ","
        << format_double(row.norm) << ","
        << format_double(row.ratio_to_inv_sqrt_n) << "," << (row.ok ? 1 : 0)
        << "," << csv_safe(row.note) << ",,,\n";
  for (const TrendRow& t : r.trends) {
    out << "trend," << to_string(t.q) << "," << t.k << ",,," << r.p
        << ",,,,,,";
    for (std::size_t i = 0; i < t.ns.size(); ++i)
      out << (i ? ";" : "") << t.ns[i];
    out << ",";
    for (std::size_t i = 0; i < t.median_gaps.size(); ++i)
      out << (i ? ";" : "") << to_string(t.median_gaps[i]);
    out << "," << (t.monotone ? 1 : 0) << "\n";
  }
}

void write_xy_gap_json(std::ostream& out, const XYGapReport& r) {
  json rows = json::array();
  for (const XYGapRow& row : r.rows)
    rows.push_back(json{{"q", to_string(row.q)},
                        {"k", row.k},
                        {"n", row.n},
                        {"sample", row.sample},
                        {"norm_power", rational_json(row.norm_sq)},
                        {"norm", row.norm},
                        {"ratio_sqrt_n", row.ratio_to_inv_sqrt_n},
                        {"ok", row.ok},
                        {"note", row.note}});
  json trends = json::array();
  for (const TrendRow& t : r.trends) trends.push_back(trend_json(t));
  json doc{{"report", "xy-gap"},
           {"p", r.p},
           {"config", config_json(r.config)},
           {"rows", rows},
           {"trends", trends},
           {"all_decreasing", r.all_decreasing}};
  out << doc.dump(2) << "\n";
}

KhinchineResult check_khinchine(const SignFunctionPtr& eps, int k, int p,
                                int trials, std::uint64_t seed,
                                double tolerance) {
  const int n = eps->size();
  if (p < 2 || p % 2 != 0)
    throw std::invalid_argument("check_khinchine: p must be even");
  if (k < 1 || k > n) throw std::invalid_argument("check_khinchine: bad k");
  KhinchineResult res;
  res.n = n;
  res.k = k;
  res.p = p;
  res.trials = trials;
  res.seed = seed;
  res.tolerance = tolerance;
  const CounterRng rng(seed);
  const double constant = std::pow(static_cast<double>(p - 1), 0.5 * k);
  res.pass = true;
  for (int trial = 0; trial < trials; ++trial) {
    RealVector x = RealVector::zero(n);
    bool any = false;
    for (std::uint32_t a = 0; a < x.coeff.size(); ++a) {
      if (std::popcount(a) != k) continue;
      // Integer coefficients in [-9, 9].
      const std::uint64_t u = rng.at(kDomainKhinchine, trial, a);
      const int c = static_cast<int>(u % 19) - 9;
      x.coeff[a] = c;
      any = any || c != 0;
    }
    if (!any) x.coeff[(std::uint32_t{1} << k) - 1] = 1;
    const double norm2 = element_l2_norm(x);
    const double normp = element_lp_norm(*eps, x, p);
    const double lower = norm2 / normp;
    const double upper = normp / (constant * norm2);
    res.worst_lower = std::max(res.worst_lower, lower);
    res.worst_upper = std::max(res.worst_upper, upper);
    if (lower > 1 + tolerance || upper > 1 + tolerance) {
      ++res.violations;
      res.pass = false;
    }
  }
  return res;
}

HypercontractivityResult check_hypercontractivity(const SignFunctionPtr& eps,
                                                  double p, double r, double t,
                                                  int trials,
                                                  std::uint64_t seed,
                                                  double tolerance) {
  if (!(1 < p && p < r))
    throw std::invalid_argument("check_hypercontractivity: need 1 < p < r");
  HypercontractivityResult res;
  res.n = eps->size();
  res.p = p;
  res.r = r;
  res.t = t;
  res.trials = trials;
  res.seed = seed;
  res.tolerance = tolerance;
  res.admissible = t >= 0 && std::exp(-2 * t) <= (p - 1) / (r - 1) + 1e-15;
  if (!res.admissible) return res;
  const CounterRng rng(seed);
  res.pass = true;
  for (int trial = 0; trial < trials; ++trial) {
    RealVector x = RealVector::zero(res.n);
    for (std::uint32_t a = 0; a < x.coeff.size(); ++a)
      x.coeff[a] = 2 * rng.uniform01(kDomainHyper, trial, a) - 1;
    const double norm_in = element_lp_norm(*eps, x, p);
    const RealVector evolved = ou_semigroup(t, x);
    const double norm_out = element_lp_norm(*eps, evolved, r);
    const double ratio = norm_out / norm_in;
    res.worst_ratio = std::max(res.worst_ratio, ratio);
    if (ratio > 1 + tolerance) {
      ++res.violations;
      res.pass = false;
    }
  }
  return res;
}

CltZResult run_clt_z(int k, const Rational& q, int n, long samples,
                     std::uint64_t seed, int threads) {
  if (k < 1 || n <= k) throw std::invalid_argument("run_clt_z: bad k/n");
  if (samples < 2) throw std::invalid_argument("run_clt_z: need samples >= 2");
  const Rational qk1 = q_integer(k + 1, q);
  if (sgn(qk1) == 0)
    throw std::domain_error("run_clt_z: [k+1]_q = 0");
  CltZResult res;
  res.k = k;
  res.n = n;
  res.q = q;
  res.samples = samples;
  res.seed = seed;

  const std::uint64_t threshold = negative_sign_threshold(q);
  const CounterRng rng(seed);
  // Exact power sums of the integer totals T_s = n Z_s; order-independent.
  const int chunk_count = std::max(1, std::min<int>(threads * 4, 64));
  std::vector<std::array<BigInt, 4>> partial(
      chunk_count, {BigInt(0), BigInt(0), BigInt(0), BigInt(0)});
  const long per_chunk = (samples + chunk_count - 1) / chunk_count;
  run_tasks(chunk_count, threads, [&](std::size_t ci) {
    const long lo = static_cast<long>(ci) * per_chunk;
    const long hi = std::min(samples, lo + per_chunk);
    BigInt s1(0), s2(0), s3(0), s4(0);
    for (long s = lo; s < hi; ++s) {
      long total = 0;
      for (int i = k + 1; i <= n; ++i) {
        int suffix = 1;
        long row = 1;
        // Fresh environment per draw: the sample index keys the stream.
        for (int j = k; j >= 1; --j) {
          suffix *= sign_from_draw(
              rng.at(kDomainClt, static_cast<std::uint64_t>(s),
                     (static_cast<std::uint64_t>(i) << 20) | unsigned(j)),
              threshold);
          row += suffix;
        }
        total += row;
      }
      const BigInt t1(total);
      const BigInt t2 = t1 * t1;
      s1 += t1;
      s2 += t2;
      s3 += t2 * t1;
      s4 += t2 * t2;
    }
    partial[ci] = {s1, s2, s3, s4};
  });
  BigInt s1(0), s2(0), s3(0), s4(0);
  for (const auto& part : partial) {
    s1 += part[0];
    s2 += part[1];
    s3 += part[2];
    s4 += part[3];
  }

  // Raw moments of U = T / (n [k+1]_q).
  const Rational c = Rational(1) / (Rational(n) * qk1);
  const Rational inv_n(1, samples);
  const Rational m1 = c * Rational(s1) * inv_n;
  const Rational m2 = c * c * Rational(s2) * inv_n;
  const Rational m3 = c * c * c * Rational(s3) * inv_n;
  const Rational m4 = c * c * c * c * Rational(s4) * inv_n;
  res.mean = m1;
  res.mean.canonicalize();
  const Rational var_u = m2 - m1 * m1;
  res.variance = Rational(n) * var_u;  // variance of sqrt(n)(U - 1)
  res.variance.canonicalize();
  res.target_variance = z_variance(k, q) / (qk1 * qk1);
  res.target_variance.canonicalize();

  const Rational mu2 = var_u;
  const Rational mu4 =
      m4 - 4 * m3 * m1 + 6 * m2 * m1 * m1 - 3 * m1 * m1 * m1 * m1;
  res.standardized_fourth =
      sgn(mu2) > 0 ? mu4.get_d() / (mu2.get_d() * mu2.get_d()) : 0.0;

  const double se = std::sqrt(var_u.get_d() / static_cast<double>(samples));
  const double dev = std::abs(Rational(m1 - 1).get_d());
  res.mean_abs_dev_se = se > 0 ? dev / se : (dev == 0 ? 0 : INFINITY);
  res.mean_ok = dev <= 3 * se;
  // 5% band compared exactly.
  res.variance_ok =
      abs(res.variance - res.target_variance) * 20 <= res.target_variance;
  const auto [w_mean, w_second] = z_moments_exhaustive(k, q);
  res.formula_certified =
      w_mean == z_mean(k, q) && w_second - w_mean * w_mean == z_variance(k, q);
  return res;
}

void write_clt_json(std::ostream& out, const CltZResult& r) {
  json doc{{"report", "clt-z"},
           {"k", r.k},
           {"n", r.n},
           {"q", to_string(r.q)},
           {"samples", r.samples},
           {"seed", r.seed},
           {"mean", rational_json(r.mean)},
           {"variance", rational_json(r.variance)},
           {"target_variance", rational_json(r.target_variance)},
           {"standardized_fourth", r.standardized_fourth},
           {"mean_abs_dev_se", r.mean_abs_dev_se},
           {"mean_ok", r.mean_ok},
           {"variance_ok", r.variance_ok},
           {"formula_certified", r.formula_certified}};
  out << doc.dump(2) << "\n";
}

}  // namespace qcube
