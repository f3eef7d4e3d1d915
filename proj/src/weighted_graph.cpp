// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcube/weighted_graph.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qcube {

std::vector<std::pair<std::uint32_t, std::uint32_t>> distance_k_edges(int n,
                                                                      int k) {
  if (n < 1 || n > 30) throw std::invalid_argument("distance_k_edges: n");
  if (k < 1 || k > n)
    throw std::invalid_argument("distance_k_edges: need 1 <= k <= n");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  const std::uint32_t dim = std::uint32_t{1} << n;
  for (std::uint32_t d = 1; d < dim; ++d) {
    if (std::popcount(d) != k) continue;
    for (std::uint32_t u = 0; u < dim; ++u) {
      const std::uint32_t v = u ^ d;
      if (u < v) edges.emplace_back(u, v);
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

Rational edge_weight(const SignFunction& eps, std::uint32_t r,
                     std::uint32_t flip_set) {
  const int k = std::popcount(flip_set);
  if (k == 0 || (flip_set >> eps.size()))
    throw std::invalid_argument("edge_weight: bad flip set");
  int sign = 1;
  for (std::uint32_t rest = flip_set; rest;) {
    const int bit = std::countr_zero(rest);
    rest &= rest - 1;
    sign *= eps.vertex_sign(r, bit + 1);
  }
  Rational w(permutation_sign_sum(eps, flip_set) * sign, factorial(k));
  w.canonicalize();
  return w;
}

WeightedGraph build_weighted_distance_k_graph(const SignFunction& eps, int k) {
  const int n = eps.size();
  WeightedGraph g;
  g.n = n;
  g.k = k;
  g.q = eps.law().q;
  g.seed = eps.law().seed;
  for (const auto& [u, v] : distance_k_edges(n, k)) {
    const Rational w = edge_weight(eps, u, u ^ v);
    // Self-adjointness of the word sum forces endpoint agreement; verify
    // rather than assume.
    if (w != edge_weight(eps, v, u ^ v))
      throw std::logic_error("edge weight differs between endpoints");
    g.edges.push_back(WeightedEdge{u, v, w});
  }
  return g;
}

FockOperator adjacency_operator(const WeightedGraph& g) {
  std::vector<SparseEntry> entries;
  entries.reserve(2 * g.edges.size());
  for (const WeightedEdge& e : g.edges) {
    if (sgn(e.weight) == 0) continue;
    entries.push_back(SparseEntry{e.u, e.v, e.weight});
    entries.push_back(SparseEntry{e.v, e.u, e.weight});
  }
  return FockOperator::sparse(g.n, std::move(entries), /*half_power=*/0,
                              Rational(1), /*self_adjoint=*/true);
}

void export_graph(std::ostream& out, const WeightedGraph& g) {
  out << "# qcube n=" << g.n << " k=" << g.k << " q=" << to_string(g.q)
      << " seed=" << g.seed << "\n";
  for (const WeightedEdge& e : g.edges)
    out << e.u << " " << e.v << " " << to_fraction_string(e.weight) << "\n";
}

WeightedGraph import_graph(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("# qcube", 0) != 0)
    throw std::runtime_error("graph import: missing '# qcube' header");
  WeightedGraph g;
  {
    std::istringstream hs(header.substr(7));
    std::string field;
    while (hs >> field) {
      if (field.rfind("n=", 0) == 0)
        g.n = std::stoi(field.substr(2));
      else if (field.rfind("k=", 0) == 0)
        g.k = std::stoi(field.substr(2));
      else if (field.rfind("q=", 0) == 0)
        g.q = parse_rational(field.substr(2));
      else if (field.rfind("seed=", 0) == 0)
        g.seed = std::stoull(field.substr(5));
      else
        throw std::runtime_error("graph import: unknown header field " +
                                 field);
    }
  }
  if (g.n < 1 || g.k < 1 || g.k > g.n)
    throw std::runtime_error("graph import: bad n/k in header");
  const std::uint32_t dim = std::uint32_t{1} << g.n;
  std::string line;
  int line_no = 1;
  std::uint64_t last_key = 0;
  bool have_last = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::uint32_t u = 0, v = 0;
    std::string wtext;
    if (!(ls >> u >> v >> wtext))
      throw std::runtime_error("graph import: malformed line " +
                               std::to_string(line_no));
    if (u >= dim || v >= dim || u >= v)
      throw std::runtime_error("graph import: bad vertex pair at line " +
                               std::to_string(line_no));
    if (std::popcount(u ^ v) != g.k)
      throw std::runtime_error("graph import: pair not at distance k, line " +
                               std::to_string(line_no));
    const std::uint64_t key = (std::uint64_t{u} << 32) | v;
    if (have_last && key <= last_key)
      throw std::runtime_error("graph import: edges out of order at line " +
                               std::to_string(line_no));
    last_key = key;
    have_last = true;
    g.edges.push_back(WeightedEdge{u, v, parse_rational(wtext)});
  }
  return g;
}

WeightedGraph import_graph(const std::string& text) {
  std::istringstream in(text);
  return import_graph(in);
}

}  // namespace qcube
