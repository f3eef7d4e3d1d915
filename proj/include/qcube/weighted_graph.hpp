// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qcube/operator.hpp"
#include "qcube/rational.hpp"
#include "qcube/sign_function.hpp"

namespace qcube {

/// Weighted edge of a distance-k graph; u < v, vertices are +-1 strings
/// coded as bitmasks.  Zero weights are kept (weight-cancelled edges stay
/// distinguishable from absent edges).
struct WeightedEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  Rational weight;
};

struct WeightedGraph {
  int n = 0;
  int k = 0;
  Rational q;
  std::uint64_t seed = 0;
  std::vector<WeightedEdge> edges;  // sorted by (u, v), no duplicates

  std::size_t vertex_count() const { return std::size_t{1} << n; }
};

/// All vertex pairs of the n-cube at Hamming distance exactly k,
/// canonically ordered; count is 2^{n-1} C(n,k).
std::vector<std::pair<std::uint32_t, std::uint32_t>> distance_k_edges(int n,
                                                                      int k);

/// Weight of the edge leaving r along the flip set J (sorted k-subset):
/// (1/k!) * sum_sigma eps(sigma, J) * prod_{j in J} eps(r, j).
Rational edge_weight(const SignFunction& eps, std::uint32_t r,
                     std::uint32_t flip_set);

/// The weighted distance-k graph; weights are verified to agree from both
/// endpoints (the adjacency operator is self-adjoint).
WeightedGraph build_weighted_distance_k_graph(const SignFunction& eps, int k);

/// Adjacency operator of the graph: entries at (u,v) and (v,u), tag h = 0.
/// Relation to the word-sum operator: X_{n,k} = (k!/n^{k/2}) * A.
FockOperator adjacency_operator(const WeightedGraph& g);

/// Edge-list file: "# qcube n=<n> k=<k> q=<q> seed=<seed>" then
/// "u v num/den" lines with u < v decimal bitmasks.  Round-trips exactly.
void export_graph(std::ostream& out, const WeightedGraph& g);
WeightedGraph import_graph(std::istream& in);
WeightedGraph import_graph(const std::string& text);

}  // namespace qcube
