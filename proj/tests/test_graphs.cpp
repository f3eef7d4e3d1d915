// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <memory>
#include <sstream>

#include "qcube/weighted_graph.hpp"
#include "test_oracles.hpp"

using namespace qcube;

TEST_CASE("distance-k edge counts") {
  CHECK(distance_k_edges(2, 1).size() == 4);   // the square
  CHECK(distance_k_edges(3, 3).size() == 4);   // antipodal pairs
  CHECK(distance_k_edges(4, 2).size() == 48);  // 2^3 C(4,2)
  for (int n = 1; n <= 10; ++n)
    for (int k = 1; k <= n; ++k) {
      const auto count = distance_k_edges(n, k).size();
      const BigInt expected = BigInt(1) << (n - 1);
      CHECK(BigInt(count) == expected * binomial(n, k));
    }
  CHECK_THROWS(distance_k_edges(4, 0));
  CHECK_THROWS(distance_k_edges(4, 5));
}

TEST_CASE("edge weights at the extremes") {
  const SignFunction bosonic = SignFunction::constant(5, +1);
  const SignFunction fermionic = SignFunction::constant(5, -1);
  const SignFunction eps = testing::random_eps(5, 7);
  for (std::uint32_t r : {0u, 5u, 21u})
    for (std::uint32_t flips : {0b11u, 0b1101u}) {
      CHECK(edge_weight(bosonic, r, flips) == 1);
      CHECK(edge_weight(fermionic, r, flips) == 0);
    }
  // k = 1: the weight is just the vertex sign.
  for (std::uint32_t r : {0u, 9u, 30u})
    for (int j = 1; j <= 5; ++j)
      CHECK(edge_weight(eps, r, std::uint32_t{1} << (j - 1)) ==
            Rational(eps.vertex_sign(r, j)));
}

TEST_CASE("weighted graph construction") {
  const SignFunction bosonic = SignFunction::constant(3, +1);
  const WeightedGraph cube = build_weighted_distance_k_graph(bosonic, 1);
  CHECK(cube.edges.size() == 12);
  for (const WeightedEdge& e : cube.edges) CHECK(e.weight == 1);

  const SignFunction fermionic = SignFunction::constant(4, -1);
  const WeightedGraph cancelled = build_weighted_distance_k_graph(fermionic, 2);
  CHECK(cancelled.edges.size() == 48);  // zero-weight edges are kept
  for (const WeightedEdge& e : cancelled.edges) CHECK(e.weight == 0);
}

TEST_CASE("graph adjacency equals the word sum over k!") {
  for (int n : {4, 5})
    for (int k = 1; k <= 3; ++k) {
      auto eps = std::make_shared<SignFunction>(
          testing::random_eps(n, 100 + 10 * n + k));
      const WeightedGraph g = build_weighted_distance_k_graph(*eps, k);
      const FockOperator adj = adjacency_operator(g);
      const FockOperator x = build_x_operator(eps, k);
      const Rational kfact(factorial(k));
      std::map<std::pair<std::uint32_t, std::uint32_t>, Rational> adj_entries;
      for (const SparseEntry& e : adj.to_entries())
        adj_entries[{e.source, e.target}] = e.weight;
      std::map<std::pair<std::uint32_t, std::uint32_t>, Rational> x_entries;
      for (const SparseEntry& e : x.to_entries())
        x_entries[{e.source, e.target}] = e.weight / kfact;
      CHECK(adj_entries == x_entries);
    }
}

TEST_CASE("adjacency operator basics") {
  const SignFunction bosonic = SignFunction::constant(2, +1);
  const WeightedGraph square = build_weighted_distance_k_graph(bosonic, 1);
  const FockOperator adj = adjacency_operator(square);
  RationalVector ones = RationalVector::zero(2);
  for (auto& c : ones.coeff) c = 1;
  const RationalVector row_sums = adj.apply_raw(ones);
  for (const Rational& c : row_sums.coeff) CHECK(c == 2);

  WeightedGraph empty;
  empty.n = 3;
  empty.k = 1;
  const FockOperator zero_op = adjacency_operator(empty);
  CHECK(zero_op.to_entries().empty());
}

TEST_CASE("vacuum spectral moments equal trace moments (vertex transitivity)") {
  // Bosonic X_{n,1}: moments from delta_e match the normalized trace.
  auto bosonic = std::make_shared<SignFunction>(SignFunction::constant(4, +1));
  const FockOperator x = build_x_operator(bosonic, 1);
  const auto dense = testing::dense_raw_matrix(x);
  std::vector<std::vector<Rational>> power(
      dense.size(), std::vector<Rational>(dense.size(), Rational(0)));
  for (std::size_t i = 0; i < dense.size(); ++i) power[i][i] = 1;
  for (int m = 1; m <= 4; ++m) {
    std::vector<std::vector<Rational>> next(
        dense.size(), std::vector<Rational>(dense.size(), Rational(0)));
    for (std::size_t i = 0; i < dense.size(); ++i)
      for (std::size_t l = 0; l < dense.size(); ++l) {
        if (sgn(power[i][l]) == 0) continue;
        for (std::size_t j = 0; j < dense.size(); ++j)
          next[i][j] += power[i][l] * dense[l][j];
      }
    power = std::move(next);
    Rational trace(0);
    for (std::size_t i = 0; i < dense.size(); ++i) trace += power[i][i];
    trace /= Rational(dense.size());
    CHECK(vacuum_moment(x, m).coeff == power[0][0]);
    CHECK(power[0][0] == trace);
  }
}

TEST_CASE("export / import round trip") {
  const SignFunction eps =
      SignFunction::sample(5, SignLaw{Rational(-1, 2), 31});
  const WeightedGraph g = build_weighted_distance_k_graph(eps, 2);
  std::ostringstream out;
  export_graph(out, g);
  const WeightedGraph back = import_graph(out.str());
  CHECK(back.n == g.n);
  CHECK(back.k == g.k);
  CHECK(back.q == g.q);
  CHECK(back.seed == g.seed);
  REQUIRE(back.edges.size() == g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    CHECK(back.edges[i].u == g.edges[i].u);
    CHECK(back.edges[i].v == g.edges[i].v);
    CHECK(back.edges[i].weight == g.edges[i].weight);
  }
}

TEST_CASE("import validation") {
  CHECK_THROWS_WITH(import_graph(std::string("bad header\n")),
                    doctest::Contains("header"));
  // Distance mismatch reports the offending line.
  CHECK_THROWS_WITH(
      import_graph(std::string("# qcube n=3 k=2 q=0 seed=0\n0 1 1/1\n")),
      doctest::Contains("line 2"));
  CHECK_THROWS_WITH(
      import_graph(std::string("# qcube n=3 k=1 q=0 seed=0\n0 1 oops\n")),
      doctest::Contains("rational"));
  // Duplicate edges violate canonical ordering.
  CHECK_THROWS(import_graph(
      std::string("# qcube n=3 k=1 q=0 seed=0\n0 1 1/1\n0 1 1/1\n")));
  // Denominators dividing k! survive the trip exactly.
  const std::string text = "# qcube n=3 k=2 q=1/2 seed=9\n0 3 -1/2\n1 2 1/2\n";
  const WeightedGraph g = import_graph(text);
  CHECK(g.edges[0].weight == Rational(-1, 2));
  std::ostringstream out;
  export_graph(out, g);
  CHECK(out.str() == text);
}
