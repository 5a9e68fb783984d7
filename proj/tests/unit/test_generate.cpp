#include "doctest.h"
#include "graphdc/generate.hpp"
#include "graphdc/graph_text.hpp"
#include "graphdc/oracle.hpp"
#include "support/fixtures.hpp"

using namespace graphdc;

TEST_SUITE("generate") {
  TEST_CASE("band [2,2] with one edge is K2") {
    for (std::uint64_t seed : {1u, 2u, 99u}) {
      CHECK(gen_random_graph({2, 2}, 0.5, false, seed) == Graph(2, {{0, 1}}));
    }
  }

  TEST_CASE("golden [5,5] density 2.0 seed 42 is K5") {
    std::vector<Edge> k5;
    for (NodeId i = 0; i < 5; ++i)
      for (NodeId j = i + 1; j < 5; ++j) k5.push_back({i, j, 1});
    CHECK(gen_random_graph({5, 5}, 2.0, false, 42) == Graph(5, k5));
  }

  TEST_CASE("golden weighted fixture") {
    // Frozen from the first run of the generator.
    static const std::string GOLDEN_WEIGHTED =
        "(0,2,3)\n(0,6,8)\n(1,4,1)\n(2,6,10)\n(3,6,3)\n(3,7,5)\n(4,5,7)\n(5,6,3)\n";
    const Graph g = gen_random_graph({8, 8}, 1.0, true, 42);
    CHECK(render_edge_lines(g.edges(), true) == GOLDEN_WEIGHTED);
  }

  TEST_CASE("mean edge count at 50 nodes with the cycle density") {
    double total = 0;
    for (std::uint64_t s = 0; s < 3000; ++s) {
      total += static_cast<double>(gen_random_graph({50, 50}, 90.33 / 50, false, s).edge_count());
    }
    CHECK(std::abs(total / 3000 - 90.33) <= 0.1 * 90.33);
  }

  TEST_CASE("determinism and band bounds") {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
      const std::size_t lo = rng.between(2, 60);
      const SizeBand band{lo, lo + rng.below(40)};
      const double density = 0.1 + rng.unit() * 4;
      const std::uint64_t seed = rng.next();
      const Graph a = gen_random_graph(band, density, i % 2, seed);
      CHECK(a == gen_random_graph(band, density, i % 2, seed));
      CHECK(a.node_count() >= band.lo);
      CHECK(a.node_count() <= band.hi);
      for (const auto& e : a.edges()) {
        CHECK(e.w >= kMinWeight);
        CHECK(e.w <= kMaxWeight);
      }
    }
  }

  TEST_CASE("edge count is round(density * n) capped at n(n-1)/2") {
    const Graph g = gen_random_graph({40, 40}, 1.26, false, 3);
    CHECK(g.edge_count() == 50);
    CHECK(gen_random_graph({6, 6}, 100.0, false, 3).edge_count() == 15);
  }

  TEST_CASE("bad parameters are rejected") {
    CHECK_THROWS_AS(gen_random_graph({1, 5}, 1.0, false, 0), std::invalid_argument);
    CHECK_THROWS_AS(gen_random_graph({5, 4}, 1.0, false, 0), std::invalid_argument);
    CHECK_THROWS_AS(gen_random_graph({5, 5}, 0.0, false, 0), std::invalid_argument);
  }

  TEST_CASE("rng below is uniform enough and in range") {
    Rng rng(17);
    std::vector<int> hist(7, 0);
    for (int i = 0; i < 70000; ++i) ++hist.at(rng.below(7));
    for (int h : hist) CHECK(std::abs(h - 10000) < 500);
  }
}

TEST_SUITE("pick_far_pair") {
  TEST_CASE("path graph picks its ends") {
    CHECK(pick_far_pair(Graph(4, {{0, 1}, {1, 2}, {2, 3}}), 7) == std::pair<NodeId, NodeId>{0, 3});
  }

  TEST_CASE("two disjoint triangles pick a cross-component pair") {
    Graph g(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    const auto [s, t] = pick_far_pair(g, 1);
    CHECK(s < 3);
    CHECK(t >= 3);
  }

  TEST_CASE("two-cluster fixture picks one endpoint per cluster") {
    const auto f = testing::two_cluster_fixture();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto [s, t] = pick_far_pair(f.graph, seed);
      CHECK(f.planted[s] != f.planted[t]);
    }
  }

  TEST_CASE("pair is ordered, distinct and deterministic") {
    Rng rng(8);
    for (int i = 0; i < 100; ++i) {
      const Graph g = testing::random_graph(rng, rng.between(2, 100), rng.below(150), false);
      const auto p = pick_far_pair(g, i);
      CHECK(p.first < p.second);
      CHECK(p.second < g.node_count());
      CHECK(p == pick_far_pair(g, i));
    }
  }

  TEST_CASE("sampled pair is at least as far as any other sampled pair") {
    // With C(n,2) <= 64 every pair is a candidate, so the result is a diameter pair.
    Rng rng(9);
    for (int i = 0; i < 50; ++i) {
      const Graph g = testing::random_graph(rng, rng.between(2, 11), rng.below(20), false);
      const auto adj = g.adjacency();
      const auto [s, t] = pick_far_pair(g, i);
      const auto far = bfs_hops(adj, s)[t];
      for (NodeId a = 0; a < g.node_count(); ++a) {
        const auto hops = bfs_hops(adj, a);
        for (NodeId b = a + 1; b < g.node_count(); ++b) {
          if (!far) continue;  // unreachable beats everything
          CHECK(hops[b].has_value());
          CHECK(*hops[b] <= *far);
        }
      }
    }
  }

  TEST_CASE("requires two nodes") {
    CHECK_THROWS_AS(pick_far_pair(Graph(1, {}), 0), std::invalid_argument);
  }
}
