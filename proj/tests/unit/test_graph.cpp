#include "doctest.h"
#include "graphdc/graph.hpp"
#include "graphdc/graph_text.hpp"
#include "graphdc/oracle.hpp"
#include "support/fixtures.hpp"
#include "support/reference_oracles.hpp"

using namespace graphdc;

TEST_SUITE("graph") {
  TEST_CASE("edges are canonical and sorted") {
    Graph g(4, {{3, 1}, {0, 2}, {2, 1}});
    REQUIRE(g.edge_count() == 3);
    CHECK(g.edges()[0] == Edge{0, 2, 1});
    CHECK(g.edges()[1] == Edge{1, 2, 1});
    CHECK(g.edges()[2] == Edge{1, 3, 1});
    CHECK(g.has_edge(3, 1));
    CHECK_FALSE(g.has_edge(0, 3));
  }

  TEST_CASE("invariants are enforced") {
    CHECK_THROWS_AS(Graph(3, {{1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(3, {{0, 3}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(3, {{0, 1, 0}}, true), std::invalid_argument);
  }

  TEST_CASE("unweighted graphs carry unit weights") {
    Graph g(2, {{0, 1, 7}});
    CHECK(g.edges()[0].w == 1);
    CHECK(g.weight(1, 0) == Weight{1});
    Graph w(2, {{0, 1, 7}}, true);
    CHECK(w.weight(0, 1) == Weight{7});
  }

  TEST_CASE("query invariants") {
    CHECK_THROWS_AS(Query::connectivity(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(Query::shortest_path(0, 0), std::invalid_argument);
    const Query c = Query::cycle();
    CHECK_FALSE(c.source().has_value());
    CHECK_FALSE(Query::make(TaskKind::TriangleCount, 1, 2).source().has_value());
    CHECK_THROWS_AS(Query::connectivity(0, 5).validate_for(Graph(3, {})), std::invalid_argument);
  }

  TEST_CASE("task names round-trip") {
    for (TaskKind t : kAllTasks) CHECK(parse_task(to_string(t)) == t);
    CHECK_THROWS_AS(parse_task("triangles"), std::invalid_argument);
  }

  TEST_CASE("distance ordering puts unreachable last") {
    CHECK(Distance::of(3) < Distance::of(4));
    CHECK(Distance::of(1000) < Distance::unreachable());
    CHECK_THROWS_AS(Distance::unreachable().value(), std::logic_error);
  }

  TEST_CASE("answers render and match tasks") {
    CHECK(to_string(Answer{YesNo{true}}) == "yes");
    CHECK(to_string(Answer{Distance::of(5)}) == "distance=5");
    CHECK(to_string(Answer{Distance::unreachable()}) == "distance=unreachable");
    CHECK(to_string(Answer{Count{3}}) == "triangles=3");
    CHECK(answer_matches_task(Answer{YesNo{}}, TaskKind::Cycle));
    CHECK_FALSE(answer_matches_task(Answer{Count{}}, TaskKind::Cycle));
  }
}

TEST_SUITE("graph_text") {
  TEST_CASE("empty 3-node graph renders header only") {
    const std::string text = render_graph_text(Graph(3, {}));
    CHECK(text ==
          "In an undirected graph with 3 nodes numbered from 0 to 2, (i,j) means that node i and "
          "node j are connected with an undirected edge. The edges are:\n");
    CHECK(parse_graph_text(text) == Graph(3, {}));
  }

  TEST_CASE("K2 has exactly one edge line") {
    const std::string text = render_graph_text(Graph(2, {{0, 1}}));
    CHECK(text.substr(text.find('\n') + 1) == "(0,1)\n");
  }

  TEST_CASE("weighted edges carry weights") {
    const std::string text = render_graph_text(Graph(3, {{0, 2, 4}, {0, 1, 9}}, true));
    CHECK(text.find("(i,j,w)") != std::string::npos);
    CHECK(text.substr(text.find('\n') + 1) == "(0,1,9)\n(0,2,4)\n");
  }

  TEST_CASE("parse rejects deviations") {
    const std::string good = render_graph_text(Graph(3, {{0, 1}}));
    CHECK_THROWS_AS(parse_graph_text(good + "(1,2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_graph_text(good + "(1,1)\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_graph_text(good + "(0,1)\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_graph_text(good + "(1,2,3)\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_graph_text("In a graph.\n"), std::invalid_argument);
  }

  TEST_CASE("round-trip on generated graphs") {
    Rng rng(11);
    for (int i = 0; i < 300; ++i) {
      const std::size_t n = rng.between(0, 1) ? rng.between(2, 100) : rng.between(0, 3);
      const bool weighted = i % 2 == 1;
      const Graph g = n < 2 ? Graph(n, {}, weighted)
                            : testing::random_graph(rng, n, rng.below(3 * n), weighted);
      CHECK(parse_graph_text(render_graph_text(g)) == g);
    }
  }
}

TEST_SUITE("oracle") {
  TEST_CASE("K2 connectivity is yes") {
    CHECK(oracle_solve(Graph(2, {{0, 1}}), Query::connectivity(0, 1)) == Answer{YesNo{true}});
  }

  TEST_CASE("unit 5-cycle shortest path 0 to 2 is 2") {
    Graph c5(5, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {0, 4, 1}}, true);
    CHECK(oracle_solve(c5, Query::shortest_path(0, 2)) == Answer{Distance::of(2)});
  }

  TEST_CASE("unreachable is a distinct value") {
    Graph g(4, {{0, 1}, {2, 3}});
    CHECK(oracle_solve(g, Query::shortest_path(0, 3)) == Answer{Distance::unreachable()});
    CHECK(oracle_solve(g, Query::connectivity(0, 3)) == Answer{YesNo{false}});
  }

  TEST_CASE("cycle means a component with edges >= nodes") {
    CHECK_FALSE(has_cycle(Graph(4, {{0, 1}, {1, 2}, {2, 3}})));
    CHECK(has_cycle(Graph(4, {{0, 1}, {1, 2}, {0, 2}})));
    CHECK_FALSE(has_cycle(Graph(0, {})));
  }

  TEST_CASE("random 30-node triangle count equals brute force") {
    Rng rng(30);
    const Graph g = testing::random_graph(rng, 30, 120, false);
    CHECK(count_triangles(g) == ref::triangles_brute_force(g));
  }

  TEST_CASE("cycle oracle agrees with DFS back edges on 1000 graphs") {
    for (const auto& inst : testing::random_corpus(TaskKind::Cycle, 1000, 101)) {
      REQUIRE(has_cycle(inst.graph) == ref::has_cycle_dfs(inst.graph));
    }
  }

  TEST_CASE("unweighted shortest path agrees with BFS hops") {
    for (const auto& inst : testing::random_corpus(TaskKind::Connectivity, 300, 102)) {
      const auto hops = bfs_hops(inst.graph.adjacency(), *inst.query.source());
      const auto got = oracle_solve(inst.graph, Query::shortest_path(*inst.query.source(),
                                                                     *inst.query.target()));
      const auto& h = hops[*inst.query.target()];
      REQUIRE(got == Answer{h ? Distance::of(*h) : Distance::unreachable()});
    }
  }

  TEST_CASE("every task agrees with the reference oracles") {
    for (TaskKind task : kAllTasks) {
      for (const auto& inst : testing::random_corpus(task, 250, 103, 30)) {
        REQUIRE(oracle_solve(inst.graph, inst.query) == ref::solve(inst.graph, inst.query));
      }
    }
  }
}
