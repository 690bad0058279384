#include <catch2/catch_amalgamated.hpp>

#include "loopalg/io.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace loopalg;
using testing::path_graph;

TEST_CASE("loading the smallest graph synthesizes both orientations") {
    json doc = json::parse(R"({
      "vertices": [{"id":"v1","parity":"+"},{"id":"v2","parity":"-"}],
      "edges": [{"id":"e1","src":"v1","dst":"v2"}]})");
    BipartiteGraph g = parse_graph(doc);
    REQUIRE(g.num_edges() == 2);
    REQUIRE(g.edge_id(g.opposite(g.edge("e1"))) == "e1~");
    REQUIRE(g.source(g.edge("e1")) == g.vertex("v1"));
}

TEST_CASE("forward edges start at positive vertices even when listed reversed") {
    json doc = json::parse(R"({
      "vertices": [{"id":"v1","parity":"+"},{"id":"v2","parity":"-"}],
      "edges": [{"id":"e1","src":"v2","dst":"v1"}]})");
    BipartiteGraph g = parse_graph(doc);
    REQUIRE(g.source(g.edge("e1")) == g.vertex("v1"));
    REQUIRE(g.edge_positive(g.edge("e1")));
}

TEST_CASE("positive edge set of the 3-vertex path") {
    GraphData gd = path_graph(3);
    auto ep = gd.graph.positive_edges();
    REQUIRE(ep.size() == 2);
    for (int e : ep) REQUIRE(gd.graph.vertex_positive(gd.source(e)));
}

TEST_CASE("validation errors carry the offending element") {
    json same_parity = json::parse(R"({
      "vertices": [{"id":"a","parity":"+"},{"id":"b","parity":"+"}],
      "edges": [{"id":"e1","src":"a","dst":"b"}]})");
    REQUIRE_THROWS_WITH(parse_graph(same_parity),
                        Catch::Matchers::ContainsSubstring("e1"));

    json dangling = json::parse(R"({
      "vertices": [{"id":"a","parity":"+"}],
      "edges": [{"id":"e1","src":"a","dst":"zz"}]})");
    REQUIRE_THROWS_WITH(parse_graph(dangling), Catch::Matchers::ContainsSubstring("zz"));

    json disconnected = json::parse(R"({
      "vertices": [{"id":"a","parity":"+"},{"id":"b","parity":"-"},
                   {"id":"c","parity":"+"},{"id":"d","parity":"-"}],
      "edges": [{"id":"e1","src":"a","dst":"b"},{"id":"e2","src":"c","dst":"d"}]})");
    REQUIRE_THROWS_WITH(parse_graph(disconnected),
                        Catch::Matchers::ContainsSubstring("disconnected"));

    json broken_opp = json::parse(R"({
      "vertices": [{"id":"a","parity":"+"},{"id":"b","parity":"-"}],
      "edges": [{"id":"e1","src":"a","dst":"b","opp":"e2"},
                {"id":"e2","src":"b","dst":"a","opp":"e3"},
                {"id":"e3","src":"a","dst":"b","opp":"e2"}]})");
    REQUIRE_THROWS_AS(parse_graph(broken_opp), GraphError);
}

TEST_CASE("perron data on the 2-vertex path") {
    GraphData gd = path_graph(2);
    REQUIRE_THAT(gd.delta(), Catch::Matchers::WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(gd.perron.mu[0], Catch::Matchers::WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(gd.perron.mu[1], Catch::Matchers::WithinAbs(1.0, 1e-12));
    for (int e = 0; e < 2; ++e) REQUIRE_THAT(gd.sigma(e), Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("power iteration matches the dense eigensolve oracle") {
    for (int n : {2, 3, 4, 5}) {
        GraphData gd = path_graph(n);
        auto orc = oracles::jacobi_largest(oracles::adjacency(gd.graph));
        INFO("path graph on " << n << " vertices");
        REQUIRE_THAT(gd.delta(), Catch::Matchers::WithinAbs(orc.value, 1e-10));
        for (int v = 0; v < n; ++v)
            REQUIRE_THAT(gd.perron.mu[v], Catch::Matchers::WithinAbs(orc.vector[v], 1e-9));
    }
}

TEST_CASE("closed forms of the small path spectra") {
    REQUIRE_THAT(path_graph(3).delta(), Catch::Matchers::WithinAbs(std::sqrt(2.0), 1e-12));
    REQUIRE_THAT(path_graph(4).delta(),
                 Catch::Matchers::WithinAbs((1.0 + std::sqrt(5.0)) / 2.0, 1e-12));
    REQUIRE_THAT(path_graph(5).delta(), Catch::Matchers::WithinAbs(std::sqrt(3.0), 1e-12));
}

TEST_CASE("eigen relation and edge weight identities") {
    for (int n : {2, 3, 4, 5}) {
        GraphData gd = path_graph(n);
        // A mu = delta mu componentwise
        for (int v = 0; v < gd.graph.num_vertices(); ++v) {
            double acc = 0.0;
            for (int e : gd.graph.out_edges[v]) acc += gd.perron.mu[gd.target(e)];
            REQUIRE_THAT(acc, Catch::Matchers::WithinAbs(gd.delta() * gd.perron.mu[v],
                                                         1e-12 * gd.delta()));
            REQUIRE(gd.perron.mu[v] > 0.0);
        }
        for (int e = 0; e < gd.graph.num_edges(); ++e) {
            REQUIRE_THAT(gd.sigma(e) * gd.sigma(gd.opposite(e)),
                         Catch::Matchers::WithinAbs(1.0, 1e-12));
            // lambda(e) <= delta, with equality exactly when s(e) is a leaf
            REQUIRE(gd.lambda(e) <= gd.delta() + 1e-12);
            if (gd.graph.out_edges[gd.source(e)].size() > 1)
                REQUIRE(gd.lambda(e) < gd.delta() - 1e-12);
            else
                REQUIRE_THAT(gd.lambda(e), Catch::Matchers::WithinAbs(gd.delta(), 1e-12));
        }
    }
}

TEST_CASE("sigma on the 3-vertex path") {
    GraphData gd = path_graph(3);
    REQUIRE_THAT(gd.sigma(gd.graph.edge("e1")),
                 Catch::Matchers::WithinAbs(std::pow(2.0, 0.25), 1e-12));
}
