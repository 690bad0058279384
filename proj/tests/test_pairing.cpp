#include <catch2/catch_amalgamated.hpp>

#include "loopalg/scenarios.hpp"
#include "test_helpers.hpp"

using namespace loopalg;
using testing::path_graph;
using scenarios::Rng;
using scenarios::random_loop;
using Catch::Matchers::WithinAbs;

TEST_CASE("pairing counts match the Catalan numbers") {
    const long catalan[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430};
    for (int n = 0; n <= 8; ++n)
        REQUIRE(long(enumerate_pairings(n).size()) == catalan[n]);
}

TEST_CASE("pairings are perfect and non-crossing") {
    for (int n = 1; n <= 6; ++n) {
        for (const auto& p : enumerate_pairings(n)) {
            REQUIRE(int(p.pairs.size()) == n);
            std::vector<int> hit(2 * n, 0);
            for (auto [i, j] : p.pairs) {
                REQUIRE(i < j);
                hit[i]++;
                hit[j]++;
            }
            for (int h : hit) REQUIRE(h == 1);
            for (auto [i, j] : p.pairs)
                for (auto [k, l] : p.pairs)
                    REQUIRE(!(i < k && k < j && j < l));  // crossing pattern
        }
    }
}

TEST_CASE("pairing moments on the 3-vertex path") {
    GraphData gd = path_graph(3);
    int e1 = gd.graph.edge("e1"), e1o = gd.graph.edge("e1~");

    REQUIRE_THAT(pairing_moment(gd, make_word(gd, {e1, e1o})).real(),
                 WithinAbs(std::pow(2.0, 0.25), 1e-12));
    REQUIRE_THAT(pairing_moment(gd, make_word(gd, {e1, e1o, e1, e1o})).real(),
                 WithinAbs(1.0 + std::sqrt(2.0), 1e-12));

    // odd words and non-loop paths evaluate to zero by convention
    Word odd = make_word(gd, {e1, e1o, e1});
    REQUIRE(pairing_moment(gd, odd) == cx(0.0));
    Word nonloop = make_word(gd, {e1});
    REQUIRE(pairing_moment(gd, nonloop) == cx(0.0));
}

TEST_CASE("interval dynamic program equals the literal pairing sum") {
    GraphData gd = path_graph(4);
    Rng rng(61);
    for (int deg : {2, 4, 6, 8}) {
        for (int i = 0; i < 25; ++i) {
            Word w = random_loop(gd, rng, deg);
            double literal = 0.0;
            for (const auto& p : enumerate_pairings(deg / 2))
                literal += pairing_weight(gd, w.letters, p);
            REQUIRE_THAT(wick_moment(gd, w), WithinAbs(literal, 1e-12));
        }
    }
}

TEST_CASE("canonical potential: coefficients, self-adjointness, symmetry") {
    GraphData gd = path_graph(3);
    WordSeries v = v0(gd);
    REQUIRE(v.terms.size() == 4);
    int e1 = gd.graph.edge("e1");
    // coefficient of e.e° is sigma(e)/2; the normalization is pinned by the
    // gradient identity checked in the calculus suite
    REQUIRE_THAT(v.coeff(make_word(gd, {e1, gd.opposite(e1)})).real(),
                 WithinAbs(0.5 * std::pow(2.0, 0.25), 1e-12));

    REQUIRE(coeff_distance(involution(gd, v), v) <= 1e-13);
    REQUIRE(coeff_distance(symmetrize(gd, v), v) <= 1e-13);
    REQUIRE(coeff_distance(rho(gd, v), v) <= 1e-13);
}

TEST_CASE("canonical potential on the 2-vertex path has unit weights") {
    GraphData gd = path_graph(2);
    WordSeries v = v0(gd);
    int e1 = gd.graph.edge("e1");
    REQUIRE(v.terms.size() == 2);
    REQUIRE_THAT(v.coeff(make_word(gd, {e1, gd.opposite(e1)})).real(), WithinAbs(0.5, 1e-14));
    REQUIRE_THAT(v.coeff(make_word(gd, {gd.opposite(e1), e1})).real(), WithinAbs(0.5, 1e-14));
}

TEST_CASE("vertex-resolved trace at grading 0") {
    GraphData gd = path_graph(3);
    int e1 = gd.graph.edge("e1");
    WordSeries x = single_word(make_word(gd, {e1, gd.opposite(e1)}));
    auto tr = trace_k(gd, x);
    REQUIRE_THAT(tr[gd.graph.vertex("v1")].real(), WithinAbs(std::pow(2.0, 0.25), 1e-12));
    REQUIRE(tr.count(gd.graph.vertex("v2")) == 0);

    WordSeries unit = single_word(Word(gd.graph.vertex("v2")));
    auto tru = trace_k(gd, unit);
    REQUIRE_THAT(tru[gd.graph.vertex("v2")].real(), WithinAbs(1.0, 1e-14));
}

TEST_CASE("grading-1 trace closes the side strings consistently") {
    GraphData gd = path_graph(3);
    Rng rng(67);
    // vertex sums of the traced inclusion match the one-level-down trace
    for (int i = 0; i < 20; ++i) {
        WordSeries x(0);
        x.add(random_loop(gd, rng, 4), cx(0.8, 0.0));
        x.add(random_loop(gd, rng, 2), cx(-0.3, 0.0));
        WordSeries inc = include_up(gd, x);
        cx lhs = 0.0, rhs = 0.0;
        for (const auto& [v, c] : trace_k(gd, inc)) {
            (void)v;
            lhs += c;
        }
        for (const auto& [v, c] : trace_k(gd, x)) {
            (void)v;
            rhs += c;
        }
        REQUIRE_THAT(std::abs(lhs - rhs), WithinAbs(0.0, 1e-10));
    }
}

TEST_CASE("traciality of the pairing state") {
    GraphData gd = path_graph(4);
    Rng rng(71);
    for (int i = 0; i < 60; ++i) {
        int v = int(rng() % gd.graph.num_vertices());
        auto l2 = enumerate_loops(gd, 2 + 2 * int(rng() % 3), v);
        auto l4 = enumerate_loops(gd, 2 + 2 * int(rng() % 3), v);
        if (l2.empty() || l4.empty()) continue;
        Word u = l2[rng() % l2.size()];
        Word w = l4[rng() % l4.size()];
        cx uw = pairing_moment(gd, concat_words(u, w));
        cx wu = pairing_moment(gd, concat_words(w, u));
        REQUIRE_THAT(std::abs(uw - wu), WithinAbs(0.0, 1e-10));
    }
}
