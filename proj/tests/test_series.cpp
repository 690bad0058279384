#include <catch2/catch_amalgamated.hpp>

#include "loopalg/scenarios.hpp"
#include "test_helpers.hpp"

using namespace loopalg;
using testing::path_graph;
using scenarios::Rng;
using scenarios::random_grk_series;
using scenarios::random_loop;
using Catch::Matchers::WithinAbs;

namespace {
WordSeries word_of(const GraphData& gd, std::initializer_list<const char*> ids, cx c = 1.0) {
    std::vector<int> letters;
    for (const char* id : ids) letters.push_back(gd.graph.edge(id));
    return single_word(make_word(gd, letters), c);
}
}  // namespace

TEST_CASE("grading-0 product concatenates at a common base and only there") {
    GraphData gd = path_graph(3);
    WordSeries x = word_of(gd, {"e1", "e1~"});
    REQUIRE(multiply(x, x).coeff(make_word(gd, {gd.graph.edge("e1"), gd.graph.edge("e1~"),
                                                gd.graph.edge("e1"), gd.graph.edge("e1~")})) ==
            cx(1.0));

    WordSeries y = word_of(gd, {"e2", "e2~"});  // based at v3
    REQUIRE(multiply(x, y).empty());

    WordSeries unit_v1 = single_word(Word(gd.graph.vertex("v1")));
    REQUIRE(coeff_distance(multiply(unit_v1, x), x) == 0.0);
    WordSeries unit_v3 = single_word(Word(gd.graph.vertex("v3")));
    REQUIRE(multiply(unit_v3, x).empty());
}

TEST_CASE("grading-0 product is associative on random series") {
    GraphData gd = path_graph(3);
    Rng rng(11);
    for (int i = 0; i < 30; ++i) {
        WordSeries a = random_grk_series(gd, rng, 0, 4, 2);
        WordSeries b = random_grk_series(gd, rng, 0, 4, 2);
        WordSeries c = random_grk_series(gd, rng, 0, 4, 2);
        REQUIRE(coeff_distance(multiply(multiply(a, b), c), multiply(a, multiply(b, c))) <= 1e-12);
    }
}

TEST_CASE("involution flips letters, reverses, and conjugates") {
    GraphData gd = path_graph(3);
    WordSeries x = word_of(gd, {"e1", "e1~"}, cx(0.0, 1.0));
    WordSeries xs = involution(gd, x);
    REQUIRE(xs.coeff(make_word(gd, {gd.graph.edge("e1"), gd.graph.edge("e1~")})) == cx(0.0, -1.0));

    // anti-homomorphism on random loop pairs
    Rng rng(5);
    for (int i = 0; i < 30; ++i) {
        int v = int(rng() % gd.graph.num_vertices());
        auto loops2 = enumerate_loops(gd, 2, v);
        auto loops4 = enumerate_loops(gd, 4, v);
        if (loops2.empty() || loops4.empty()) continue;
        WordSeries a = single_word(loops2[rng() % loops2.size()], cx(0.3, -0.7));
        WordSeries b = single_word(loops4[rng() % loops4.size()], cx(-1.1, 0.2));
        WordSeries lhs = involution(gd, multiply(a, b));
        WordSeries rhs = multiply(involution(gd, b), involution(gd, a));
        REQUIRE(coeff_distance(lhs, rhs) <= 1e-12);
    }

    // involutive
    WordSeries s = random_grk_series(gd, rng, 0, 6, 4);
    REQUIRE(coeff_distance(involution(gd, involution(gd, s)), s) <= 1e-12);
}

TEST_CASE("rotation of a degree-2 loop carries its eigenvector ratio") {
    GraphData gd = path_graph(3);
    WordSeries x = word_of(gd, {"e1", "e1~"});
    WordSeries r = rho(gd, x);
    Word rotated = make_word(gd, {gd.graph.edge("e1~"), gd.graph.edge("e1")});
    REQUIRE_THAT(r.coeff(rotated).real(), WithinAbs(std::pow(2.0, -0.5), 1e-13));
    REQUIRE(r.terms.size() == 1);
}

TEST_CASE("full rotation is the identity on loops, constants are fixed") {
    GraphData gd = path_graph(4);
    Rng rng(17);
    for (int deg : {2, 4, 6}) {
        for (int i = 0; i < 10; ++i) {
            WordSeries x = single_word(random_loop(gd, rng, deg), cx(0.7, 0.1));
            REQUIRE(coeff_distance(rho_power(gd, x, deg), x) <= 1e-12);
            // iterating single steps agrees with the power formula
            WordSeries it = x;
            for (int k = 0; k < 3; ++k) it = rho(gd, it);
            REQUIRE(coeff_distance(it, rho_power(gd, x, 3)) <= 1e-12);
        }
    }
    WordSeries c = single_word(Word(0), cx(2.0, -1.0));
    REQUIRE(coeff_distance(rho(gd, c), c) == 0.0);
}

TEST_CASE("modular scaling fixes loops exactly and scales paths") {
    GraphData gd = path_graph(3);
    Rng rng(23);
    for (int i = 0; i < 20; ++i) {
        WordSeries x = single_word(random_loop(gd, rng, 4));
        REQUIRE(coeff_distance(sigma_minus_i(gd, x), x) == 0.0);  // exact, not approximate
    }
    WordSeries e1 = word_of(gd, {"e1"});
    REQUIRE_THAT(sigma_minus_i(gd, e1).coeff(make_word(gd, {gd.graph.edge("e1")})).real(),
                 WithinAbs(std::sqrt(2.0), 1e-13));
    WordSeries c = single_word(Word(1));
    REQUIRE(coeff_distance(sigma_minus_i(gd, c), c) == 0.0);
}

TEST_CASE("degree scaling maps") {
    GraphData gd = path_graph(3);
    WordSeries x = word_of(gd, {"e1", "e1~"});
    REQUIRE(number_map(x).coeff(make_word(gd, {gd.graph.edge("e1"), gd.graph.edge("e1~")})) ==
            cx(2.0));

    Rng rng(31);
    WordSeries s = remove_constants(random_grk_series(gd, rng, 0, 6, 4));
    if (!s.empty()) {
        REQUIRE(coeff_distance(number_map(sigma_inv_map(s)), s) <= 1e-12);
        REQUIRE(coeff_distance(sigma_inv_map(number_map(s)), s) <= 1e-12);
    }
    WordSeries with_const = s + single_word(Word(0), 1.0);
    REQUIRE_THROWS_AS(sigma_inv_map(with_const), std::invalid_argument);
}

TEST_CASE("cyclic averaging is idempotent and rotation-invariant") {
    GraphData gd = path_graph(3);
    Rng rng(37);
    for (int i = 0; i < 20; ++i) {
        WordSeries x = random_grk_series(gd, rng, 0, 6, 3);
        WordSeries sx = symmetrize(gd, x);
        REQUIRE(coeff_distance(symmetrize(gd, sx), sx) <= 1e-12);
        REQUIRE(coeff_distance(rho(gd, sx), sx) <= 1e-12);
    }
}

TEST_CASE("norm examples and properties") {
    GraphData gd = path_graph(3);
    const double R = 4.0 * std::sqrt(2.0);

    REQUIRE(norm_R(gd, WordSeries(0), R) == 0.0);

    WordSeries x = word_of(gd, {"e1", "e1~"});
    double s1 = gd.sigma(gd.graph.edge("e1")), s2 = gd.sigma(gd.graph.edge("e1~"));
    REQUIRE_THAT(norm_R(gd, x, R), WithinAbs((s1 + s2) * R * R, 1e-10));

    Rng rng(41);
    for (int i = 0; i < 20; ++i) {
        WordSeries a = random_grk_series(gd, rng, 0, 4, 3);
        WordSeries b = random_grk_series(gd, rng, 0, 4, 3);
        REQUIRE(norm_R(gd, multiply(a, b), R) <= norm_R(gd, a, R) * norm_R(gd, b, R) + 1e-10);
        REQUIRE(norm_R(gd, a, R) <= norm_R_sigma(gd, a, R) + 1e-12);
        WordSeries sa = symmetrize(gd, a);
        REQUIRE_THAT(norm_R(gd, sa, R), WithinAbs(norm_R_sigma(gd, sa, R), 1e-9));
    }

    // homogeneous parts keep their sigma-norm under rotation
    for (int i = 0; i < 10; ++i) {
        WordSeries h(0);
        for (int j = 0; j < 3; ++j) h.add(random_loop(gd, rng, 4), cx(0.1 * double(j + 1), -0.2));
        REQUIRE_THAT(norm_R_sigma(gd, rho(gd, h), R), WithinAbs(norm_R_sigma(gd, h, R), 1e-9));
    }
}

TEST_CASE("substitution basics") {
    GraphData gd = path_graph(3);
    Rng rng(43);
    EdgeTuple id = identity_tuple(gd);
    for (int i = 0; i < 10; ++i) {
        WordSeries x = random_grk_series(gd, rng, 0, 6, 3);
        REQUIRE(coeff_distance(substitute(gd, x, id, 16), x) <= 1e-12);
    }

    // bilinearity: adding a path to one image adds the matching cross term
    int e1 = gd.graph.edge("e1");
    EdgeTuple images = identity_tuple(gd);
    Word p = make_word(gd, {e1, gd.graph.edge("e1~"), e1});  // degree-3 path v1->v2
    images[e1] += single_word(p);
    WordSeries x = word_of(gd, {"e1", "e1~"});
    WordSeries got = substitute(gd, x, images, 16);
    REQUIRE(got.coeff(make_word(gd, {e1, gd.graph.edge("e1~")})) == cx(1.0));
    Word cross = p;
    cross.letters.push_back(gd.graph.edge("e1~"));
    REQUIRE(got.coeff(cross) == cx(1.0));
    REQUIRE(got.terms.size() == 2);

    // endpoint-incompatible images are rejected
    EdgeTuple bad = identity_tuple(gd);
    bad[e1] = word_of(gd, {"e1~"});
    REQUIRE_THROWS_AS(substitute(gd, x, bad, 16), std::invalid_argument);

    // substituting degree >= 1 images into degree d never lowers the degree
    for (int i = 0; i < 10; ++i) {
        WordSeries y = random_grk_series(gd, rng, 0, 4, 2);
        WordSeries out = substitute(gd, y, images, 16);
        int dmin_in = y.empty() ? 0 : y.min_degree();
        if (!out.empty()) REQUIRE(out.min_degree() >= dmin_in);
    }
}

TEST_CASE("graded product: middle strings pair with inverse weights") {
    GraphData gd = path_graph(3);
    int e1 = gd.graph.edge("e1");
    WordSeries x = word_of(gd, {"e1~", "e1"});
    x.k = 1;
    WordSeries prod = wedge_k(gd, x, x);
    REQUIRE(prod.terms.size() == 1);
    REQUIRE_THAT(prod.coeff(make_word(gd, {gd.graph.edge("e1~"), e1})).real(),
                 WithinAbs(1.0 / gd.sigma(e1), 1e-13));

    // mismatched middle strings annihilate
    WordSeries y = word_of(gd, {"e2~", "e2"});
    y.k = 1;
    REQUIRE(wedge_k(gd, x, y).empty());

    // unit law against the assembled unit
    WordSeries unit1 = grk_unit(gd, 1);
    Rng rng(47);
    for (int i = 0; i < 10; ++i) {
        WordSeries z = random_grk_series(gd, rng, 1, 2, 2);
        REQUIRE(coeff_distance(wedge_k(gd, z, unit1), z) <= 1e-12);
        REQUIRE(coeff_distance(wedge_k(gd, unit1, z), z) <= 1e-12);
    }
}

TEST_CASE("graded product is associative and the involution reverses it") {
    GraphData gd = path_graph(3);
    Rng rng(53);
    for (int k : {1, 2}) {
        for (int i = 0; i < 15; ++i) {
            WordSeries a = random_grk_series(gd, rng, k, 2, 2);
            WordSeries b = random_grk_series(gd, rng, k, 2, 2);
            WordSeries c = random_grk_series(gd, rng, k, 2, 2);
            REQUIRE(coeff_distance(wedge_k(gd, wedge_k(gd, a, b), c),
                                   wedge_k(gd, a, wedge_k(gd, b, c))) <= 1e-12);
            WordSeries lhs = involution(gd, wedge_k(gd, a, b));
            WordSeries rhs = wedge_k(gd, involution(gd, b), involution(gd, a));
            REQUIRE(coeff_distance(lhs, rhs) <= 1e-12);
        }
    }
}

TEST_CASE("truncation caps stored degrees") {
    GraphData gd = path_graph(2);
    WordSeries x = word_of(gd, {"e1", "e1~"});
    WordSeries big = concat_mul(multiply(x, x), multiply(x, x));  // degree 8
    REQUIRE(truncated(big, 6).empty());
    REQUIRE(!truncated(big, 8).empty());
}

TEST_CASE("grading mismatches are rejected") {
    GraphData gd = path_graph(3);
    WordSeries x = word_of(gd, {"e1", "e1~"});
    WordSeries y = x;
    y.k = 1;
    REQUIRE_THROWS_AS(multiply(x, y), std::invalid_argument);
    REQUIRE_THROWS_AS(wedge_k(gd, x, x), std::invalid_argument);
    WordSeries z = word_of(gd, {"e1"});  // not a loop
    z.k = 1;
    REQUIRE_THROWS_AS(wedge_k(gd, z, z), std::invalid_argument);
}
