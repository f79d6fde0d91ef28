#include <doctest.h>

#include <random>
#include <sstream>

#include "gstar/weights.hpp"
#include "oracles.hpp"

using namespace gstar;

namespace {

AdjacencyGraph path_abc() {
    return AdjacencyGraph({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}});
}

AdjacencyGraph random_graph(int k, double edge_prob, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<> u(0.0, 1.0);
    std::vector<std::string> locs;
    for (int i = 0; i < k; ++i) locs.push_back("n" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> edges;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (u(rng) < edge_prob) edges.emplace_back(locs[i], locs[j]);
    return AdjacencyGraph(locs, edges);
}

}  // namespace

TEST_CASE("graph invariants are enforced") {
    CHECK_THROWS_AS(AdjacencyGraph({"A"}, {{"A", "A"}}), InvalidArgument);
    CHECK_THROWS_AS(AdjacencyGraph({"A"}, {{"A", "B"}}), InvalidArgument);
    CHECK_THROWS_AS(AdjacencyGraph({"A", "A"}, {}), InvalidArgument);
}

TEST_CASE("path graph distances") {
    auto d = graph_distances(path_abc(), 3);
    CHECK(d(0, 2) == 2);
    CHECK(d(0, 1) == 1);
    CHECK(d(0, 0) == 0);
}

TEST_CASE("4-cycle distances") {
    AdjacencyGraph cycle({"A", "B", "C", "D"},
                         {{"A", "B"}, {"B", "C"}, {"C", "D"}, {"D", "A"}});
    auto d = graph_distances(cycle, 3);
    CHECK(d(0, 2) == 2);
    CHECK(d(1, 3) == 2);
}

TEST_CASE("distances match Floyd-Warshall on random graphs") {
    for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
        auto g = random_graph(10, 0.3, seed);
        const int cap = 4;
        auto got = graph_distances(g, cap - 1);
        auto want = oracle::floyd_warshall(g, cap);
        CHECK((got.array() == want.array()).all());
    }
}

TEST_CASE("distance cap acts as disconnected sentinel") {
    AdjacencyGraph g({"A", "B", "X"}, {{"A", "B"}});
    auto d = graph_distances(g, 2);
    CHECK(d(0, 2) == 3);
    CHECK(d(2, 0) == 3);
}

TEST_CASE("build_weights on the path graph") {
    auto w = build_weights(path_abc(), 2);
    REQUIRE(w.mats.size() == 2);
    CHECK(w.level(0).isIdentity(0.0));
    CHECK(w.level(1)(0, 1) == doctest::Approx(1.0));
    CHECK(w.level(1)(0, 0) == 0.0);
    CHECK(w.level(1)(0, 2) == 0.0);
    CHECK(w.level(1)(1, 0) == doctest::Approx(0.5));
    CHECK(w.level(1)(1, 2) == doctest::Approx(0.5));
}

TEST_CASE("star center normalizes over three leaves") {
    AdjacencyGraph star({"X", "P", "Q", "R"},
                        {{"X", "P"}, {"X", "Q"}, {"X", "R"}});
    auto w = build_weights(star, 2);
    for (const auto& leaf : {1, 2, 3})
        CHECK(w.level(1)(0, leaf) == doctest::Approx(1.0 / 3));
    CHECK(w.level(1)(0, 0) == 0.0);
}

TEST_CASE("row sums are 0 or 1 and levels partition pairs") {
    for (unsigned seed : {7u, 8u, 9u}) {
        auto g = random_graph(12, 0.2, seed);
        auto w = build_weights(g, 5);
        for (int l = 0; l < w.eta; ++l) {
            for (int i = 0; i < w.k; ++i) {
                const double s = w.level(l).row(i).sum();
                CHECK((std::abs(s) < 1e-12 || std::abs(s - 1.0) < 1e-12));
            }
            CHECK(w.level(l).minCoeff() >= 0.0);
        }
        for (int i = 0; i < w.k; ++i)
            for (int j = 0; j < w.k; ++j) {
                int levels_hit = 0;
                for (int l = 0; l < w.eta; ++l)
                    if (w.level(l)(i, j) > 0.0) ++levels_hit;
                CHECK(levels_hit <= 1);
            }
    }
}

TEST_CASE("build_weights is permutation-equivariant") {
    auto g = random_graph(8, 0.3, 42);
    auto w = build_weights(g, 3);
    // relabel by reversing the location order
    std::vector<std::string> rev(g.locations().rbegin(), g.locations().rend());
    std::vector<std::pair<std::string, std::string>> edges;
    for (auto [i, j] : g.edge_indices())
        edges.emplace_back(g.locations()[i], g.locations()[j]);
    AdjacencyGraph gr(rev, edges);
    auto wr = build_weights(gr, 3);
    const int k = g.size();
    for (int l = 0; l < 3; ++l)
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                CHECK(w.level(l)(i, j) ==
                      doctest::Approx(wr.level(l)(k - 1 - i, k - 1 - j)));
}

TEST_CASE("adjacency file parsing") {
    std::istringstream in(
        "# taxi zones\n"
        "locations: Z9, Z8\n"
        "Z1,Z2\n"
        "Z2,Z3\n");
    auto g = AdjacencyGraph::from_stream(in);
    CHECK(g.size() == 5);
    CHECK(g.edge_indices().size() == 2);
    CHECK_NOTHROW(g.index_of("Z9"));

    std::istringstream bad("Z1;Z2\n");
    CHECK_THROWS_AS(AdjacencyGraph::from_stream(bad), ParseError);
}

TEST_CASE("fingerprint is stable under location relabeling order") {
    auto g = path_abc();
    AdjacencyGraph g2({"C", "B", "A"}, {{"B", "C"}, {"A", "B"}});
    CHECK(g.fingerprint() == g2.fingerprint());
    AdjacencyGraph g3({"A", "B", "C"}, {{"A", "C"}});
    CHECK(g.fingerprint() != g3.fingerprint());
}
