#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "nctefa/errors.hpp"
#include "nctefa/graph.hpp"
#include "nctefa/rng.hpp"
#include "nctefa/synth.hpp"

using namespace nctefa;

TEST_CASE("circulant C_n(1,2) structure") {
    static constexpr int kOffsets[] = {1, 2};
    const Graph g = circulant_graph(12, kOffsets);
    std::set<std::pair<int, int>> expect;
    for (int i = 0; i < 12; ++i)
        for (int d : {1, 2}) {
            const int j = (i + d) % 12;
            expect.insert({std::min(i, j), std::max(i, j)});
        }
    CHECK(g.edges() == std::vector<std::pair<int, int>>(expect.begin(), expect.end()));
    for (int v = 0; v < 12; ++v) CHECK(g.degree(v) == 4);
}

TEST_CASE("pairing model produces simple regular graphs") {
    Rng rng(17);
    for (int n : {12, 15, 24}) {
        const Graph g = random_regular_graph(n, 4, rng);
        CHECK(g.node_count() == n);
        for (int v = 0; v < n; ++v) CHECK(g.degree(v) == 4);
        CHECK(g.edge_count() == static_cast<std::size_t>(2 * n));
    }
}

TEST_CASE("pairing rejection budget surfaces as an error") {
    Rng rng(1);
    // K5 is the only simple 4-regular graph on 5 nodes; one attempt rarely lands on it
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 8; ++i) (void)random_regular_graph(5, 4, rng, 1);
        }(),
        NumericError);
}

TEST_CASE("impossible degree sequences are rejected") {
    Rng rng(1);
    CHECK_THROWS_AS(random_regular_graph(4, 4, rng), DataError);  // n <= degree
    CHECK_THROWS_AS(random_regular_graph(7, 3, rng), DataError);  // odd n*d
}

TEST_CASE("regular-pair task invariants") {
    const GraphDataset ds = synth_regular_pair(40, 9);
    REQUIRE(ds.size() == 40);
    int zeros = 0, ones = 0;
    for (const auto& e : ds.entries) {
        (e.label == 0 ? zeros : ones) += 1;
        CHECK(e.graph.node_count() >= 12);
        CHECK(e.graph.node_count() <= 24);
        for (int v = 0; v < e.graph.node_count(); ++v) CHECK(e.graph.degree(v) == 4);
    }
    CHECK(zeros == 20);
    CHECK(ones == 20);
    // entries sorted by id
    for (std::size_t i = 1; i < ds.size(); ++i) CHECK(ds.entries[i - 1].id < ds.entries[i].id);
}

TEST_CASE("synthesis is deterministic per seed") {
    const GraphDataset a = synth_regular_pair(30, 4242);
    const GraphDataset b = synth_regular_pair(30, 4242);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.entries[i].id == b.entries[i].id);
        CHECK(a.entries[i].label == b.entries[i].label);
        CHECK(a.entries[i].graph.edges() == b.entries[i].graph.edges());
    }
    const GraphDataset c = synth_regular_pair(30, 4243);
    bool all_same = true;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a.entries[i].graph.edges() == c.entries[i].graph.edges())) all_same = false;
    CHECK_FALSE(all_same);
}
