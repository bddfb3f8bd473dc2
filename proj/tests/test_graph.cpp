#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <numeric>

#include "nctefa/errors.hpp"
#include "nctefa/graph.hpp"
#include "nctefa/json_io.hpp"
#include "nctefa/rng.hpp"
#include "test_util.hpp"

using namespace nctefa;

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
}

} // namespace

TEST_CASE("edge list loading") {
    testutil::TempDir tmp("graph_load");

    SUBCASE("basic two-edge graph") {
        write_text(tmp.path("a.json"), R"({"0": [[0,1],[1,2]]})");
        const GraphDataset ds = load_edge_list_json(tmp.path("a.json"));
        REQUIRE(ds.size() == 1);
        CHECK(ds.entries[0].id == "0");
        CHECK(ds.entries[0].graph.node_count() == 3);
        CHECK(ds.entries[0].graph.edges() ==
              std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
    }

    SUBCASE("reversed duplicate pair collapses") {
        write_text(tmp.path("b.json"), R"({"0": [[0,1],[1,0]]})");
        const GraphDataset ds = load_edge_list_json(tmp.path("b.json"));
        REQUIRE(ds.size() == 1);
        CHECK(ds.entries[0].graph.node_count() == 2);
        CHECK(ds.entries[0].graph.edge_count() == 1);
    }

    SUBCASE("self-loop rejected naming the graph") {
        write_text(tmp.path("c.json"), R"({"0": [[0,0]]})");
        CHECK_THROWS_WITH_AS(load_edge_list_json(tmp.path("c.json")),
                             doctest::Contains("\"0\""), DataError);
    }

    SUBCASE("negative id rejected") {
        write_text(tmp.path("d.json"), R"({"g": [[-1,0]]})");
        CHECK_THROWS_AS(load_edge_list_json(tmp.path("d.json")), DataError);
    }

    SUBCASE("id gap rejected rather than compacted") {
        write_text(tmp.path("e.json"), R"({"g": [[0,1],[3,1]]})");
        CHECK_THROWS_WITH_AS(load_edge_list_json(tmp.path("e.json")),
                             doctest::Contains("contiguous"), DataError);
    }

    SUBCASE("malformed JSON") {
        write_text(tmp.path("f.json"), "{\"0\": [[0,1]");
        CHECK_THROWS_AS(load_edge_list_json(tmp.path("f.json")), DataError);
    }

    SUBCASE("key order does not matter") {
        write_text(tmp.path("g1.json"), R"({"a": [[0,1]], "b": [[0,1],[1,2]]})");
        write_text(tmp.path("g2.json"), R"({"b": [[0,1],[1,2]], "a": [[0,1]]})");
        const GraphDataset d1 = load_edge_list_json(tmp.path("g1.json"));
        const GraphDataset d2 = load_edge_list_json(tmp.path("g2.json"));
        REQUIRE(d1.size() == d2.size());
        for (std::size_t i = 0; i < d1.size(); ++i) {
            CHECK(d1.entries[i].id == d2.entries[i].id);
            CHECK(d1.entries[i].graph.edges() == d2.entries[i].graph.edges());
        }
    }
}

TEST_CASE("targets join") {
    testutil::TempDir tmp("graph_targets");
    write_text(tmp.path("g.json"), R"({"0": [[0,1]], "1": [[0,1],[1,2]]})");
    const GraphDataset ds = load_edge_list_json(tmp.path("g.json"));

    SUBCASE("labels joined in id order") {
        write_text(tmp.path("t.csv"), "id,target\n0,1\n1,0\n");
        const GraphDataset out = load_targets_csv(tmp.path("t.csv"), ds);
        REQUIRE(out.size() == 2);
        CHECK(out.entries[0].label == 1);
        CHECK(out.entries[1].label == 0);
        CHECK(out.labeled());
    }

    SUBCASE("extra column and reordered header are fine") {
        write_text(tmp.path("t.csv"), "weight,target,id\n9,1,0\n8,0,1\n");
        const GraphDataset out = load_targets_csv(tmp.path("t.csv"), ds);
        CHECK(out.entries[0].label == 1);
    }

    SUBCASE("row for unknown graph") {
        write_text(tmp.path("t.csv"), "id,target\n0,1\n1,0\n7,1\n");
        CHECK_THROWS_WITH_AS(load_targets_csv(tmp.path("t.csv"), ds),
                             doctest::Contains("\"7\""), DataError);
    }

    SUBCASE("missing row for a loaded graph") {
        write_text(tmp.path("t.csv"), "id,target\n0,1\n");
        CHECK_THROWS_WITH_AS(load_targets_csv(tmp.path("t.csv"), ds),
                             doctest::Contains("\"1\""), DataError);
    }

    SUBCASE("non-binary target") {
        write_text(tmp.path("t.csv"), "id,target\n0,2\n1,0\n");
        CHECK_THROWS_WITH_AS(load_targets_csv(tmp.path("t.csv"), ds),
                             doctest::Contains("non-binary"), DataError);
    }
}

TEST_CASE("degree vector") {
    CHECK(degree_vector(testutil::path3()) == std::vector<int>{1, 2, 1});
    CHECK(degree_vector(Graph::singleton()) == std::vector<int>{0});
    CHECK(degree_vector(testutil::star4()) == std::vector<int>{3, 1, 1, 1});
}

TEST_CASE("degree sum equals twice the edge count on random graphs") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(30));
        std::vector<std::pair<int, int>> edges;
        for (int j = 1; j < n; ++j)
            for (int i = 0; i < j; ++i)
                if (rng.below(3) == 0) edges.push_back({i, j});
        const Graph g(n, std::move(edges));
        const std::vector<int> deg = degree_vector(g);
        CHECK(std::accumulate(deg.begin(), deg.end(), 0) ==
              2 * static_cast<int>(g.edge_count()));
    }
}

TEST_CASE("save/load round trip is identity") {
    testutil::TempDir tmp("graph_roundtrip");
    write_text(tmp.path("g.json"),
               R"({"10": [[0,1],[2,1]], "2": [[0,1]], "g-x": [[0,1],[0,2],[1,2]]})");
    const GraphDataset ds = load_edge_list_json(tmp.path("g.json"));
    save_edge_list_json(ds, tmp.path("h.json"));
    const GraphDataset ds2 = load_edge_list_json(tmp.path("h.json"));
    REQUIRE(ds.size() == ds2.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(ds.entries[i].id == ds2.entries[i].id);
        CHECK(ds.entries[i].graph.node_count() == ds2.entries[i].graph.node_count());
        CHECK(ds.entries[i].graph.edges() == ds2.entries[i].graph.edges());
    }
    // and re-saving yields identical bytes
    save_edge_list_json(ds2, tmp.path("i.json"));
    CHECK(read_file_bytes(tmp.path("h.json")) == read_file_bytes(tmp.path("i.json")));
}

TEST_CASE("graph construction invariants") {
    CHECK_THROWS_AS(Graph(2, {{0, 0}}), DataError);
    CHECK_THROWS_AS(Graph(2, {{0, 2}}), DataError);
    CHECK_THROWS_AS(Graph(2, {{0, 1}, {1, 0}}), DataError); // duplicate after normalization
    CHECK_THROWS_AS(Graph(0, {}), DataError);

    const Graph g = testutil::k3();
    const Matrix a = g.dense_adjacency();
    CHECK(max_asymmetry(a) == 0.0);
    for (int i = 0; i < 3; ++i) CHECK(a(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) == 0.0);
}
