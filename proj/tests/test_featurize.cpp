#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nctefa/errors.hpp"
#include "nctefa/featurize.hpp"
#include "nctefa/json_io.hpp"
#include "nctefa/manifest.hpp"
#include "nctefa/oracle.hpp"
#include "nctefa/rng.hpp"
#include "nctefa/synth.hpp"
#include "test_util.hpp"

using namespace nctefa;

namespace {

GraphDataset mixed_dataset(int count, std::uint64_t seed) {
    Rng rng(seed);
    GraphDataset ds;
    for (int i = 0; i < count; ++i) {
        const int n = 2 + static_cast<int>(rng.below(12));
        ds.entries.push_back(
            {std::to_string(i),
             oracle::random_connected_graph(n, static_cast<int>(rng.below(8)), rng), i % 2});
    }
    std::sort(ds.entries.begin(), ds.entries.end(),
              [](const DatasetEntry& a, const DatasetEntry& b) { return a.id < b.id; });
    return ds;
}

} // namespace

TEST_CASE("parallel featurization matches the serial reference bit for bit") {
    const GraphDataset ds = mixed_dataset(24, 5);
    for (EncodingMode mode : {EncodingMode::NctEfaRaw, EncodingMode::AvgCtrlHistOneHot,
                              EncodingMode::DegreeOneHot}) {
        EncodingSpec spec;
        spec.mode = mode;
        spec.bins = 6;
        const FeatureSet serial = featurize_dataset_serial(ds, spec);
        for (int threads : {1, 2, 4}) {
            const FeatureSet par = featurize_dataset(ds, spec, threads);
            REQUIRE(par.records.size() == serial.records.size());
            for (std::size_t i = 0; i < par.records.size(); ++i) {
                CHECK(par.records[i].features.graph_id == serial.records[i].features.graph_id);
                CHECK(par.records[i].features.values == serial.records[i].features.values);
            }
        }
    }
}

TEST_CASE("standardized raw mode is deterministic and schedule independent") {
    const GraphDataset ds = mixed_dataset(16, 9);
    EncodingSpec spec; // nct-efa-raw, standardize on
    const FeatureSet a = featurize_dataset(ds, spec, 2);
    const FeatureSet b = featurize_dataset_serial(ds, spec);
    for (std::size_t i = 0; i < a.records.size(); ++i)
        CHECK(a.records[i].features.values == b.records[i].features.values);
}

TEST_CASE("feature file round trip and byte determinism") {
    testutil::TempDir tmp("featfile");
    const GraphDataset ds = mixed_dataset(8, 13);
    EncodingSpec spec;
    spec.mode = EncodingMode::AvgCtrlHistOneHot;
    spec.bins = 5;
    const FeatureSet fs = featurize_dataset(ds, spec, 0);

    RunManifest man;
    man.command = "featurize";
    write_feature_file(fs, tmp.path("f1.json"), man.to_json());
    write_feature_file(fs, tmp.path("f2.json"), man.to_json());
    CHECK(read_file_bytes(tmp.path("f1.json")) == read_file_bytes(tmp.path("f2.json")));

    const FeatureSet back = read_feature_file(tmp.path("f1.json"));
    REQUIRE(back.records.size() == fs.records.size());
    CHECK(back.spec.mode == EncodingMode::AvgCtrlHistOneHot);
    CHECK(back.spec.bins == 5);
    for (std::size_t i = 0; i < fs.records.size(); ++i) {
        CHECK(back.records[i].features.graph_id == fs.records[i].features.graph_id);
        CHECK(back.records[i].features.values == fs.records[i].features.values);
        CHECK(back.records[i].n == fs.records[i].n);
        REQUIRE(back.records[i].lambda_max.has_value());
        CHECK(*back.records[i].lambda_max == *fs.records[i].lambda_max);
        CHECK(*back.records[i].lyapunov_residual == *fs.records[i].lyapunov_residual);
    }
}

TEST_CASE("metadata and residuals ride along with NCT encodings") {
    const GraphDataset ds = mixed_dataset(6, 21);
    EncodingSpec raw;
    const FeatureSet fs = featurize_dataset(ds, raw, 0);
    for (const auto& r : fs.records) {
        REQUIRE(r.lambda_max.has_value());
        REQUIRE(r.lyapunov_residual.has_value());
        CHECK(*r.lyapunov_residual <= 1e-8);
        CHECK(*r.lambda_max > 0.0);
    }
    EncodingSpec deg;
    deg.mode = EncodingMode::DegreeOneHot;
    const FeatureSet fd = featurize_dataset(ds, deg, 0);
    for (const auto& r : fd.records) CHECK_FALSE(r.lambda_max.has_value());
}

TEST_CASE("degree cap resolves to the dataset maximum") {
    GraphDataset ds;
    ds.entries.push_back({"a", testutil::star4(), 0}); // max degree 3
    ds.entries.push_back({"b", testutil::k2(), 1});
    EncodingSpec spec;
    spec.mode = EncodingMode::DegreeOneHot;
    const FeatureSet fs = featurize_dataset(ds, spec, 0);
    CHECK(fs.resolved_degree_cap == 3);
    CHECK(fs.records[0].features.values.cols == 4);
    CHECK(fs.records[1].features.values.cols == 4);
}

TEST_CASE("dataset-scope histogram uses one bin range for every graph") {
    const GraphDataset ds = mixed_dataset(10, 33);
    EncodingSpec spec;
    spec.mode = EncodingMode::AvgCtrlHistOneHot;
    spec.bins = 4;
    spec.hist_scope = HistScope::Dataset;
    const FeatureSet fs = featurize_dataset(ds, spec, 2);
    CHECK(fs.records.size() == 10);
    // per-graph mode differs from dataset mode on heterogeneous data
    spec.hist_scope = HistScope::PerGraph;
    const FeatureSet per = featurize_dataset(ds, spec, 2);
    bool any_diff = false;
    for (std::size_t i = 0; i < fs.records.size(); ++i)
        if (!(fs.records[i].features.values == per.records[i].features.values)) any_diff = true;
    CHECK(any_diff);
    // serial/parallel agreement holds for the dataset scope too
    spec.hist_scope = HistScope::Dataset;
    const FeatureSet serial = featurize_dataset_serial(ds, spec);
    for (std::size_t i = 0; i < fs.records.size(); ++i)
        CHECK(fs.records[i].features.values == serial.records[i].features.values);
}

TEST_CASE("featurization errors carry the offending graph id") {
    GraphDataset ds;
    ds.entries.push_back({"bad-graph", testutil::star4(), 0});
    EncodingSpec spec;
    spec.mode = EncodingMode::DegreeOneHot;
    spec.degree_cap = 1; // center exceeds the cap, clamping off
    CHECK_THROWS_WITH_AS(featurize_dataset(ds, spec, 2), doctest::Contains("bad-graph"),
                         DataError);
    CHECK_THROWS_WITH_AS(featurize_dataset_serial(ds, spec), doctest::Contains("bad-graph"),
                         DataError);
}
