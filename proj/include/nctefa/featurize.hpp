#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nctefa/encode.hpp"
#include "nctefa/graph.hpp"

namespace nctefa {

struct GraphFeatureRecord {
    FeatureMatrix features; // carries graph_id
    int n = 0;
    std::optional<double> lambda_max;        // present when the Gramian was computed
    std::optional<double> lyapunov_residual;
};

struct FeatureSet {
    EncodingSpec spec;
    int resolved_degree_cap = -1; // degree mode only
    std::vector<GraphFeatureRecord> records; // dataset (id) order

    std::vector<FeatureMatrix> matrices() const;
};

/// Batched featurization, fanned out over graphs with OpenMP. Results are
/// gathered by dataset index, so output is identical for any worker count.
/// threads == 0 uses the runtime default.
FeatureSet featurize_dataset(const GraphDataset& ds, const EncodingSpec& spec, int threads = 0);

/// Plain single-loop reference implementation; kept for testing and as the
/// baseline of the featurization benchmark.
FeatureSet featurize_dataset_serial(const GraphDataset& ds, const EncodingSpec& spec);

nlohmann::json feature_set_to_json(const FeatureSet& fs, const nlohmann::json& manifest);
void write_feature_file(const FeatureSet& fs, const std::string& path,
                        const nlohmann::json& manifest);
FeatureSet read_feature_file(const std::string& path);

} // namespace nctefa
