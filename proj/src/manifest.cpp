#include "nctefa/manifest.hpp"

#include "nctefa/json_io.hpp"
#include "nctefa/nct.hpp"

namespace nctefa {

nlohmann::json conventions_json() {
    return nlohmann::json{
        {"stabilization", kStabilizationConvention},
        {"gramian", "closed-form-symmetric-eigendecomposition"},
        {"control_set", "identity"},
        {"closeness", "wasserman-faust-reachable-scaled"},
        {"betweenness", "brandes-endpoints-excluded-norm-(n-1)(n-2)/2"},
        {"eigenvector_centrality", "shifted-power-iteration-unit-l2"},
        {"histogram", "uniform-bins-right-edge-inclusive"},
        {"readout", "sort-pool-topk-flatten-mlp"},
        {"optimizer", "adam-decoupled-weight-decay"},
        {"floats", "17-significant-digits"},
    };
}

void RunManifest::add_input(const std::string& role, const std::string& path) {
    inputs[role] = nlohmann::json{{"path", path}, {"fnv1a64", fnv1a64_hex(read_file_bytes(path))}};
}

nlohmann::json RunManifest::to_json() const {
    return nlohmann::json{{"tool", kToolName},
                          {"version", kToolVersion},
                          {"command", command},
                          {"config", config},
                          {"inputs", inputs}};
}

} // namespace nctefa
