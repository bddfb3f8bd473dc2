#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nctefa/oracle.hpp"

namespace nctefa {

/// Worker count resolution: explicit flag wins, then the NCTEFA_THREADS
/// environment variable, then the OpenMP runtime default.
int resolve_threads(int flag_value);

struct FeaturizeOptions {
    std::string graphs_path;
    std::string out_path;
    std::string encoding = "nct-efa-raw";
    int bins = 32;
    int degree_cap = -1;
    bool clamp_degrees = false;
    bool standardize = true;
    std::string hist_scope = "graph";
    int threads = 0;
};

struct TrainOptions {
    std::string graphs_path;
    std::string targets_path;
    std::string features_path;
    std::string out_path;
    std::string model = "gcn";
    int folds = 10;
    int epochs = 100;
    double learning_rate = 1e-4;
    double weight_decay = 5e-2;
    int batch_size = 32;
    std::uint64_t seed = 0;
    int k_sort = 30;
    int threads = 0;
    bool emit_timing = false; // timing in the report breaks byte-determinism; opt-in
};

struct SynthOptions {
    std::string graphs_path;
    std::string targets_path;
    int count = 200;
    std::uint64_t seed = 0;
};

struct OracleOptions {
    int lyapunov_max_n = 6;
    int centrality_max_n = 7;
    int n8_samples = 200;
    int auc_cases = 1000;
    int gradient_cases = 10;
    std::uint64_t seed = 1;
};

void cmd_featurize(const FeaturizeOptions& opt);
void cmd_train(const TrainOptions& opt);
void cmd_synth(const SynthOptions& opt);

/// Runs every self-check, printing one pass/fail line each; returns them for
/// the caller to turn into an exit code.
std::vector<oracle::CheckResult> cmd_oracle(const OracleOptions& opt);

} // namespace nctefa
