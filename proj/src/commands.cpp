#include "nctefa/commands.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "nctefa/errors.hpp"
#include "nctefa/featurize.hpp"
#include "nctefa/gnn.hpp"
#include "nctefa/json_io.hpp"
#include "nctefa/manifest.hpp"
#include "nctefa/synth.hpp"

namespace nctefa {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("NCTEFA_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;
}

void cmd_featurize(const FeaturizeOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    EncodingSpec spec;
    spec.mode = encoding_mode_from_name(opt.encoding);
    spec.bins = opt.bins;
    spec.degree_cap = opt.degree_cap;
    spec.clamp_degrees = opt.clamp_degrees;
    spec.standardize = opt.standardize;
    if (opt.hist_scope == "dataset")
        spec.hist_scope = HistScope::Dataset;
    else if (opt.hist_scope == "graph")
        spec.hist_scope = HistScope::PerGraph;
    else
        throw DataError("unknown --hist-scope \"" + opt.hist_scope +
                        "\" (expected graph or dataset)");
    if (spec.bins < 1) throw DataError("--bins must be >= 1");

    const GraphDataset ds = load_edge_list_json(opt.graphs_path);
    std::fprintf(stderr, "[featurize] %zu graphs loaded from %s\n", ds.size(),
                 opt.graphs_path.c_str());

    const int threads = resolve_threads(opt.threads);
    const FeatureSet fs = featurize_dataset(ds, spec, threads);

    RunManifest manifest;
    manifest.command = "featurize";
    manifest.config = nlohmann::json{{"encoding", opt.encoding},
                                     {"bins", opt.bins},
                                     {"degree_cap", opt.degree_cap},
                                     {"clamp_degrees", opt.clamp_degrees},
                                     {"standardize", opt.standardize},
                                     {"hist_scope", opt.hist_scope}};
    manifest.add_input("graphs", opt.graphs_path);
    write_feature_file(fs, opt.out_path, manifest.to_json());
    std::fprintf(stderr, "[featurize] wrote %s (%zu graphs, d=%zu) in %.2fs\n",
                 opt.out_path.c_str(), fs.records.size(),
                 fs.records.empty() ? 0 : fs.records.front().features.values.cols,
                 seconds_since(t0));
}

void cmd_train(const TrainOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    GraphDataset ds = load_edge_list_json(opt.graphs_path);
    ds = load_targets_csv(opt.targets_path, ds);
    const FeatureSet fs = read_feature_file(opt.features_path);

    TrainConfig cfg;
    cfg.epochs = opt.epochs;
    cfg.learning_rate = opt.learning_rate;
    cfg.weight_decay = opt.weight_decay;
    cfg.folds = opt.folds;
    cfg.batch_size = opt.batch_size;
    cfg.seed = opt.seed;
    cfg.model = model_kind_from_name(opt.model);
    cfg.k_sort = opt.k_sort;
    cfg.threads = resolve_threads(opt.threads);

    const TrainReport report = train_and_evaluate(ds, fs.matrices(), cfg);

    nlohmann::json folds = nlohmann::json::array();
    for (const FoldOutcome& f : report.folds)
        folds.push_back(nlohmann::json{{"fold", f.fold},
                                       {"auc", f.auc},
                                       {"single_class", f.single_class},
                                       {"eval_count", f.eval_count},
                                       {"final_train_loss", f.final_train_loss}});

    RunManifest manifest;
    manifest.command = "train";
    manifest.config = nlohmann::json{{"model", opt.model},
                                     {"folds", opt.folds},
                                     {"epochs", opt.epochs},
                                     {"learning_rate", opt.learning_rate},
                                     {"weight_decay", opt.weight_decay},
                                     {"batch_size", opt.batch_size},
                                     {"seed", opt.seed},
                                     {"k_sort", opt.k_sort},
                                     {"hidden", cfg.hidden},
                                     {"head_hidden", cfg.head_hidden}};
    manifest.add_input("graphs", opt.graphs_path);
    manifest.add_input("targets", opt.targets_path);
    manifest.add_input("features", opt.features_path);

    nlohmann::json out{
        {"config", manifest.config},
        {"d_in", report.d_in},
        {"folds", folds},
        {"mean_auc", report.mean_auc},
        {"std_auc", report.std_auc},
        {"excluded_folds", report.excluded_folds},
        {"conventions", conventions_json()},
        {"notes",
         {"readout flattens the top-k sort-pooled node states into a two-layer MLP; no "
          "convolutional readout stack",
          "held-out fold scored directly; no inner validation split"}},
        {"manifest", manifest.to_json()},
    };
    if (opt.emit_timing) out["wall_clock_seconds"] = seconds_since(t0);
    write_json_file(out, opt.out_path);
    std::fprintf(stderr, "[train] %s: mean AUC %.4f +- %.4f over %d folds (%.1fs)\n",
                 opt.model.c_str(), report.mean_auc, report.std_auc, opt.folds,
                 seconds_since(t0));
}

void cmd_synth(const SynthOptions& opt) {
    const GraphDataset ds = synth_regular_pair(opt.count, opt.seed);
    save_edge_list_json(ds, opt.graphs_path);
    save_targets_csv(ds, opt.targets_path);
    std::fprintf(stderr, "[synth] wrote %d regular-pair graphs to %s / %s\n", opt.count,
                 opt.graphs_path.c_str(), opt.targets_path.c_str());
}

std::vector<oracle::CheckResult> cmd_oracle(const OracleOptions& opt) {
    std::vector<oracle::CheckResult> results;
    results.push_back(oracle::check_lyapunov_kronecker(opt.lyapunov_max_n));
    results.push_back(oracle::check_closeness(opt.centrality_max_n, opt.n8_samples));
    results.push_back(oracle::check_betweenness(opt.centrality_max_n, opt.n8_samples));
    results.push_back(oracle::check_eigenvector_residual(opt.centrality_max_n, opt.n8_samples));
    results.push_back(oracle::check_auc_paircount(opt.auc_cases, opt.seed));
    results.push_back(oracle::check_gradients(ModelKind::Gcn, opt.gradient_cases, opt.seed));
    results.push_back(oracle::check_gradients(ModelKind::Sage, opt.gradient_cases, opt.seed));
    for (const auto& r : results)
        std::printf("[%s] %-24s max_dev=%.3e (%s)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.max_dev, r.detail.c_str());
    return results;
}

} // namespace nctefa
