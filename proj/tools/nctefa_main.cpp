#include <cstdio>
#include <exception>

#include <CLI11.hpp>

#include "nctefa/commands.hpp"
#include "nctefa/errors.hpp"
#include "nctefa/manifest.hpp"

int main(int argc, char** argv) {
    CLI::App app{"NCT-EFA: control-theoretic and centrality node-feature augmentation "
                 "with a reference message-passing classifier"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(nctefa::kToolVersion));

    nctefa::FeaturizeOptions fopt;
    CLI::App* feat = app.add_subcommand("featurize", "compute node features for a graph file");
    feat->add_option("--graphs", fopt.graphs_path, "edge-list JSON input")->required();
    feat->add_option("--out", fopt.out_path, "feature file to write")->required();
    feat->add_option("--encoding", fopt.encoding,
                     "nct-efa-raw | avgctrl-hist-onehot | degree-onehot");
    feat->add_option("--bins", fopt.bins, "histogram bins (avgctrl-hist-onehot)");
    feat->add_option("--degree-cap", fopt.degree_cap,
                     "degree-onehot cap (-1 = dataset max degree)");
    feat->add_flag("--clamp", fopt.clamp_degrees, "clamp degrees above the cap");
    feat->add_flag("--standardize,!--no-standardize", fopt.standardize,
                   "z-score raw columns against dataset moments (default on)");
    feat->add_option("--hist-scope", fopt.hist_scope, "graph | dataset");
    feat->add_option("--threads", fopt.threads, "worker count (0 = runtime default)");

    nctefa::TrainOptions topt;
    CLI::App* train = app.add_subcommand("train", "cross-validated training and evaluation");
    train->add_option("--graphs", topt.graphs_path, "edge-list JSON input")->required();
    train->add_option("--targets", topt.targets_path, "id,target CSV")->required();
    train->add_option("--features", topt.features_path, "feature file from featurize")->required();
    train->add_option("--out", topt.out_path, "report JSON to write")->required();
    train->add_option("--model", topt.model, "gcn | sage");
    train->add_option("--folds", topt.folds, "cross-validation folds");
    train->add_option("--epochs", topt.epochs, "training epochs per fold");
    train->add_option("--lr", topt.learning_rate, "learning rate");
    train->add_option("--weight-decay", topt.weight_decay, "decoupled weight decay");
    train->add_option("--batch-size", topt.batch_size, "graphs per optimizer step");
    train->add_option("--seed", topt.seed, "64-bit seed");
    train->add_option("--k-sort", topt.k_sort, "rows kept by sort pooling");
    train->add_option("--threads", topt.threads, "fold-level workers (0 = runtime default)");
    train->add_flag("--emit-timing", topt.emit_timing,
                    "include wall clock in the report (breaks byte-identical reruns)");

    nctefa::SynthOptions sopt;
    CLI::App* synth = app.add_subcommand("synth", "generate the regular-pair benchmark task");
    synth->add_option("--graphs", sopt.graphs_path, "edge-list JSON to write")->required();
    synth->add_option("--targets", sopt.targets_path, "id,target CSV to write")->required();
    synth->add_option("--count", sopt.count, "number of graphs");
    synth->add_option("--seed", sopt.seed, "64-bit seed");

    nctefa::OracleOptions oopt;
    CLI::App* orc = app.add_subcommand("oracle", "run brute-force self-checks");
    orc->add_option("--lyapunov-max-n", oopt.lyapunov_max_n, "Kronecker check up to this n");
    orc->add_option("--centrality-max-n", oopt.centrality_max_n,
                    "exhaustive centrality check up to this n (<= 7)");
    orc->add_option("--n8-samples", oopt.n8_samples, "random connected graphs at n = 8");
    orc->add_option("--auc-cases", oopt.auc_cases, "random AUC vectors");
    orc->add_option("--gradient-cases", oopt.gradient_cases, "gradient-check instances per model");
    orc->add_option("--seed", oopt.seed, "64-bit seed");

    try {
        app.parse(argc, argv);
        if (*feat) nctefa::cmd_featurize(fopt);
        if (*train) nctefa::cmd_train(topt);
        if (*synth) nctefa::cmd_synth(sopt);
        if (*orc) {
            const auto results = nctefa::cmd_oracle(oopt);
            for (const auto& r : results)
                if (!r.pass) return 3;
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const nctefa::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const nctefa::NumericError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
