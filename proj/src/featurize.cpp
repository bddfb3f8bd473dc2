#include "nctefa/featurize.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nctefa/errors.hpp"
#include "nctefa/json_io.hpp"
#include "nctefa/manifest.hpp"
#include "nctefa/nct.hpp"

namespace nctefa {

namespace {

int resolve_degree_cap(const GraphDataset& ds, const EncodingSpec& spec) {
    if (spec.degree_cap >= 0) return spec.degree_cap;
    int cap = 0;
    for (const auto& e : ds.entries)
        for (int v = 0; v < e.graph.node_count(); ++v) cap = std::max(cap, e.graph.degree(v));
    return cap;
}

GraphFeatureRecord record_from_metrics(const DatasetEntry& e, NodeMetrics&& m) {
    GraphFeatureRecord r;
    r.n = e.graph.node_count();
    r.lambda_max = m.lambda_max;
    r.lyapunov_residual = m.lyapunov_residual;
    r.features.graph_id = e.id;
    r.features.feature_names = kNctEfaFeatureNames;
    r.features.values = std::move(m.values);
    return r;
}

/// Per-graph work shared by the serial and parallel drivers. For the raw mode
/// this produces unstandardized values; the driver applies moments afterwards.
GraphFeatureRecord featurize_one(const DatasetEntry& e, const EncodingSpec& spec, int degree_cap) {
    switch (spec.mode) {
        case EncodingMode::NctEfaRaw:
            return record_from_metrics(e, compute_node_metrics(e.graph));
        case EncodingMode::AvgCtrlHistOneHot: {
            NodeMetrics m = compute_node_metrics(e.graph);
            GraphFeatureRecord r;
            r.n = e.graph.node_count();
            r.lambda_max = m.lambda_max;
            r.lyapunov_residual = m.lyapunov_residual;
            if (spec.hist_scope == HistScope::PerGraph) {
                std::vector<double> ac(m.values.rows);
                for (std::size_t v = 0; v < m.values.rows; ++v) ac[v] = m.values(v, 0);
                const Histogram h = build_histogram(ac, spec.bins);
                r.features = encode_values_hist_onehot(ac, h, spec.bins);
            } else {
                // dataset scope: driver fills features in a second pass
                r.features.values = std::move(m.values);
            }
            r.features.graph_id = e.id;
            return r;
        }
        case EncodingMode::DegreeOneHot: {
            GraphFeatureRecord r;
            r.n = e.graph.node_count();
            r.features = encode_degree_onehot(e.graph, degree_cap, spec.clamp_degrees);
            r.features.graph_id = e.id;
            return r;
        }
    }
    throw DataError("unknown encoding mode");
}

/// Post-processing passes that need the whole dataset: z-scoring for the raw
/// mode and the opt-in dataset-scope histogram. Accumulation runs in dataset
/// order, so the result is schedule independent.
void finish_dataset_passes(FeatureSet& fs) {
    if (fs.spec.mode == EncodingMode::NctEfaRaw && fs.spec.standardize) {
        std::vector<Matrix> raw;
        raw.reserve(fs.records.size());
        for (const auto& r : fs.records) raw.push_back(r.features.values);
        const DatasetMoments moments = moments_from_matrices(raw);
        for (auto& r : fs.records) standardize_columns(r.features.values, moments);
    }
    if (fs.spec.mode == EncodingMode::AvgCtrlHistOneHot &&
        fs.spec.hist_scope == HistScope::Dataset) {
        std::vector<double> all;
        for (const auto& r : fs.records)
            for (std::size_t v = 0; v < r.features.values.rows; ++v)
                all.push_back(r.features.values(v, 0));
        const Histogram h = build_histogram(all, fs.spec.bins);
        for (auto& r : fs.records) {
            std::vector<double> ac(r.features.values.rows);
            for (std::size_t v = 0; v < ac.size(); ++v) ac[v] = r.features.values(v, 0);
            const std::string id = r.features.graph_id;
            r.features = encode_values_hist_onehot(ac, h, fs.spec.bins);
            r.features.graph_id = id;
        }
    }
}

} // namespace

std::vector<FeatureMatrix> FeatureSet::matrices() const {
    std::vector<FeatureMatrix> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.features);
    return out;
}

FeatureSet featurize_dataset_serial(const GraphDataset& ds, const EncodingSpec& spec) {
    if (ds.entries.empty()) throw DataError("empty dataset");
    FeatureSet fs;
    fs.spec = spec;
    fs.resolved_degree_cap = resolve_degree_cap(ds, spec);
    fs.records.reserve(ds.size());
    for (const auto& e : ds.entries) {
        try {
            fs.records.push_back(featurize_one(e, spec, fs.resolved_degree_cap));
        } catch (const std::exception& err) {
            throw DataError("graph \"" + e.id + "\": " + err.what());
        }
    }
    finish_dataset_passes(fs);
    return fs;
}

FeatureSet featurize_dataset(const GraphDataset& ds, const EncodingSpec& spec, int threads) {
    if (ds.entries.empty()) throw DataError("empty dataset");
    FeatureSet fs;
    fs.spec = spec;
    fs.resolved_degree_cap = resolve_degree_cap(ds, spec);
    fs.records.resize(ds.size());

    const auto count = static_cast<long long>(ds.size());
    std::vector<std::string> errors(ds.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) \
    num_threads(threads > 0 ? threads : omp_get_max_threads())
#endif
    for (long long i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            fs.records[idx] = featurize_one(ds.entries[idx], spec, fs.resolved_degree_cap);
        } catch (const std::exception& err) {
            errors[idx] = err.what();
        }
    }
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty())
            throw DataError("graph \"" + ds.entries[i].id + "\": " + errors[i]);

    finish_dataset_passes(fs);
    return fs;
}

nlohmann::json feature_set_to_json(const FeatureSet& fs, const nlohmann::json& manifest) {
    nlohmann::json enc{
        {"mode", encoding_mode_name(fs.spec.mode)},
        {"feature_names", fs.records.empty() ? std::vector<std::string>{}
                                             : fs.records.front().features.feature_names},
    };
    if (fs.spec.mode == EncodingMode::AvgCtrlHistOneHot) {
        enc["bins"] = fs.spec.bins;
        enc["hist_scope"] = fs.spec.hist_scope == HistScope::Dataset ? "dataset" : "graph";
    }
    if (fs.spec.mode == EncodingMode::DegreeOneHot) {
        enc["degree_cap"] = fs.resolved_degree_cap;
        enc["clamp_degrees"] = fs.spec.clamp_degrees;
    }
    if (fs.spec.mode == EncodingMode::NctEfaRaw) enc["standardize"] = fs.spec.standardize;

    nlohmann::json graphs = nlohmann::json::object();
    for (const auto& r : fs.records) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < r.features.values.rows; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t j = 0; j < r.features.values.cols; ++j)
                row.push_back(r.features.values(i, j));
            rows.push_back(std::move(row));
        }
        nlohmann::json rec{{"n", r.n}, {"features", std::move(rows)}};
        if (r.lambda_max) rec["lambda_max"] = *r.lambda_max;
        if (r.lyapunov_residual) rec["lyapunov_residual"] = *r.lyapunov_residual;
        graphs[r.features.graph_id] = std::move(rec);
    }

    return nlohmann::json{{"encoding", std::move(enc)},
                          {"conventions", conventions_json()},
                          {"manifest", manifest},
                          {"graphs", std::move(graphs)}};
}

void write_feature_file(const FeatureSet& fs, const std::string& path,
                        const nlohmann::json& manifest) {
    write_json_file(feature_set_to_json(fs, manifest), path);
}

FeatureSet read_feature_file(const std::string& path) {
    const nlohmann::json doc = read_json_file(path);
    if (!doc.contains("encoding") || !doc.contains("graphs"))
        throw DataError(path + ": not a feature file (missing encoding/graphs)");

    FeatureSet fs;
    const auto& enc = doc.at("encoding");
    fs.spec.mode = encoding_mode_from_name(enc.at("mode").get<std::string>());
    if (enc.contains("bins")) fs.spec.bins = enc.at("bins").get<int>();
    if (enc.contains("hist_scope"))
        fs.spec.hist_scope = enc.at("hist_scope").get<std::string>() == "dataset"
                                 ? HistScope::Dataset
                                 : HistScope::PerGraph;
    if (enc.contains("degree_cap")) {
        fs.spec.degree_cap = enc.at("degree_cap").get<int>();
        fs.resolved_degree_cap = fs.spec.degree_cap;
    }
    if (enc.contains("clamp_degrees")) fs.spec.clamp_degrees = enc.at("clamp_degrees").get<bool>();
    if (enc.contains("standardize")) fs.spec.standardize = enc.at("standardize").get<bool>();
    std::vector<std::string> names;
    if (enc.contains("feature_names")) names = enc.at("feature_names").get<std::vector<std::string>>();

    for (auto it = doc.at("graphs").begin(); it != doc.at("graphs").end(); ++it) {
        GraphFeatureRecord r;
        r.features.graph_id = it.key();
        r.features.feature_names = names;
        const auto& rec = it.value();
        r.n = rec.at("n").get<int>();
        if (rec.contains("lambda_max")) r.lambda_max = rec.at("lambda_max").get<double>();
        if (rec.contains("lyapunov_residual"))
            r.lyapunov_residual = rec.at("lyapunov_residual").get<double>();
        const auto& rows = rec.at("features");
        if (!rows.is_array() || rows.empty())
            throw DataError(path + ": graph \"" + it.key() + "\" has no feature rows");
        const std::size_t n = rows.size();
        const std::size_t d = rows.front().size();
        r.features.values = Matrix(n, d);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != d) throw DataError(path + ": ragged feature rows");
            for (std::size_t j = 0; j < d; ++j)
                r.features.values(i, j) = rows[i][j].get<double>();
        }
        fs.records.push_back(std::move(r));
    }
    return fs;
}

} // namespace nctefa
