#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nctefa/graph.hpp"

namespace nctefa {

enum class EncodingMode { NctEfaRaw, AvgCtrlHistOneHot, DegreeOneHot };

std::string encoding_mode_name(EncodingMode m);
EncodingMode encoding_mode_from_name(const std::string& name);

/// Histogram scope for the one-hot rank encoding: per-graph by default, with
/// an opt-in dataset-wide variant for comparability experiments.
enum class HistScope { PerGraph, Dataset };

struct EncodingSpec {
    EncodingMode mode = EncodingMode::NctEfaRaw;
    int bins = 32;            // hist mode
    int degree_cap = -1;      // degree mode; -1 = dataset-wide max degree
    bool clamp_degrees = false;
    bool standardize = true;  // raw mode
    HistScope hist_scope = HistScope::PerGraph;
};

/// k uniform-width bins spanning [min, max]; the rightmost edge is inclusive.
/// If max == min (up to a 1e-12 relative span) the histogram degenerates to a
/// single bin.
struct Histogram {
    std::vector<double> edges;        // ascending; degenerate case: {min, max}
    std::vector<long long> counts;

    bool degenerate() const { return counts.size() == 1 && edges.size() == 2; }
    int bin_count() const { return static_cast<int>(counts.size()); }
    /// Index of the bin containing x: floor(k*(x-min)/(max-min)) clamped to k-1.
    int bin_index(double x) const;
};

Histogram build_histogram(std::span<const double> values, int k);

/// Dataset-wide per-column moments used to z-score raw feature matrices.
struct DatasetMoments {
    std::array<double, 4> mean{};
    std::array<double, 4> stddev{}; // population std
    long long node_count = 0;
};

/// The four raw per-node metrics in column order
/// [average_controllability, closeness, betweenness, eigenvector], plus the
/// spectral/solve metadata recorded alongside feature files.
struct NodeMetrics {
    Matrix values; // n x 4
    double lambda_max = 0.0;
    double lyapunov_residual = 0.0;
};

inline const std::vector<std::string> kNctEfaFeatureNames = {
    "average_controllability", "closeness", "betweenness", "eigenvector"};

NodeMetrics compute_node_metrics(const Graph& g);

/// Histogram over this graph's average-controllability vector; row v is
/// one-hot at v's bin index. The matrix is always n x k even when the
/// histogram degenerates (hot index 0).
FeatureMatrix encode_avgctrl_hist_onehot(const Graph& g, int k);

/// One-hot against a caller-supplied histogram (dataset-wide scope).
FeatureMatrix encode_values_hist_onehot(std::span<const double> values, const Histogram& hist,
                                        int k);

/// Row v one-hot at min(degree(v), cap) when clamping, else degree(v) with an
/// error if it exceeds cap. Dimension cap+1 is a dataset-wide constant.
FeatureMatrix encode_degree_onehot(const Graph& g, int cap, bool clamp = false);

/// Raw 4-column matrix, optionally z-scored against dataset moments
/// (std floor 1e-12: floored columns are emitted as exact zeros).
FeatureMatrix assemble_nct_efa(const Graph& g, bool standardize,
                               const DatasetMoments* stats = nullptr);

/// Applies z-scoring in place to an n x 4 raw matrix.
void standardize_columns(Matrix& values, const DatasetMoments& stats);

/// Two-pass reduce over all nodes of all graphs, accumulated in entry (id)
/// order so the result is independent of any parallel schedule upstream.
DatasetMoments moments_from_matrices(const std::vector<Matrix>& raw);

/// Convenience form per the module contract; computes metrics internally.
DatasetMoments compute_dataset_moments(const GraphDataset& ds);

} // namespace nctefa
