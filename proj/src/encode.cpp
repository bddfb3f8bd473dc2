#include "nctefa/encode.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nctefa/centrality.hpp"
#include "nctefa/errors.hpp"
#include "nctefa/nct.hpp"

namespace nctefa {

std::string encoding_mode_name(EncodingMode m) {
    switch (m) {
        case EncodingMode::NctEfaRaw: return "nct-efa-raw";
        case EncodingMode::AvgCtrlHistOneHot: return "avgctrl-hist-onehot";
        case EncodingMode::DegreeOneHot: return "degree-onehot";
    }
    throw DataError("unknown encoding mode");
}

EncodingMode encoding_mode_from_name(const std::string& name) {
    if (name == "nct-efa-raw") return EncodingMode::NctEfaRaw;
    if (name == "avgctrl-hist-onehot") return EncodingMode::AvgCtrlHistOneHot;
    if (name == "degree-onehot") return EncodingMode::DegreeOneHot;
    throw DataError("unknown encoding \"" + name +
                    "\" (expected nct-efa-raw, avgctrl-hist-onehot or degree-onehot)");
}

int Histogram::bin_index(double x) const {
    if (counts.size() == 1) return 0;
    const double lo = edges.front();
    const double hi = edges.back();
    const int k = bin_count();
    const int idx = static_cast<int>(std::floor(static_cast<double>(k) * (x - lo) / (hi - lo)));
    return std::min(std::max(idx, 0), k - 1);
}

Histogram build_histogram(std::span<const double> values, int k) {
    if (values.empty()) throw DataError("cannot build a histogram over no values");
    if (k < 1) throw DataError("histogram needs at least one bin");
    double lo = values[0], hi = values[0];
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    Histogram h;
    // max == min up to roundoff: values that agree to the last few ulps (e.g.
    // on vertex-transitive graphs) must land in one bin, not straddle a
    // bin grid a few ulps wide
    if (hi - lo <= 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)})) {
        h.edges = {lo, hi};
        h.counts = {static_cast<long long>(values.size())};
        return h;
    }
    h.edges.resize(static_cast<std::size_t>(k) + 1);
    for (int i = 0; i <= k; ++i)
        h.edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) /
                                                        static_cast<double>(k);
    h.edges.front() = lo;
    h.edges.back() = hi;
    h.counts.assign(static_cast<std::size_t>(k), 0);
    for (double v : values) ++h.counts[static_cast<std::size_t>(h.bin_index(v))];
    return h;
}

NodeMetrics compute_node_metrics(const Graph& g) {
    const auto n = static_cast<std::size_t>(g.node_count());
    const StabilizedSystem sys = stabilize(g);
    const GramianResult gram = controllability_gramian(sys);
    const std::vector<double> close = closeness(g);
    const std::vector<double> betw = betweenness(g);
    const std::vector<double> eig = eigenvector_centrality(g);

    NodeMetrics m;
    m.lambda_max = sys.lambda_max;
    m.lyapunov_residual = gram.lyapunov_residual;
    m.values = Matrix(n, 4);
    for (std::size_t v = 0; v < n; ++v) {
        m.values(v, 0) = gram.w(v, v);
        m.values(v, 1) = close[v];
        m.values(v, 2) = betw[v];
        m.values(v, 3) = eig[v];
        for (std::size_t c = 0; c < 4; ++c)
            if (!std::isfinite(m.values(v, c)))
                throw NumericError("non-finite metric (column " + std::to_string(c) +
                                   ") at node " + std::to_string(v));
    }
    return m;
}

namespace {

FeatureMatrix onehot_matrix(std::size_t n, int width, const std::vector<int>& hot,
                            const std::string& prefix) {
    FeatureMatrix fm;
    fm.values = Matrix(n, static_cast<std::size_t>(width));
    for (std::size_t v = 0; v < n; ++v) fm.values(v, static_cast<std::size_t>(hot[v])) = 1.0;
    fm.feature_names.reserve(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i) fm.feature_names.push_back(prefix + std::to_string(i));
    return fm;
}

} // namespace

FeatureMatrix encode_avgctrl_hist_onehot(const Graph& g, int k) {
    const std::vector<double> ac = average_controllability(g);
    const Histogram h = build_histogram(ac, k);
    return encode_values_hist_onehot(ac, h, k);
}

FeatureMatrix encode_values_hist_onehot(std::span<const double> values, const Histogram& hist,
                                        int k) {
    if (k < 1) throw DataError("histogram encoding needs at least one bin");
    std::vector<int> hot(values.size());
    for (std::size_t v = 0; v < values.size(); ++v) hot[v] = hist.bin_index(values[v]);
    return onehot_matrix(values.size(), k, hot, "ac_bin_");
}

FeatureMatrix encode_degree_onehot(const Graph& g, int cap, bool clamp) {
    if (cap < 0) throw DataError("degree cap must be nonnegative");
    const auto n = static_cast<std::size_t>(g.node_count());
    std::vector<int> hot(n);
    for (std::size_t v = 0; v < n; ++v) {
        const int d = g.degree(static_cast<int>(v));
        if (d > cap && !clamp)
            throw DataError("degree " + std::to_string(d) + " exceeds cap " +
                            std::to_string(cap) + " with clamping disabled");
        hot[v] = std::min(d, cap);
    }
    return onehot_matrix(n, cap + 1, hot, "deg_");
}

FeatureMatrix assemble_nct_efa(const Graph& g, bool standardize, const DatasetMoments* stats) {
    if (standardize && stats == nullptr)
        throw DataError("standardization requested without dataset moments");
    FeatureMatrix fm;
    fm.values = compute_node_metrics(g).values;
    fm.feature_names = kNctEfaFeatureNames;
    if (standardize) standardize_columns(fm.values, *stats);
    return fm;
}

void standardize_columns(Matrix& values, const DatasetMoments& stats) {
    constexpr double kStdFloor = 1e-12;
    for (std::size_t c = 0; c < 4; ++c) {
        const bool floored = stats.stddev[c] < kStdFloor;
        for (std::size_t v = 0; v < values.rows; ++v)
            values(v, c) = floored ? 0.0 : (values(v, c) - stats.mean[c]) / stats.stddev[c];
    }
}

DatasetMoments moments_from_matrices(const std::vector<Matrix>& raw) {
    DatasetMoments m;
    for (const Matrix& x : raw) m.node_count += static_cast<long long>(x.rows);
    if (m.node_count == 0) throw DataError("cannot compute moments over an empty dataset");

    for (const Matrix& x : raw)
        for (std::size_t v = 0; v < x.rows; ++v)
            for (std::size_t c = 0; c < 4; ++c) m.mean[c] += x(v, c);
    for (std::size_t c = 0; c < 4; ++c) m.mean[c] /= static_cast<double>(m.node_count);

    std::array<double, 4> ss{};
    for (const Matrix& x : raw)
        for (std::size_t v = 0; v < x.rows; ++v)
            for (std::size_t c = 0; c < 4; ++c) {
                const double d = x(v, c) - m.mean[c];
                ss[c] += d * d;
            }
    for (std::size_t c = 0; c < 4; ++c)
        m.stddev[c] = std::sqrt(ss[c] / static_cast<double>(m.node_count));
    return m;
}

DatasetMoments compute_dataset_moments(const GraphDataset& ds) {
    if (ds.entries.empty()) throw DataError("cannot compute moments over an empty dataset");
    std::vector<Matrix> raw;
    raw.reserve(ds.entries.size());
    for (const auto& e : ds.entries) raw.push_back(compute_node_metrics(e.graph).values);
    return moments_from_matrices(raw);
}

} // namespace nctefa
