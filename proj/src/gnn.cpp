#include "nctefa/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nctefa/errors.hpp"
#include "nctefa/eval.hpp"
#include "nctefa/rng.hpp"

namespace nctefa {

std::string model_kind_name(ModelKind m) {
    return m == ModelKind::Gcn ? "gcn" : "sage";
}

ModelKind model_kind_from_name(const std::string& name) {
    if (name == "gcn") return ModelKind::Gcn;
    if (name == "sage") return ModelKind::Sage;
    throw DataError("unknown model \"" + name + "\" (expected gcn or sage)");
}

ModelState init_model(ModelKind kind, int d_in, const TrainConfig& cfg, std::uint64_t seed) {
    if (d_in < 1) throw DataError("model needs at least one input feature");
    ModelState m;
    m.kind = kind;
    m.d_in = d_in;
    m.hidden = cfg.hidden;
    m.head_hidden = cfg.head_hidden;
    m.k_sort = cfg.k_sort;

    const auto h = static_cast<std::size_t>(cfg.hidden);
    const auto hh = static_cast<std::size_t>(cfg.head_hidden);
    const auto din = static_cast<std::size_t>(d_in);
    const auto ks = static_cast<std::size_t>(cfg.k_sort);

    std::vector<Matrix> shapes;
    std::vector<bool> is_bias;
    const auto add = [&shapes, &is_bias](std::size_t r, std::size_t c, bool bias) {
        shapes.emplace_back(r, c);
        is_bias.push_back(bias);
    };
    for (int l = 0; l < ModelState::kConvLayers; ++l) {
        const std::size_t in = (l == 0) ? din : h;
        add(in, h, false);                                 // W (or W_self)
        if (kind == ModelKind::Sage) add(in, h, false);    // W_nbr
        add(1, h, true);
    }
    add(ks * h, hh, false);
    add(1, hh, true);
    add(hh, hh, false);
    add(1, hh, true);
    add(hh, 1, false);
    add(1, 1, true);

    Rng rng(seed);
    m.params = shapes;
    for (std::size_t p = 0; p < m.params.size(); ++p) {
        if (is_bias[p]) continue; // biases start at zero
        Matrix& w = m.params[p];
        const double s =
            std::sqrt(6.0 / (static_cast<double>(w.rows) + static_cast<double>(w.cols)));
        for (double& x : w.a) x = rng.unif(-s, s);
    }
    m.adam_m = shapes;
    m.adam_v = shapes;
    for (Matrix& x : m.adam_m) std::fill(x.a.begin(), x.a.end(), 0.0);
    for (Matrix& x : m.adam_v) std::fill(x.a.begin(), x.a.end(), 0.0);
    m.step_count = 0;
    return m;
}

Matrix normalize_adjacency(const Graph& g) {
    const auto n = static_cast<std::size_t>(g.node_count());
    Matrix a = g.dense_adjacency();
    std::vector<double> dinv(n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) += 1.0; // self-loop
        dinv[i] = 1.0 / std::sqrt(static_cast<double>(g.degree(static_cast<int>(i)) + 1));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= dinv[i] * dinv[j];
    return a;
}

Matrix mean_neighbor_matrix(const Graph& g) {
    const auto n = static_cast<std::size_t>(g.node_count());
    Matrix m(n, n);
    for (std::size_t v = 0; v < n; ++v) {
        const auto& nb = g.neighbors(static_cast<int>(v));
        if (nb.empty()) continue;
        const double w = 1.0 / static_cast<double>(nb.size());
        for (int u : nb) m(v, static_cast<std::size_t>(u)) = w;
    }
    return m;
}

Matrix propagation_matrix(ModelKind kind, const Graph& g) {
    return kind == ModelKind::Gcn ? normalize_adjacency(g) : mean_neighbor_matrix(g);
}

namespace {

void add_bias_relu(const Matrix& z_lin, const Matrix& bias, Matrix& z, Matrix& h) {
    z = z_lin;
    for (std::size_t i = 0; i < z.rows; ++i)
        for (std::size_t j = 0; j < z.cols; ++j) z(i, j) += bias(0, j);
    h = z;
    for (double& x : h.a) x = std::max(x, 0.0);
}

} // namespace

double gnn_forward(const Matrix& prop, const Matrix& x, const ModelState& m, ForwardCache& cache) {
    if (x.cols != static_cast<std::size_t>(m.d_in))
        throw DataError("feature width " + std::to_string(x.cols) + " does not match model d_in " +
                        std::to_string(m.d_in));
    if (prop.rows != x.rows)
        throw DataError("propagation matrix and feature rows disagree");

    const std::size_t n = x.rows;
    const auto h = static_cast<std::size_t>(m.hidden);
    const auto ks = static_cast<std::size_t>(m.k_sort);

    cache.n = n;
    cache.h.assign(1, x);
    cache.z.clear();
    cache.ph.clear();

    for (int l = 0; l < ModelState::kConvLayers; ++l) {
        const Matrix& hin = cache.h.back();
        Matrix ph = matmul(prop, hin);
        Matrix z_lin;
        if (m.kind == ModelKind::Gcn) {
            z_lin = matmul(ph, m.params[static_cast<std::size_t>(m.idx_conv_w(l))]);
        } else {
            z_lin = matmul(hin, m.params[static_cast<std::size_t>(m.idx_conv_w(l))]);
            const Matrix zn = matmul(ph, m.params[static_cast<std::size_t>(m.idx_conv_wn(l))]);
            for (std::size_t i = 0; i < z_lin.a.size(); ++i) z_lin.a[i] += zn.a[i];
        }
        Matrix z, hout;
        add_bias_relu(z_lin, m.params[static_cast<std::size_t>(m.idx_conv_b(l))], z, hout);
        cache.ph.push_back(std::move(ph));
        cache.z.push_back(std::move(z));
        cache.h.push_back(std::move(hout));
    }

    // sort pooling on the last hidden channel, descending, ties by node id
    const Matrix& hn = cache.h.back();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&hn, h](std::size_t a, std::size_t b) {
        const double ka = hn(a, h - 1), kb = hn(b, h - 1);
        if (ka != kb) return ka > kb;
        return a < b;
    });
    const std::size_t kept = std::min(n, ks);
    cache.kept.assign(order.begin(), order.begin() + static_cast<long>(kept));
    cache.pooled.assign(ks * h, 0.0);
    for (std::size_t s = 0; s < kept; ++s)
        for (std::size_t c = 0; c < h; ++c) cache.pooled[s * h + c] = hn(cache.kept[s], c);

    // flatten -> dense -> ReLU -> dense -> ReLU -> dense(1)
    const Matrix& w1 = m.params[static_cast<std::size_t>(m.idx_head(0))];
    const Matrix& b1 = m.params[static_cast<std::size_t>(m.idx_head(1))];
    const Matrix& w2 = m.params[static_cast<std::size_t>(m.idx_head(2))];
    const Matrix& b2 = m.params[static_cast<std::size_t>(m.idx_head(3))];
    const Matrix& w3 = m.params[static_cast<std::size_t>(m.idx_head(4))];
    const Matrix& b3 = m.params[static_cast<std::size_t>(m.idx_head(5))];
    const auto hh = static_cast<std::size_t>(m.head_hidden);

    cache.z1.assign(hh, 0.0);
    for (std::size_t i = 0; i < ks * h; ++i) {
        const double v = cache.pooled[i];
        if (v == 0.0) continue;
        const double* wi = &w1.a[i * hh];
        for (std::size_t j = 0; j < hh; ++j) cache.z1[j] += v * wi[j];
    }
    for (std::size_t j = 0; j < hh; ++j) cache.z1[j] += b1(0, j);
    cache.a1 = cache.z1;
    for (double& v : cache.a1) v = std::max(v, 0.0);

    cache.z2.assign(hh, 0.0);
    for (std::size_t i = 0; i < hh; ++i) {
        const double v = cache.a1[i];
        if (v == 0.0) continue;
        for (std::size_t j = 0; j < hh; ++j) cache.z2[j] += v * w2(i, j);
    }
    for (std::size_t j = 0; j < hh; ++j) cache.z2[j] += b2(0, j);
    cache.a2 = cache.z2;
    for (double& v : cache.a2) v = std::max(v, 0.0);

    double logit = b3(0, 0);
    for (std::size_t i = 0; i < hh; ++i) logit += cache.a2[i] * w3(i, 0);
    cache.logit = logit;
    return logit;
}

std::vector<Matrix> zero_gradients(const ModelState& m) {
    std::vector<Matrix> g;
    g.reserve(m.params.size());
    for (const Matrix& p : m.params) g.emplace_back(p.rows, p.cols);
    return g;
}

void gnn_backward_accumulate(const Matrix& prop, const ModelState& m, const ForwardCache& cache,
                             double dlogit, double scale, std::vector<Matrix>& acc) {
    const std::size_t n = cache.n;
    const auto h = static_cast<std::size_t>(m.hidden);
    const auto hh = static_cast<std::size_t>(m.head_hidden);
    const auto ks = static_cast<std::size_t>(m.k_sort);
    if (cache.h.size() != ModelState::kConvLayers + 1 || prop.rows != n ||
        cache.pooled.size() != ks * h || acc.size() != m.params.size())
        throw NumericError("stale or mismatched forward cache in backward pass");
    const double d = dlogit * scale;

    const Matrix& w1 = m.params[static_cast<std::size_t>(m.idx_head(0))];
    const Matrix& w2 = m.params[static_cast<std::size_t>(m.idx_head(2))];
    const Matrix& w3 = m.params[static_cast<std::size_t>(m.idx_head(4))];

    // head layer 3
    Matrix& gw3 = acc[static_cast<std::size_t>(m.idx_head(4))];
    Matrix& gb3 = acc[static_cast<std::size_t>(m.idx_head(5))];
    gb3(0, 0) += d;
    std::vector<double> da2(hh);
    for (std::size_t i = 0; i < hh; ++i) {
        gw3(i, 0) += cache.a2[i] * d;
        da2[i] = w3(i, 0) * d;
    }

    // head layer 2
    std::vector<double> dz2(hh);
    for (std::size_t i = 0; i < hh; ++i) dz2[i] = cache.z2[i] > 0.0 ? da2[i] : 0.0;
    Matrix& gw2 = acc[static_cast<std::size_t>(m.idx_head(2))];
    Matrix& gb2 = acc[static_cast<std::size_t>(m.idx_head(3))];
    std::vector<double> da1(hh, 0.0);
    for (std::size_t i = 0; i < hh; ++i) {
        const double a1i = cache.a1[i];
        for (std::size_t j = 0; j < hh; ++j) {
            gw2(i, j) += a1i * dz2[j];
            da1[i] += w2(i, j) * dz2[j];
        }
    }
    for (std::size_t j = 0; j < hh; ++j) gb2(0, j) += dz2[j];

    // head layer 1
    std::vector<double> dz1(hh);
    for (std::size_t i = 0; i < hh; ++i) dz1[i] = cache.z1[i] > 0.0 ? da1[i] : 0.0;
    Matrix& gw1 = acc[static_cast<std::size_t>(m.idx_head(0))];
    Matrix& gb1 = acc[static_cast<std::size_t>(m.idx_head(1))];
    for (std::size_t j = 0; j < hh; ++j) gb1(0, j) += dz1[j];
    std::vector<double> dpooled(ks * h, 0.0);
    for (std::size_t i = 0; i < ks * h; ++i) {
        const double pi = cache.pooled[i];
        const double* wi = &w1.a[i * hh];
        double dpi = 0.0;
        for (std::size_t j = 0; j < hh; ++j) {
            if (pi != 0.0) gw1(i, j) += pi * dz1[j];
            dpi += wi[j] * dz1[j];
        }
        dpooled[i] = dpi;
    }

    // route pooled gradient back through the captured sort permutation;
    // padded slots have no source row and vanish here
    Matrix dh(n, h);
    for (std::size_t s = 0; s < cache.kept.size(); ++s)
        for (std::size_t c = 0; c < h; ++c) dh(cache.kept[s], c) = dpooled[s * h + c];

    for (int l = ModelState::kConvLayers - 1; l >= 0; --l) {
        const Matrix& z = cache.z[static_cast<std::size_t>(l)];
        Matrix dz = dh;
        for (std::size_t i = 0; i < dz.a.size(); ++i)
            if (z.a[i] <= 0.0) dz.a[i] = 0.0;

        const Matrix& hin = cache.h[static_cast<std::size_t>(l)];
        const Matrix& ph = cache.ph[static_cast<std::size_t>(l)];
        Matrix& gb = acc[static_cast<std::size_t>(m.idx_conv_b(l))];
        for (std::size_t i = 0; i < dz.rows; ++i)
            for (std::size_t j = 0; j < dz.cols; ++j) gb(0, j) += dz(i, j);

        if (m.kind == ModelKind::Gcn) {
            const Matrix& w = m.params[static_cast<std::size_t>(m.idx_conv_w(l))];
            Matrix& gw = acc[static_cast<std::size_t>(m.idx_conv_w(l))];
            const Matrix gw_add = matmul_transA(ph, dz);
            for (std::size_t i = 0; i < gw.a.size(); ++i) gw.a[i] += gw_add.a[i];
            if (l > 0) dh = matmul(prop, matmul_transB(dz, w)); // prop is symmetric
        } else {
            const Matrix& ws = m.params[static_cast<std::size_t>(m.idx_conv_w(l))];
            const Matrix& wn = m.params[static_cast<std::size_t>(m.idx_conv_wn(l))];
            Matrix& gws = acc[static_cast<std::size_t>(m.idx_conv_w(l))];
            Matrix& gwn = acc[static_cast<std::size_t>(m.idx_conv_wn(l))];
            const Matrix gws_add = matmul_transA(hin, dz);
            const Matrix gwn_add = matmul_transA(ph, dz);
            for (std::size_t i = 0; i < gws.a.size(); ++i) gws.a[i] += gws_add.a[i];
            for (std::size_t i = 0; i < gwn.a.size(); ++i) gwn.a[i] += gwn_add.a[i];
            if (l > 0) {
                dh = matmul_transB(dz, ws);
                const Matrix dh_nbr = matmul_transA(prop, matmul_transB(dz, wn));
                for (std::size_t i = 0; i < dh.a.size(); ++i) dh.a[i] += dh_nbr.a[i];
            }
        }
    }
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double loss_bce(double logit, int label) {
    if (!std::isfinite(logit)) throw NumericError("non-finite logit in loss");
    const double y = static_cast<double>(label);
    return std::max(logit, 0.0) - logit * y + std::log1p(std::exp(-std::abs(logit)));
}

void adam_step(ModelState& m, const std::vector<Matrix>& grads, const TrainConfig& cfg) {
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
    if (grads.size() != m.params.size()) throw NumericError("gradient layout mismatch");
    m.step_count += 1;
    const auto t = static_cast<double>(m.step_count);
    const double bc1 = 1.0 - std::pow(kBeta1, t);
    const double bc2 = 1.0 - std::pow(kBeta2, t);
    const double decay = 1.0 - cfg.learning_rate * cfg.weight_decay;

    for (std::size_t p = 0; p < m.params.size(); ++p) {
        Matrix& theta = m.params[p];
        const Matrix& g = grads[p];
        Matrix& mm = m.adam_m[p];
        Matrix& vv = m.adam_v[p];
        for (std::size_t i = 0; i < theta.a.size(); ++i) {
            const double gi = g.a[i];
            if (!std::isfinite(gi))
                throw NumericError("non-finite gradient in parameter tensor " + std::to_string(p) +
                                   " at step " + std::to_string(m.step_count));
            theta.a[i] *= decay;
            mm.a[i] = kBeta1 * mm.a[i] + (1.0 - kBeta1) * gi;
            vv.a[i] = kBeta2 * vv.a[i] + (1.0 - kBeta2) * gi * gi;
            const double mhat = mm.a[i] / bc1;
            const double vhat = vv.a[i] / bc2;
            theta.a[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + kEps);
        }
    }
}

FoldTrainResult train_fold(const std::vector<TrainItem>& items,
                           const std::vector<std::size_t>& train_idx, const TrainConfig& cfg,
                           std::uint64_t fold_seed) {
    if (train_idx.empty()) throw DataError("empty training set");
    const int d_in = static_cast<int>(items[train_idx[0]].features->cols);

    Rng rng(fold_seed);
    FoldTrainResult out;
    out.model = init_model(cfg.model, d_in, cfg, rng.next());
    out.epoch_loss.reserve(static_cast<std::size_t>(cfg.epochs));

    std::vector<std::size_t> order(train_idx);
    std::vector<Matrix> grads = zero_gradients(out.model);
    ForwardCache cache;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t pos = 0;
        while (pos < order.size()) {
            const std::size_t batch_end =
                std::min(order.size(), pos + static_cast<std::size_t>(cfg.batch_size));
            const double inv = 1.0 / static_cast<double>(batch_end - pos);
            for (Matrix& g : grads) std::fill(g.a.begin(), g.a.end(), 0.0);
            for (std::size_t k = pos; k < batch_end; ++k) {
                const TrainItem& it = items[order[k]];
                const double logit = gnn_forward(it.prop, *it.features, out.model, cache);
                epoch_loss += loss_bce(logit, it.label);
                const double dlogit = sigmoid(logit) - static_cast<double>(it.label);
                gnn_backward_accumulate(it.prop, out.model, cache, dlogit, inv, grads);
            }
            adam_step(out.model, grads, cfg);
            pos = batch_end;
        }
        out.epoch_loss.push_back(epoch_loss / static_cast<double>(order.size()));
    }
    return out;
}

TrainReport train_and_evaluate(const GraphDataset& ds, const std::vector<FeatureMatrix>& features,
                               const TrainConfig& cfg) {
    if (!ds.labeled()) throw DataError("dataset is not fully labeled");

    // bind features by graph id
    std::vector<TrainItem> items(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const DatasetEntry& e = ds.entries[i];
        const FeatureMatrix* fm = nullptr;
        for (const auto& f : features)
            if (f.graph_id == e.id) {
                fm = &f;
                break;
            }
        if (fm == nullptr) throw DataError("no features for graph \"" + e.id + "\"");
        if (fm->values.rows != static_cast<std::size_t>(e.graph.node_count()))
            throw DataError("feature rows for graph \"" + e.id + "\" do not match its node count");
        if (i > 0 && fm->values.cols != items[0].features->cols)
            throw DataError("feature width for graph \"" + e.id +
                            "\" differs from the rest of the dataset");
        items[i].graph = &e.graph;
        items[i].features = &fm->values;
        items[i].label = e.label;
        items[i].prop = propagation_matrix(cfg.model, e.graph);
    }
    const int d_in = static_cast<int>(items[0].features->cols);

    std::vector<int> labels(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) labels[i] = ds.entries[i].label;
    const FoldSplit split = stratified_kfold(labels, cfg.folds, cfg.seed);

    TrainReport report;
    report.config = cfg;
    report.d_in = d_in;
    report.folds.resize(static_cast<std::size_t>(cfg.folds));

    std::vector<std::string> fold_errors(static_cast<std::size_t>(cfg.folds));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(cfg.threads > 0 ? cfg.threads : omp_get_max_threads())
#endif
    for (int fold = 0; fold < cfg.folds; ++fold) {
        try {
            std::vector<std::size_t> train_idx, eval_idx;
            for (std::size_t i = 0; i < items.size(); ++i)
                (split.assignment[i] == fold ? eval_idx : train_idx).push_back(i);

            const std::uint64_t fold_seed = Rng::derive(cfg.seed, static_cast<std::uint64_t>(fold));
            FoldTrainResult trained = train_fold(items, train_idx, cfg, fold_seed);

            FoldOutcome& out = report.folds[static_cast<std::size_t>(fold)];
            out.fold = fold;
            out.eval_count = static_cast<int>(eval_idx.size());
            out.final_train_loss = trained.epoch_loss.empty() ? 0.0 : trained.epoch_loss.back();

            std::vector<double> scores;
            std::vector<int> eval_labels;
            ForwardCache cache;
            for (std::size_t i : eval_idx) {
                scores.push_back(sigmoid(gnn_forward(items[i].prop, *items[i].features,
                                                     trained.model, cache)));
                eval_labels.push_back(items[i].label);
            }
            const bool has_both = std::count(eval_labels.begin(), eval_labels.end(), 1) > 0 &&
                                  std::count(eval_labels.begin(), eval_labels.end(), 0) > 0;
            if (!has_both) {
                out.single_class = true;
            } else {
                out.auc = roc_auc(scores, eval_labels);
            }
        } catch (const std::exception& e) {
            fold_errors[static_cast<std::size_t>(fold)] = e.what();
        }
    }
    for (const std::string& err : fold_errors)
        if (!err.empty()) throw NumericError("fold failed: " + err);

    double sum = 0.0;
    int used = 0;
    for (const FoldOutcome& f : report.folds) {
        if (f.single_class) {
            ++report.excluded_folds;
            continue;
        }
        sum += f.auc;
        ++used;
    }
    if (used == 0) throw DataError("every fold was single-class; AUC undefined");
    report.mean_auc = sum / used;
    double ss = 0.0;
    for (const FoldOutcome& f : report.folds)
        if (!f.single_class) ss += (f.auc - report.mean_auc) * (f.auc - report.mean_auc);
    report.std_auc = std::sqrt(ss / used);
    return report;
}

} // namespace nctefa
