#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nctefa/graph.hpp"
#include "nctefa/matrix.hpp"

namespace nctefa {

enum class ModelKind { Gcn, Sage };

std::string model_kind_name(ModelKind m);
ModelKind model_kind_from_name(const std::string& name);

struct TrainConfig {
    int epochs = 100;
    double learning_rate = 1e-4;
    double weight_decay = 5e-2;
    int folds = 10;
    int batch_size = 32;
    std::uint64_t seed = 0;
    ModelKind model = ModelKind::Gcn;
    int k_sort = 30;
    int threads = 0;      // 0 = runtime default
    int hidden = 64;      // per conv layer
    int head_hidden = 32; // per MLP layer
};

/// All trainable parameters plus Adam moments. Parameter layout, biases
/// stored as 1 x k matrices:
///   GCN:  [W0,b0, W1,b1, W2,b2] then head [Wh1,bh1, Wh2,bh2, Wh3,bh3]
///   SAGE: [Wself0,Wnbr0,b0, ...x3] then the same head block
struct ModelState {
    ModelKind kind = ModelKind::Gcn;
    int d_in = 0;
    int hidden = 64;
    int head_hidden = 32;
    int k_sort = 30;
    std::vector<Matrix> params;
    std::vector<Matrix> adam_m;
    std::vector<Matrix> adam_v;
    long step_count = 0;

    static constexpr int kConvLayers = 3;
    int per_layer() const { return kind == ModelKind::Sage ? 3 : 2; }
    int idx_conv_w(int layer) const { return per_layer() * layer; }
    int idx_conv_wn(int layer) const { return per_layer() * layer + 1; } // SAGE only
    int idx_conv_b(int layer) const { return per_layer() * layer + per_layer() - 1; }
    int idx_head(int i) const { return per_layer() * kConvLayers + i; } // i in [0,6)
    int param_count() const { return idx_head(6); }
};

/// Glorot-uniform weights (uniform(-s, s), s = sqrt(6/(fan_in+fan_out))),
/// zero biases, zero moments.
ModelState init_model(ModelKind kind, int d_in, const TrainConfig& cfg, std::uint64_t seed);

/// Symmetric renormalized propagation matrix D^-1/2 (A+I) D^-1/2 used by the
/// GCN layers; spectral radius is at most 1.
Matrix normalize_adjacency(const Graph& g);

/// Row-stochastic neighbor-mean matrix used by the SAGE layers; rows of
/// isolated nodes are zero (empty-neighborhood mean is the zero vector).
Matrix mean_neighbor_matrix(const Graph& g);

/// Propagation matrix appropriate for the model kind.
Matrix propagation_matrix(ModelKind kind, const Graph& g);

/// Activation record kept for the backward pass.
struct ForwardCache {
    std::size_t n = 0;
    std::vector<Matrix> h;      // h[0] = X, h[l+1] = layer output, 4 entries
    std::vector<Matrix> z;      // per-layer preactivation
    std::vector<Matrix> ph;     // per-layer prop*H (GCN: A_hat H; SAGE: M H)
    std::vector<std::size_t> kept; // sorted row ids kept by the pooling
    std::vector<double> pooled;    // flattened k_sort*hidden, zero padded
    std::vector<double> z1, a1, z2, a2;
    double logit = 0.0;
};

/// Three conv layers with ReLU, then sort pooling: rows ordered by the last
/// hidden channel descending (ties by node id ascending), top k_sort rows
/// kept (zero padded when n < k_sort), flattened through a two-layer MLP to
/// one logit.
double gnn_forward(const Matrix& prop, const Matrix& x, const ModelState& m, ForwardCache& cache);

/// Reverse accumulation through the cached forward; gradients are added into
/// `acc` (same layout as params) scaled by `scale`. Zero-padded pooling rows
/// contribute nothing.
void gnn_backward_accumulate(const Matrix& prop, const ModelState& m, const ForwardCache& cache,
                             double dlogit, double scale, std::vector<Matrix>& acc);

std::vector<Matrix> zero_gradients(const ModelState& m);

/// Numerically stable binary cross-entropy on a logit:
/// max(z,0) - z*y + log(1 + exp(-|z|)).
double loss_bce(double logit, int label);

double sigmoid(double z);

/// Adam (beta1 0.9, beta2 0.999, eps 1e-8, bias correction) with decoupled
/// weight decay applied as theta *= (1 - lr*wd) before the moment update.
/// Throws NumericError on non-finite gradients.
void adam_step(ModelState& m, const std::vector<Matrix>& grads, const TrainConfig& cfg);

/// One graph ready for training: propagation matrix cached, features bound.
struct TrainItem {
    const Graph* graph = nullptr;
    const Matrix* features = nullptr;
    Matrix prop;
    int label = 0;
};

struct FoldTrainResult {
    ModelState model;
    std::vector<double> epoch_loss; // mean training loss per epoch
};

/// Sequential, deterministic training over the given item subset.
FoldTrainResult train_fold(const std::vector<TrainItem>& items,
                           const std::vector<std::size_t>& train_idx, const TrainConfig& cfg,
                           std::uint64_t fold_seed);

struct FoldOutcome {
    int fold = 0;
    double auc = 0.0;
    bool single_class = false; // AUC undefined; excluded from the mean
    int eval_count = 0;
    double final_train_loss = 0.0;
};

struct TrainReport {
    TrainConfig config;
    int d_in = 0;
    std::vector<FoldOutcome> folds;
    double mean_auc = 0.0;
    double std_auc = 0.0;
    int excluded_folds = 0;
};

/// Stratified k-fold protocol: per fold, train on the rest and score the
/// held-out fold with sigmoid(logit) ROC AUC. Folds run in parallel; each
/// derives its own RNG stream from (seed, fold), so scheduling never changes
/// results. Throws DataError if features do not cover the dataset.
TrainReport train_and_evaluate(const GraphDataset& ds, const std::vector<FeatureMatrix>& features,
                               const TrainConfig& cfg);

} // namespace nctefa
