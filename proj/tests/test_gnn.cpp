#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "nctefa/errors.hpp"
#include "nctefa/gnn.hpp"
#include "nctefa/oracle.hpp"
#include "nctefa/rng.hpp"
#include "nctefa/spectra.hpp"
#include "test_util.hpp"

using namespace nctefa;

namespace {

TrainConfig small_cfg() {
    TrainConfig cfg;
    cfg.hidden = 4;
    cfg.head_hidden = 4;
    cfg.k_sort = 3;
    return cfg;
}

Matrix random_features(std::size_t n, std::size_t d, Rng& rng) {
    Matrix x(n, d);
    for (double& v : x.a) v = rng.unif(-1.0, 1.0);
    return x;
}

} // namespace

TEST_CASE("normalize_adjacency spot values") {
    const Matrix k2 = normalize_adjacency(testutil::k2());
    for (double v : k2.a) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));

    const Matrix one = normalize_adjacency(Graph::singleton());
    CHECK(one(0, 0) == doctest::Approx(1.0));

    const Matrix p3 = normalize_adjacency(testutil::path3());
    CHECK(p3(0, 1) == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-12));
}

TEST_CASE("normalize_adjacency spectral radius at most one") {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(15));
        const Graph g = oracle::random_connected_graph(n, static_cast<int>(rng.below(10)), rng);
        const Matrix ahat = normalize_adjacency(g);
        CHECK(max_asymmetry(ahat) <= 1e-12);
        CHECK(spectral_radius_symmetric(ahat).lambda_max <= 1.0 + 1e-9);
    }
}

TEST_CASE("mean neighbor matrix handles isolated nodes") {
    const Graph g(3, {{0, 1}});
    const Matrix m = mean_neighbor_matrix(g);
    CHECK(m(0, 1) == doctest::Approx(1.0));
    CHECK(m(1, 0) == doctest::Approx(1.0));
    for (std::size_t j = 0; j < 3; ++j) CHECK(m(2, j) == 0.0); // empty neighborhood
}

TEST_CASE("bce loss values") {
    CHECK(loss_bce(0.0, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(loss_bce(20.0, 1) <= 2.1e-9);
    CHECK(loss_bce(-20.0, 1) == doctest::Approx(20.0).epsilon(1e-8));
    CHECK(loss_bce(0.0, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(loss_bce(5.0, 0) == doctest::Approx(loss_bce(-5.0, 1)).epsilon(1e-12));
}

TEST_CASE("forward with zero weights gives logit zero") {
    const TrainConfig cfg = small_cfg();
    for (ModelKind kind : {ModelKind::Gcn, ModelKind::Sage}) {
        ModelState m = init_model(kind, 2, cfg, 1);
        for (Matrix& p : m.params) std::fill(p.a.begin(), p.a.end(), 0.0);
        Rng rng(5);
        const Graph g = oracle::random_connected_graph(4, 2, rng);
        ForwardCache cache;
        CHECK(gnn_forward(propagation_matrix(kind, g), random_features(4, 2, rng), m, cache) ==
              0.0);
    }
}

TEST_CASE("final head bias passes straight through a zero model") {
    const TrainConfig cfg = small_cfg();
    ModelState m = init_model(ModelKind::Gcn, 1, cfg, 1);
    for (Matrix& p : m.params) std::fill(p.a.begin(), p.a.end(), 0.0);
    m.params[static_cast<std::size_t>(m.idx_head(5))](0, 0) = 0.625;
    Matrix x(1, 1);
    x(0, 0) = 1.0;
    ForwardCache cache;
    CHECK(gnn_forward(normalize_adjacency(Graph::singleton()), x, m, cache) ==
          doctest::Approx(0.625));
}

TEST_CASE("forward is invariant under node permutation when sort keys are distinct") {
    const TrainConfig cfg = small_cfg();
    Rng rng(11);
    for (ModelKind kind : {ModelKind::Gcn, ModelKind::Sage}) {
        int tested = 0;
        for (std::uint64_t seed = 0; seed < 60 && tested < 3; ++seed) {
            Rng grng(seed * 31 + 7);
            const int n = 4 + static_cast<int>(grng.below(3));
            const Graph g =
                oracle::random_connected_graph(n, static_cast<int>(grng.below(5)), grng);
            const Matrix x = random_features(static_cast<std::size_t>(n), 2, grng);
            const ModelState m = init_model(kind, 2, cfg, grng.next());

            ForwardCache cache;
            const double logit = gnn_forward(propagation_matrix(kind, g), x, m, cache);
            // keys must be pairwise distinct for exact invariance
            std::vector<double> keys;
            for (std::size_t i = 0; i < cache.h.back().rows; ++i)
                keys.push_back(cache.h.back()(i, cache.h.back().cols - 1));
            std::sort(keys.begin(), keys.end());
            if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) continue;

            std::vector<int> perm(static_cast<std::size_t>(n));
            std::iota(perm.begin(), perm.end(), 0);
            rng.shuffle(perm);
            const Graph h = testutil::permuted(g, perm);
            Matrix xp(static_cast<std::size_t>(n), 2);
            for (int v = 0; v < n; ++v)
                for (std::size_t c = 0; c < 2; ++c)
                    xp(static_cast<std::size_t>(perm[static_cast<std::size_t>(v)]), c) =
                        x(static_cast<std::size_t>(v), c);
            ForwardCache cache2;
            const double logit2 = gnn_forward(propagation_matrix(kind, h), xp, m, cache2);
            CHECK(logit2 == doctest::Approx(logit).epsilon(1e-10));
            ++tested;
        }
        CHECK(tested == 3);
    }
}

TEST_CASE("backward spot checks") {
    const TrainConfig cfg = small_cfg();

    SUBCASE("zero model, label 1: final bias gradient is sigmoid(0) - 1") {
        ModelState m = init_model(ModelKind::Gcn, 1, cfg, 3);
        for (Matrix& p : m.params) std::fill(p.a.begin(), p.a.end(), 0.0);
        Matrix x(2, 1);
        x(0, 0) = 0.3;
        x(1, 0) = -0.4;
        const Graph g = testutil::k2();
        ForwardCache cache;
        const double logit = gnn_forward(normalize_adjacency(g), x, m, cache);
        std::vector<Matrix> grads = zero_gradients(m);
        gnn_backward_accumulate(normalize_adjacency(g), m, cache, sigmoid(logit) - 1.0, 1.0,
                                grads);
        CHECK(grads[static_cast<std::size_t>(m.idx_head(5))](0, 0) == doctest::Approx(-0.5));
    }

    SUBCASE("accumulating the same example twice doubles every gradient") {
        Rng rng(13);
        const Graph g = oracle::random_connected_graph(5, 3, rng);
        const Matrix x = random_features(5, 2, rng);
        const ModelState m = init_model(ModelKind::Sage, 2, cfg, rng.next());
        const Matrix prop = propagation_matrix(ModelKind::Sage, g);
        ForwardCache cache;
        const double logit = gnn_forward(prop, x, m, cache);
        const double d = sigmoid(logit) - 1.0;
        std::vector<Matrix> once = zero_gradients(m);
        std::vector<Matrix> twice = zero_gradients(m);
        gnn_backward_accumulate(prop, m, cache, d, 1.0, once);
        gnn_backward_accumulate(prop, m, cache, d, 1.0, twice);
        gnn_backward_accumulate(prop, m, cache, d, 1.0, twice);
        for (std::size_t p = 0; p < once.size(); ++p)
            for (std::size_t i = 0; i < once[p].a.size(); ++i)
                CHECK(twice[p].a[i] == doctest::Approx(2.0 * once[p].a[i]).epsilon(1e-12));
    }

    SUBCASE("zero-padded pooling rows receive no gradient mass") {
        TrainConfig cfg2 = small_cfg();
        cfg2.k_sort = 5; // graph has only 2 nodes -> 3 padded rows
        Rng rng(17);
        const Graph g = testutil::k2();
        const Matrix x = random_features(2, 2, rng);
        const ModelState m = init_model(ModelKind::Gcn, 2, cfg2, rng.next());
        const Matrix prop = normalize_adjacency(g);
        ForwardCache cache;
        gnn_forward(prop, x, m, cache);
        std::vector<Matrix> grads = zero_gradients(m);
        gnn_backward_accumulate(prop, m, cache, 1.0, 1.0, grads);
        const Matrix& gw1 = grads[static_cast<std::size_t>(m.idx_head(0))];
        const auto h = static_cast<std::size_t>(cfg2.hidden);
        for (std::size_t row = 2 * h; row < 5 * h; ++row)
            for (std::size_t c = 0; c < gw1.cols; ++c) CHECK(gw1(row, c) == 0.0);
    }
}

TEST_CASE("gradients match central finite differences on small instances") {
    for (ModelKind kind : {ModelKind::Gcn, ModelKind::Sage})
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL})
            CHECK(oracle::fd_gradient_max_rel_error(kind, seed) <= 1e-4);
}

TEST_CASE("adam step behavior") {
    TrainConfig cfg = small_cfg();
    cfg.learning_rate = 1e-2;

    SUBCASE("zero gradients and zero decay leave parameters unchanged") {
        cfg.weight_decay = 0.0;
        ModelState m = init_model(ModelKind::Gcn, 2, cfg, 5);
        const std::vector<Matrix> before = m.params;
        adam_step(m, zero_gradients(m), cfg);
        for (std::size_t p = 0; p < before.size(); ++p) CHECK(m.params[p] == before[p]);
        CHECK(m.step_count == 1);
    }

    SUBCASE("first step moves a scalar by roughly the learning rate") {
        cfg.weight_decay = 0.0;
        ModelState m = init_model(ModelKind::Gcn, 2, cfg, 5);
        const double theta0 = m.params[0](0, 0);
        std::vector<Matrix> grads = zero_gradients(m);
        grads[0](0, 0) = 0.37; // any nonzero gradient
        adam_step(m, grads, cfg);
        const double step = theta0 - m.params[0](0, 0);
        CHECK(step == doctest::Approx(cfg.learning_rate).epsilon(1e-6));

        ModelState m2 = init_model(ModelKind::Gcn, 2, cfg, 5);
        grads[0](0, 0) = -0.0004;
        adam_step(m2, grads, cfg);
        CHECK(m2.params[0](0, 0) - theta0 == doctest::Approx(cfg.learning_rate).epsilon(1e-4));
    }

    SUBCASE("decay with zero gradients shrinks by (1 - lr*wd) per step") {
        cfg.weight_decay = 0.05;
        ModelState m = init_model(ModelKind::Sage, 2, cfg, 5);
        const double theta0 = m.params[0](0, 0);
        adam_step(m, zero_gradients(m), cfg);
        adam_step(m, zero_gradients(m), cfg);
        const double f = 1.0 - cfg.learning_rate * cfg.weight_decay;
        CHECK(m.params[0](0, 0) == doctest::Approx(theta0 * f * f).epsilon(1e-12));
    }

    SUBCASE("non-finite gradient aborts") {
        ModelState m = init_model(ModelKind::Gcn, 2, cfg, 5);
        std::vector<Matrix> grads = zero_gradients(m);
        grads[2](0, 0) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(adam_step(m, grads, cfg), NumericError);
    }
}

namespace {

/// Synthetic labeled items with caller-chosen features.
struct Bench {
    std::vector<Graph> graphs;
    std::vector<Matrix> feats;
    std::vector<TrainItem> items;
    GraphDataset ds;
    std::vector<FeatureMatrix> fms;
};

Bench make_bench(int count, int d_in, ModelKind kind, std::uint64_t seed,
                 bool features_equal_label) {
    Bench b;
    Rng rng(seed);
    b.graphs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const int n = 5 + static_cast<int>(rng.below(6));
        b.graphs.push_back(
            oracle::random_connected_graph(n, static_cast<int>(rng.below(6)), rng));
    }
    for (int i = 0; i < count; ++i) {
        const int label = i % 2;
        const auto n = static_cast<std::size_t>(b.graphs[static_cast<std::size_t>(i)].node_count());
        Matrix x(n, static_cast<std::size_t>(d_in));
        for (double& v : x.a)
            v = features_equal_label ? static_cast<double>(label) : rng.unif(-1.0, 1.0);
        b.feats.push_back(std::move(x));
        b.ds.entries.push_back({std::to_string(i), b.graphs[static_cast<std::size_t>(i)], label});
    }
    for (int i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        TrainItem it;
        it.graph = &b.graphs[idx];
        it.features = &b.feats[idx];
        it.label = i % 2;
        it.prop = propagation_matrix(kind, b.graphs[idx]);
        b.items.push_back(std::move(it));
        FeatureMatrix fm;
        fm.graph_id = std::to_string(i);
        fm.values = b.feats[idx];
        b.fms.push_back(std::move(fm));
    }
    return b;
}

} // namespace

TEST_CASE("training loss is non-increasing on a small overfit set") {
    TrainConfig cfg = small_cfg();
    cfg.epochs = 60;
    cfg.batch_size = 8;
    cfg.learning_rate = 3e-3; // overfit quickly at this scale
    const Bench b = make_bench(20, 3, ModelKind::Gcn, 71, false);
    std::vector<std::size_t> all(20);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const FoldTrainResult r = train_fold(b.items, all, cfg, 123);
    REQUIRE(r.epoch_loss.size() == 60);
    double best = r.epoch_loss[9];
    for (std::size_t e = 10; e < r.epoch_loss.size(); ++e) {
        CHECK(r.epoch_loss[e] <= best * 1.05);
        best = std::min(best, r.epoch_loss[e]);
    }
    CHECK(r.epoch_loss.back() < r.epoch_loss.front());
}

TEST_CASE("separable task reaches near-perfect AUC") {
    TrainConfig cfg; // full-size reference model, default protocol
    cfg.seed = 2024;
    cfg.threads = 2;
    const Bench b = make_bench(60, 1, cfg.model, 8, /*features_equal_label=*/true);
    const TrainReport rep = train_and_evaluate(b.ds, b.fms, cfg);
    CHECK(rep.mean_auc >= 0.99);
}

TEST_CASE("shuffled labels sit at chance level") {
    TrainConfig cfg;
    cfg.epochs = 15;
    cfg.folds = 5;
    cfg.seed = 31;
    cfg.threads = 2;
    Bench b = make_bench(100, 3, cfg.model, 99, false); // features carry no label signal
    const TrainReport rep = train_and_evaluate(b.ds, b.fms, cfg);
    CHECK(rep.mean_auc >= 0.40);
    CHECK(rep.mean_auc <= 0.60);
}

TEST_CASE("same seed twice gives identical per-fold AUCs") {
    TrainConfig cfg = small_cfg();
    cfg.epochs = 5;
    cfg.folds = 3;
    cfg.seed = 7;
    cfg.model = ModelKind::Sage;
    const Bench b = make_bench(30, 2, cfg.model, 5, false);
    const TrainReport r1 = train_and_evaluate(b.ds, b.fms, cfg);
    const TrainReport r2 = train_and_evaluate(b.ds, b.fms, cfg);
    REQUIRE(r1.folds.size() == r2.folds.size());
    for (std::size_t f = 0; f < r1.folds.size(); ++f) CHECK(r1.folds[f].auc == r2.folds[f].auc);
}

TEST_CASE("feature coverage is enforced") {
    TrainConfig cfg = small_cfg();
    cfg.folds = 2;
    Bench b = make_bench(10, 2, cfg.model, 3, false);
    b.fms[4].graph_id = "missing";
    CHECK_THROWS_WITH_AS(train_and_evaluate(b.ds, b.fms, cfg), doctest::Contains("\"4\""),
                         DataError);
}
