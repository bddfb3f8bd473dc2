#include "nctefa/eval.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "nctefa/errors.hpp"
#include "nctefa/rng.hpp"

namespace nctefa {

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw DataError("scores/labels length mismatch");
    const std::size_t n = scores.size();
    long long n_pos = 0;
    for (int y : labels) {
        if (y != 0 && y != 1) throw DataError("labels must be 0 or 1");
        n_pos += y;
    }
    const long long n_neg = static_cast<long long>(n) - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw DataError("AUC undefined: only one class present");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&scores](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // average ranks over tie groups, 1-based
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]] == 1) pos_rank_sum += avg_rank;
        i = j;
    }
    const double u = pos_rank_sum - static_cast<double>(n_pos) *
                                        (static_cast<double>(n_pos) + 1.0) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

std::vector<std::size_t> FoldSplit::members(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i] == fold) out.push_back(i);
    return out;
}

FoldSplit stratified_kfold(std::span<const int> labels, int folds, std::uint64_t seed) {
    if (folds < 2) throw DataError("need at least 2 folds");
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1) throw DataError("labels must be 0 or 1");
        by_class[labels[i]].push_back(i);
    }
    for (int c = 0; c < 2; ++c)
        if (by_class[c].size() < static_cast<std::size_t>(folds))
            throw DataError("class " + std::to_string(c) + " has " +
                            std::to_string(by_class[c].size()) + " members, fewer than " +
                            std::to_string(folds) + " folds");

    FoldSplit split;
    split.folds = folds;
    split.assignment.assign(labels.size(), -1);
    Rng rng(seed);
    for (int c = 0; c < 2; ++c) {
        rng.shuffle(by_class[c]);
        for (std::size_t i = 0; i < by_class[c].size(); ++i)
            split.assignment[by_class[c][i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
    }
    return split;
}

} // namespace nctefa
