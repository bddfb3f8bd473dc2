#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nctefa {

/// Mann-Whitney ROC AUC via rank sums with average ranks for ties (tie credit
/// 0.5). Requires both classes present; throws DataError otherwise.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

/// Fold assignment per item, values in [0, folds).
struct FoldSplit {
    std::vector<int> assignment;
    int folds = 0;

    std::vector<std::size_t> members(int fold) const;
};

/// Per-class seeded shuffle then round-robin assignment; class proportions per
/// fold stay within one item of global stratification. Each class must have at
/// least `folds` members.
FoldSplit stratified_kfold(std::span<const int> labels, int folds, std::uint64_t seed);

} // namespace nctefa
