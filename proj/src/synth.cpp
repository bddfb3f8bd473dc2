#include "nctefa/synth.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "nctefa/errors.hpp"

namespace nctefa {

Graph circulant_graph(int n, std::span<const int> offsets) {
    std::set<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        for (int d : offsets) {
            const int j = (i + d) % n;
            if (i == j) continue;
            edges.insert({std::min(i, j), std::max(i, j)});
        }
    }
    return Graph(n, {edges.begin(), edges.end()});
}

Graph random_regular_graph(int n, int degree, Rng& rng, int max_attempts) {
    if (n <= degree || (static_cast<long long>(n) * degree) % 2 != 0)
        throw DataError("no simple " + std::to_string(degree) + "-regular graph on " +
                        std::to_string(n) + " nodes");
    std::vector<int> stubs(static_cast<std::size_t>(n) * static_cast<std::size_t>(degree));
    for (int v = 0; v < n; ++v)
        for (int k = 0; k < degree; ++k) stubs[static_cast<std::size_t>(v * degree + k)] = v;

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        rng.shuffle(stubs);
        std::set<std::pair<int, int>> edges;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            const int u = stubs[i], v = stubs[i + 1];
            if (u == v || !edges.insert({std::min(u, v), std::max(u, v)}).second) {
                ok = false;
                break;
            }
        }
        if (ok) return Graph(n, {edges.begin(), edges.end()});
    }
    throw NumericError("pairing model rejected " + std::to_string(max_attempts) +
                       " attempts for a simple " + std::to_string(degree) + "-regular graph on " +
                       std::to_string(n) + " nodes");
}

GraphDataset synth_regular_pair(int count, std::uint64_t seed, int n_min, int n_max) {
    if (count < 2) throw DataError("need at least 2 graphs");
    static constexpr int kOffsets[] = {1, 2};
    Rng rng(seed);
    GraphDataset ds;
    ds.entries.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const int n = static_cast<int>(rng.range(n_min, n_max));
        const int label = i % 2;
        Graph g = (label == 0) ? circulant_graph(n, kOffsets) : random_regular_graph(n, 4, rng);
        ds.entries.push_back({std::to_string(i), std::move(g), label});
    }
    std::sort(ds.entries.begin(), ds.entries.end(),
              [](const DatasetEntry& a, const DatasetEntry& b) { return a.id < b.id; });
    return ds;
}

} // namespace nctefa
