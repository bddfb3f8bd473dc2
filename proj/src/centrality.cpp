#include "nctefa/centrality.hpp"

#include <cmath>
#include <queue>

#include "nctefa/spectra.hpp"

namespace nctefa {

std::vector<double> closeness(const Graph& g) {
    const int n = g.node_count();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    if (n == 1) return out;

    std::vector<int> dist(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[static_cast<std::size_t>(s)] = 0;
        std::queue<int> q;
        q.push(s);
        long long reach = 1, dsum = 0;
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            for (int u : g.neighbors(v)) {
                if (dist[static_cast<std::size_t>(u)] < 0) {
                    dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
                    dsum += dist[static_cast<std::size_t>(u)];
                    ++reach;
                    q.push(u);
                }
            }
        }
        if (reach > 1) {
            const double r1 = static_cast<double>(reach - 1);
            out[static_cast<std::size_t>(s)] =
                (r1 / static_cast<double>(n - 1)) * (r1 / static_cast<double>(dsum));
        }
    }
    return out;
}

std::vector<double> betweenness(const Graph& g) {
    const int n = g.node_count();
    std::vector<double> bc(static_cast<std::size_t>(n), 0.0);
    if (n <= 2) return bc;

    std::vector<int> dist(static_cast<std::size_t>(n));
    std::vector<double> sigma(static_cast<std::size_t>(n));
    std::vector<double> delta(static_cast<std::size_t>(n));
    std::vector<int> order; // nodes in non-decreasing BFS distance
    order.reserve(static_cast<std::size_t>(n));

    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        order.clear();
        dist[static_cast<std::size_t>(s)] = 0;
        sigma[static_cast<std::size_t>(s)] = 1.0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            order.push_back(v);
            for (int u : g.neighbors(v)) {
                if (dist[static_cast<std::size_t>(u)] < 0) {
                    dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
                    q.push(u);
                }
                if (dist[static_cast<std::size_t>(u)] == dist[static_cast<std::size_t>(v)] + 1)
                    sigma[static_cast<std::size_t>(u)] += sigma[static_cast<std::size_t>(v)];
            }
        }
        // dependency accumulation, farthest first
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const int w = *it;
            for (int v : g.neighbors(w)) {
                if (dist[static_cast<std::size_t>(v)] == dist[static_cast<std::size_t>(w)] - 1) {
                    delta[static_cast<std::size_t>(v)] +=
                        sigma[static_cast<std::size_t>(v)] / sigma[static_cast<std::size_t>(w)] *
                        (1.0 + delta[static_cast<std::size_t>(w)]);
                }
            }
            if (w != s) bc[static_cast<std::size_t>(w)] += delta[static_cast<std::size_t>(w)];
        }
    }

    // each unordered pair was visited from both endpoints
    const double norm =
        static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
    for (double& x : bc) x = x / 2.0 / norm;
    return bc;
}

std::vector<double> eigenvector_centrality(const Graph& g) {
    const int n = g.node_count();
    if (g.edge_count() == 0)
        return std::vector<double>(static_cast<std::size_t>(n),
                                   1.0 / std::sqrt(static_cast<double>(n)));
    return spectral_radius_symmetric(g.dense_adjacency()).eigenvector;
}

} // namespace nctefa
