#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nctefa/gnn.hpp"
#include "nctefa/graph.hpp"
#include "nctefa/matrix.hpp"
#include "nctefa/rng.hpp"

namespace nctefa::oracle {

/// Solves A W + W A^T + C = 0 through the n^2 x n^2 Kronecker linear system
/// with Gaussian elimination. Deliberately shares nothing with the
/// eigendecomposition route it cross-checks.
Matrix kronecker_lyapunov_solve(const Matrix& a, const Matrix& c);

/// All-pairs shortest-path centralities by Floyd-Warshall distance and
/// path-count tables (no BFS, no Brandes accumulation).
std::vector<double> bruteforce_closeness(const Graph& g);
std::vector<double> bruteforce_betweenness(const Graph& g);

/// AUC by the exhaustive positive/negative pair double loop, tie credit 0.5.
double auc_by_pair_counting(std::span<const double> scores, std::span<const int> labels);

// ---- exhaustive small-graph generator ----------------------------------

/// masks[n] = canonical edge masks (bit slot j*(j-1)/2+i for pair i<j) of all
/// non-isomorphic graphs on n nodes, for n = 1..max_n (max_n <= 7). The known
/// counts (1, 2, 4, 11, 34, 156, 1044) are verified internally.
std::vector<std::vector<std::uint32_t>> enumerate_nonisomorphic_graphs(int max_n);

Graph graph_from_mask(int n, std::uint32_t mask);
bool mask_is_connected(int n, std::uint32_t mask);

/// Random connected graph: random recursive tree plus `extra` random edges.
Graph random_connected_graph(int n, int extra, Rng& rng);

// ---- self-checks --------------------------------------------------------

struct CheckResult {
    std::string name;
    bool pass = false;
    double max_dev = 0.0;
    std::string detail;
};

using CentralityFn = std::function<std::vector<double>(const Graph&)>;

/// Gramian diagonal vs the Kronecker solve over every graph (connected or
/// not) of the exhaustive suite up to max_n. Tolerance 1e-8.
CheckResult check_lyapunov_kronecker(int max_n = 6);

/// Closeness/betweenness vs brute force on every non-isomorphic connected
/// graph up to max_n plus `sample_n8` random connected graphs on 8 nodes.
/// Tolerance 1e-9. The function under test is injectable for fault testing.
CheckResult check_closeness(int max_n = 7, int sample_n8 = 200, CentralityFn fn = nullptr);
CheckResult check_betweenness(int max_n = 7, int sample_n8 = 200, CentralityFn fn = nullptr);

/// ||A v - lambda v||_2 <= 1e-6 for eigenvector centrality over the same
/// connected suite.
CheckResult check_eigenvector_residual(int max_n = 7, int sample_n8 = 200);

/// Rank-based roc_auc vs pair counting on random score/label vectors
/// (including tied scores). Tolerance 1e-12.
CheckResult check_auc_paircount(int cases = 1000, std::uint64_t seed = 1);

/// Central finite differences (h = 1e-5) vs analytic gradients on random
/// small instances; max relative error <= 1e-4. Instances are redrawn when a
/// ReLU preactivation or sort-key gap sits within the differencing width.
CheckResult check_gradients(ModelKind kind, int cases = 10, std::uint64_t seed = 1);

/// Max relative gradient error for one instance (test hook).
double fd_gradient_max_rel_error(ModelKind kind, std::uint64_t seed);

std::vector<CheckResult> run_all_checks();

} // namespace nctefa::oracle
