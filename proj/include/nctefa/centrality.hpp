#pragma once

#include <vector>

#include "nctefa/graph.hpp"

namespace nctefa {

/// Wasserman-Faust closeness: with R(v) the set reachable from v (v included),
/// r = |R(v)| and Sd the sum of BFS distances to R(v)\{v},
///   C(v) = ((r-1)/(n-1)) * ((r-1)/Sd)   for r > 1, else 0.
/// On connected graphs this reduces to (n-1)/Sd. Values lie in [0, 1].
std::vector<double> closeness(const Graph& g);

/// Brandes betweenness over unordered source-target pairs excluding
/// endpoints, normalized by (n-1)(n-2)/2 for n >= 3; all zeros for n <= 2.
std::vector<double> betweenness(const Graph& g);

/// Unit-L2, entrywise-nonnegative dominant eigenvector of the adjacency
/// matrix via shifted power iteration. An edgeless graph has no dominant
/// direction and is defined as the uniform vector 1/sqrt(n).
std::vector<double> eigenvector_centrality(const Graph& g);

} // namespace nctefa
