#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nctefa/matrix.hpp"

namespace nctefa {

/// Undirected simple graph with contiguous node ids 0..n-1.
/// Immutable after construction; safe to share across threads.
class Graph {
public:
    /// Validates and normalizes: pairs are stored as (min, max), sorted,
    /// deduplicated. Throws DataError on self-loops, out-of-range ids or
    /// duplicate edges (after orientation normalization the loader is
    /// expected to have collapsed duplicates already).
    Graph(int n, std::vector<std::pair<int, int>> edges);

    /// Single node, no edges.
    static Graph singleton() { return Graph(1, {}); }

    int node_count() const { return n_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    std::size_t edge_count() const { return edges_.size(); }

    /// Dense symmetric 0/1 adjacency with zero diagonal.
    Matrix dense_adjacency() const;

private:
    int n_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
};

struct DatasetEntry {
    std::string id;
    Graph graph;
    int label = -1; // -1 until targets are joined
};

/// Ordered collection of graphs; entries are kept sorted by id so that
/// loading is insensitive to file key order.
struct GraphDataset {
    std::vector<DatasetEntry> entries;

    std::size_t size() const { return entries.size(); }
    /// Index of the entry with the given id, or -1.
    long find(const std::string& id) const;
    bool labeled() const;
};

/// Per-graph node feature matrix (rows = nodes, cols = feature dimensions).
struct FeatureMatrix {
    std::string graph_id;
    Matrix values;
    std::vector<std::string> feature_names;
};

/// Loads `{"<graph_id>": [[u,v], ...], ...}`. Node count is 1 + max id
/// referenced; ids must be contiguous (a gap means the file desynchronized
/// from its labels, so it is rejected rather than compacted).
GraphDataset load_edge_list_json(const std::string& path);

/// Joins `id,target` CSV labels onto a loaded dataset. Every id must appear
/// on both sides exactly once; targets must be 0 or 1.
GraphDataset load_targets_csv(const std::string& path, const GraphDataset& ds);

void save_edge_list_json(const GraphDataset& ds, const std::string& path);
void save_targets_csv(const GraphDataset& ds, const std::string& path);

/// Entry i = degree of node i; the sum equals twice the edge count.
std::vector<int> degree_vector(const Graph& g);

} // namespace nctefa
