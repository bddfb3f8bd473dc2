#include "nctefa/graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nctefa/errors.hpp"
#include "nctefa/json_io.hpp"

namespace nctefa {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
    if (n < 1) throw DataError("graph must have at least one node");
    for (auto& [u, v] : edges) {
        if (u == v) throw DataError("self-loop on node " + std::to_string(u));
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw DataError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                            ") out of range for n=" + std::to_string(n));
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw DataError("duplicate edge");
    edges_ = std::move(edges);
    adj_.assign(static_cast<std::size_t>(n), {});
    for (const auto& [u, v] : edges_) {
        adj_[static_cast<std::size_t>(u)].push_back(v);
        adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

Matrix Graph::dense_adjacency() const {
    const auto n = static_cast<std::size_t>(n_);
    Matrix a(n, n);
    for (const auto& [u, v] : edges_) {
        a(static_cast<std::size_t>(u), static_cast<std::size_t>(v)) = 1.0;
        a(static_cast<std::size_t>(v), static_cast<std::size_t>(u)) = 1.0;
    }
    return a;
}

long GraphDataset::find(const std::string& id) const {
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].id == id) return static_cast<long>(i);
    return -1;
}

bool GraphDataset::labeled() const {
    for (const auto& e : entries)
        if (e.label != 0 && e.label != 1) return false;
    return !entries.empty();
}

GraphDataset load_edge_list_json(const std::string& path) {
    const nlohmann::json doc = read_json_file(path);
    if (!doc.is_object()) throw DataError(path + ": top level must be an object of graph-id keys");

    GraphDataset ds;
    // nlohmann objects iterate in sorted key order, which gives the required
    // id ordering independent of file key order.
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& gid = it.key();
        const nlohmann::json& arr = it.value();
        if (!arr.is_array())
            throw DataError("graph \"" + gid + "\": edge list must be an array of [u,v] pairs");
        std::set<std::pair<int, int>> dedup;
        int max_id = -1;
        std::set<int> seen;
        for (const auto& pair : arr) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
                !pair[1].is_number_integer())
                throw DataError("graph \"" + gid + "\": each edge must be a [u,v] integer pair");
            long long u = pair[0].get<long long>();
            long long v = pair[1].get<long long>();
            if (u < 0 || v < 0) throw DataError("graph \"" + gid + "\": negative node id");
            if (u == v)
                throw DataError("graph \"" + gid + "\": self-loop on node " + std::to_string(u));
            int a = static_cast<int>(std::min(u, v));
            int b = static_cast<int>(std::max(u, v));
            dedup.insert({a, b});
            seen.insert(a);
            seen.insert(b);
            max_id = std::max(max_id, b);
        }
        if (max_id < 0) throw DataError("graph \"" + gid + "\": empty edge list (no nodes)");
        // ids must be 0..max contiguous; a gap would silently desynchronize
        // node features from labels downstream.
        for (int i = 0; i <= max_id; ++i)
            if (!seen.count(i))
                throw DataError("graph \"" + gid + "\": node id " + std::to_string(i) +
                                " never referenced (ids must be contiguous)");
        std::vector<std::pair<int, int>> edges(dedup.begin(), dedup.end());
        ds.entries.push_back({gid, Graph(max_id + 1, std::move(edges)), -1});
    }
    return ds;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // strip surrounding whitespace and CR
        std::size_t b = cell.find_first_not_of(" \t\r");
        std::size_t e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

} // namespace

GraphDataset load_targets_csv(const std::string& path, const GraphDataset& ds) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open: " + path);
    std::string line;
    if (!std::getline(f, line)) throw DataError(path + ": empty CSV");
    const auto header = split_csv_line(line);
    long id_col = -1, target_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "id") id_col = static_cast<long>(i);
        if (header[i] == "target") target_col = static_cast<long>(i);
    }
    if (id_col < 0 || target_col < 0)
        throw DataError(path + ": header must contain `id` and `target` columns");

    std::map<std::string, int> labels;
    while (std::getline(f, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() <= static_cast<std::size_t>(std::max(id_col, target_col)))
            throw DataError(path + ": short row: " + line);
        const std::string& id = cells[static_cast<std::size_t>(id_col)];
        const std::string& t = cells[static_cast<std::size_t>(target_col)];
        if (t != "0" && t != "1")
            throw DataError(path + ": non-binary target \"" + t + "\" for id \"" + id + "\"");
        if (!labels.emplace(id, t == "1" ? 1 : 0).second)
            throw DataError(path + ": duplicate id \"" + id + "\"");
    }

    GraphDataset out = ds;
    for (auto& e : out.entries) {
        auto it = labels.find(e.id);
        if (it == labels.end())
            throw DataError("no target row for graph \"" + e.id + "\"");
        e.label = it->second;
        labels.erase(it);
    }
    if (!labels.empty())
        throw DataError("target row for unknown graph \"" + labels.begin()->first + "\"");
    std::sort(out.entries.begin(), out.entries.end(),
              [](const DatasetEntry& a, const DatasetEntry& b) { return a.id < b.id; });
    return out;
}

void save_edge_list_json(const GraphDataset& ds, const std::string& path) {
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& e : ds.entries) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [u, v] : e.graph.edges()) arr.push_back({u, v});
        doc[e.id] = std::move(arr);
    }
    write_json_file(doc, path);
}

void save_targets_csv(const GraphDataset& ds, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for writing: " + path);
    f << "id,target\n";
    for (const auto& e : ds.entries) f << e.id << "," << e.label << "\n";
    if (!f) throw DataError("write failed: " + path);
}

std::vector<int> degree_vector(const Graph& g) {
    std::vector<int> deg(static_cast<std::size_t>(g.node_count()));
    for (int v = 0; v < g.node_count(); ++v) deg[static_cast<std::size_t>(v)] = g.degree(v);
    return deg;
}

} // namespace nctefa
