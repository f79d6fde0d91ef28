#include "gstar/weights.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

namespace gstar {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

AdjacencyGraph::AdjacencyGraph(std::vector<std::string> locations,
                               std::vector<std::pair<std::string, std::string>> edges) {
    std::set<std::string> universe(locations.begin(), locations.end());
    if (universe.size() != locations.size())
        throw InvalidArgument("duplicate location id in adjacency graph");
    for (const auto& [a, b] : edges) {
        if (a == b) throw InvalidArgument("self-loop on location '" + a + "'");
        if (!universe.count(a) || !universe.count(b))
            throw InvalidArgument("edge endpoint not in location list");
    }
    locations_ = std::move(locations);
    std::set<std::pair<int, int>> idx_edges;
    for (const auto& [a, b] : edges) {
        int ia = index_of(a), ib = index_of(b);
        idx_edges.insert({std::min(ia, ib), std::max(ia, ib)});
    }
    edges_.assign(idx_edges.begin(), idx_edges.end());
}

int AdjacencyGraph::index_of(const std::string& id) const {
    auto it = std::find(locations_.begin(), locations_.end(), id);
    if (it == locations_.end())
        throw InvalidArgument("unknown location id '" + id + "'");
    return static_cast<int>(it - locations_.begin());
}

std::uint64_t AdjacencyGraph::fingerprint() const {
    // FNV-1a over a canonical textual rendering
    std::uint64_t h = 14695981039346656037ULL;
    auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        h ^= 0xFF;
        h *= 1099511628211ULL;
    };
    std::vector<std::string> sorted_locs = locations_;
    std::sort(sorted_locs.begin(), sorted_locs.end());
    for (const auto& id : sorted_locs) mix(id);
    std::vector<std::pair<std::string, std::string>> named;
    for (auto [i, j] : edges_) {
        std::string a = locations_[static_cast<size_t>(i)];
        std::string b = locations_[static_cast<size_t>(j)];
        if (b < a) std::swap(a, b);
        named.emplace_back(a, b);
    }
    std::sort(named.begin(), named.end());
    for (const auto& [a, b] : named) {
        mix(a);
        mix(b);
    }
    return h;
}

AdjacencyGraph AdjacencyGraph::induced_subgraph(
    const std::vector<std::string>& keep) const {
    std::set<std::string> keep_set(keep.begin(), keep.end());
    std::vector<std::pair<std::string, std::string>> edges;
    for (auto [i, j] : edges_) {
        const auto& a = locations_[static_cast<size_t>(i)];
        const auto& b = locations_[static_cast<size_t>(j)];
        if (keep_set.count(a) && keep_set.count(b)) edges.emplace_back(a, b);
    }
    return AdjacencyGraph(keep, std::move(edges));
}

AdjacencyGraph AdjacencyGraph::from_stream(std::istream& in) {
    std::set<std::string> universe;
    std::vector<std::pair<std::string, std::string>> edges;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.rfind("locations:", 0) == 0) {
            std::stringstream ss(t.substr(10));
            std::string id;
            while (std::getline(ss, id, ',')) {
                id = trim(id);
                if (!id.empty()) universe.insert(id);
            }
            continue;
        }
        auto comma = t.find(',');
        if (comma == std::string::npos)
            throw ParseError("adjacency line " + std::to_string(lineno) +
                             ": expected 'locA,locB'");
        std::string a = trim(t.substr(0, comma));
        std::string b = trim(t.substr(comma + 1));
        if (a.empty() || b.empty())
            throw ParseError("adjacency line " + std::to_string(lineno) +
                             ": empty location id");
        universe.insert(a);
        universe.insert(b);
        edges.emplace_back(a, b);
    }
    std::vector<std::string> locs(universe.begin(), universe.end());
    return AdjacencyGraph(std::move(locs), std::move(edges));
}

AdjacencyGraph AdjacencyGraph::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open adjacency file '" + path + "'");
    return from_stream(in);
}

Eigen::MatrixXi graph_distances(const AdjacencyGraph& graph, int max_level) {
    if (max_level < 1) throw InvalidArgument("max_level must be >= 1");
    const int k = graph.size();
    const int sentinel = max_level + 1;
    std::vector<std::vector<int>> adj(static_cast<size_t>(k));
    for (auto [i, j] : graph.edge_indices()) {
        adj[static_cast<size_t>(i)].push_back(j);
        adj[static_cast<size_t>(j)].push_back(i);
    }
    Eigen::MatrixXi dist = Eigen::MatrixXi::Constant(k, k, sentinel);
    for (int s = 0; s < k; ++s) {
        dist(s, s) = 0;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            if (dist(s, u) >= max_level) continue;
            for (int v : adj[static_cast<size_t>(u)]) {
                if (dist(s, v) == sentinel) {
                    dist(s, v) = dist(s, u) + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    return dist;
}

NeighborhoodWeights build_weights(const AdjacencyGraph& graph, int eta) {
    if (eta < 1) throw InvalidArgument("eta must be >= 1");
    const int k = graph.size();
    NeighborhoodWeights w;
    w.eta = eta;
    w.k = k;
    w.mats.reserve(static_cast<size_t>(eta));
    w.mats.push_back(Eigen::MatrixXd::Identity(k, k));
    if (eta == 1) return w;
    Eigen::MatrixXi dist = graph_distances(graph, eta - 1);
    for (int l = 1; l < eta; ++l) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i) {
            int count = 0;
            for (int j = 0; j < k; ++j)
                if (dist(i, j) == l) ++count;
            if (count == 0) continue;
            const double v = 1.0 / count;
            for (int j = 0; j < k; ++j)
                if (dist(i, j) == l) m(i, j) = v;
        }
        w.mats.push_back(std::move(m));
    }
    return w;
}

}  // namespace gstar
