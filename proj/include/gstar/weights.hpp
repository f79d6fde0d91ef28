#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gstar/common.hpp"

namespace gstar {

/// Undirected location adjacency graph. The location order fixes matrix
/// row/column indices everywhere downstream.
class AdjacencyGraph {
  public:
    AdjacencyGraph() = default;
    AdjacencyGraph(std::vector<std::string> locations,
                   std::vector<std::pair<std::string, std::string>> edges);

    int size() const { return static_cast<int>(locations_.size()); }
    const std::vector<std::string>& locations() const { return locations_; }
    const std::vector<std::pair<int, int>>& edge_indices() const { return edges_; }
    int index_of(const std::string& id) const;

    /// FNV-1a hash of the canonical (sorted) location and edge lists.
    std::uint64_t fingerprint() const;

    /// Subgraph on `keep` (in the given order) with the surviving edges.
    AdjacencyGraph induced_subgraph(const std::vector<std::string>& keep) const;

    /// Parses the edge-list format: one `locA,locB` edge per line, `#`
    /// comments, optional `locations:` header listing isolated locations.
    static AdjacencyGraph from_stream(std::istream& in);
    static AdjacencyGraph from_file(const std::string& path);

  private:
    std::vector<std::string> locations_;          // sorted, unique
    std::vector<std::pair<int, int>> edges_;      // index pairs, first < second
};

/// The ordered family of k x k row-normalized weight matrices
/// W^(0) .. W^(eta-1); W^(0) is the identity.
struct NeighborhoodWeights {
    int eta = 0;
    int k = 0;
    std::vector<Eigen::MatrixXd> mats;

    const Eigen::MatrixXd& level(int l) const { return mats.at(static_cast<size_t>(l)); }
};

/// All-pairs shortest-path hop counts via BFS, capped at max_level + 1
/// (the cap value doubles as the "farther or disconnected" sentinel).
Eigen::MatrixXi graph_distances(const AdjacencyGraph& graph, int max_level);

/// Binary level-l neighbor indicators, row-normalized. Rows with no level-l
/// neighbor stay all-zero.
NeighborhoodWeights build_weights(const AdjacencyGraph& graph, int eta);

}  // namespace gstar
