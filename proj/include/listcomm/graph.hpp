#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace listcomm {

using NodeId = std::uint32_t;

struct WeightedEdge {
    NodeId a = 0; // a < b
    NodeId b = 0;
    double weight = 0.0;

    bool operator==(const WeightedEdge&) const = default;
};

// Undirected weighted graph over named nodes. Node names are sorted and unique,
// so node index order is the canonical (lexicographic) order. Edges are sorted
// by (a, b) with a < b and carry no duplicates.
struct WeightedGraph {
    std::vector<std::string> nodes;
    std::vector<WeightedEdge> edges;

    bool operator==(const WeightedGraph&) const = default;
};

// Compressed adjacency for traversal. Neighbors of each node are ascending.
class Adjacency {
public:
    Adjacency() = default;
    Adjacency(std::size_t node_count, std::span<const WeightedEdge> edges);
    explicit Adjacency(const WeightedGraph& graph) : Adjacency(graph.nodes.size(), graph.edges) {}

    std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
    std::span<const NodeId> neighbors(NodeId v) const noexcept {
        return {targets_.data() + offsets_[v], degree(v)};
    }
    std::span<const double> weights(NodeId v) const noexcept {
        return {weights_.data() + offsets_[v], degree(v)};
    }

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
    std::vector<double> weights_;
};

// Index of `name` in sorted `nodes`, or -1.
std::int64_t find_node(const std::vector<std::string>& nodes, const std::string& name);

} // namespace listcomm
