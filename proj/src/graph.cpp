#include "listcomm/graph.hpp"

#include <algorithm>

namespace listcomm {

Adjacency::Adjacency(std::size_t node_count, std::span<const WeightedEdge> edges)
    : offsets_(node_count + 1, 0), targets_(2 * edges.size()), weights_(2 * edges.size()) {
    for (const auto& e : edges) {
        ++offsets_[e.a + 1];
        ++offsets_[e.b + 1];
    }
    for (std::size_t v = 0; v < node_count; ++v) offsets_[v + 1] += offsets_[v];
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges) {
        targets_[cursor[e.a]] = e.b;
        weights_[cursor[e.a]++] = e.weight;
        targets_[cursor[e.b]] = e.a;
        weights_[cursor[e.b]++] = e.weight;
    }
    // Rows come out ascending when edges are sorted by (a, b); unsorted input is
    // repaired here.
    for (std::size_t v = 0; v < node_count; ++v) {
        const std::size_t begin = offsets_[v];
        const std::size_t end = offsets_[v + 1];
        bool sorted = std::is_sorted(targets_.begin() + static_cast<std::ptrdiff_t>(begin),
                                     targets_.begin() + static_cast<std::ptrdiff_t>(end));
        if (sorted) continue;
        std::vector<std::pair<NodeId, double>> row;
        row.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) row.emplace_back(targets_[i], weights_[i]);
        std::sort(row.begin(), row.end());
        for (std::size_t i = begin; i < end; ++i) {
            targets_[i] = row[i - begin].first;
            weights_[i] = row[i - begin].second;
        }
    }
}

std::int64_t find_node(const std::vector<std::string>& nodes, const std::string& name) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), name);
    if (it == nodes.end() || *it != name) return -1;
    return it - nodes.begin();
}

} // namespace listcomm
