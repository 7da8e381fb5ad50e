#pragma once

#include "listcomm/graph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace listcomm {

// One overlapping cover of graph nodes. Canonical form: members ascending,
// no duplicate communities, ordered by size descending then lexicographically.
struct CommunitySet {
    std::vector<std::vector<NodeId>> communities;

    std::size_t size() const noexcept { return communities.size(); }
    bool empty() const noexcept { return communities.empty(); }
    bool operator==(const CommunitySet&) const = default;
};

void canonicalize(CommunitySet& cs);
CommunitySet filter_singletons(CommunitySet cs);

enum class DetectorMode { fast, thorough };

struct DetectorConfig {
    DetectorMode mode = DetectorMode::fast;
    std::uint32_t iterations = 5;
    double overlap_threshold = 0.3; // minimum label frequency retained in a node's memory
    std::uint64_t seed = 0;

    static DetectorConfig fast(std::uint64_t seed) { return {DetectorMode::fast, 5, 0.3, seed}; }
    static DetectorConfig thorough(std::uint64_t seed) { return {DetectorMode::thorough, 50, 0.3, seed}; }
};

void validate(const DetectorConfig& config);

// Pluggable stochastic overlapping detector. Implementations must be pure
// functions of (graph, config).
class CommunityDetector {
public:
    virtual ~CommunityDetector() = default;
    virtual CommunitySet detect(const Adjacency& graph, const DetectorConfig& config) const = 0;
};

// Speaker-listener label propagation. Every node starts with its own label in
// memory. Each iteration visits nodes in a seeded shuffle of the canonical
// order; each neighbor speaks one label drawn from its memory in proportion to
// frequency, spoken labels are weighted by edge weight, and the listener
// memorises the heaviest label (lowest id on ties). A node finally joins every
// label whose memory frequency reaches overlap_threshold, and always its most
// frequent label. A label retained by that node alone is dropped if the node
// retains a shared label too, and communities nested inside another are
// removed. Isolated nodes join nothing.
class LabelPropagationDetector final : public CommunityDetector {
public:
    CommunitySet detect(const Adjacency& graph, const DetectorConfig& config) const override;
};

// Runs the default detector.
CommunitySet detect(const Adjacency& graph, const DetectorConfig& config);

// JSON array of arrays of node names, in canonical order.
std::string format_communities(const CommunitySet& cs, const std::vector<std::string>& nodes);
CommunitySet parse_communities(std::string_view json, const std::vector<std::string>& nodes);

} // namespace listcomm
