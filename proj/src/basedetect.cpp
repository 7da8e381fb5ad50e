#include "listcomm/basedetect.hpp"

#include "listcomm/error.hpp"
#include "listcomm/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <numeric>

namespace listcomm {

namespace {

struct LabelCount {
    NodeId label;
    std::uint32_t count;
};

bool canonical_less(const std::vector<NodeId>& x, const std::vector<NodeId>& y) {
    if (x.size() != y.size()) return x.size() > y.size();
    return x < y;
}

// Drops every community contained in another one. Expects canonical order,
// so any superset comes earlier.
void remove_nested(CommunitySet& cs, std::size_t node_count) {
    std::vector<std::vector<std::uint32_t>> containing(node_count);
    std::vector<char> keep(cs.communities.size(), 1);
    for (std::uint32_t i = 0; i < cs.communities.size(); ++i) {
        const auto& c = cs.communities[i];
        for (std::uint32_t j : containing[c.front()]) {
            const auto& big = cs.communities[j];
            if (std::includes(big.begin(), big.end(), c.begin(), c.end())) {
                keep[i] = 0;
                break;
            }
        }
        if (keep[i]) {
            for (NodeId v : c) containing[v].push_back(i);
        }
    }
    std::size_t out = 0;
    for (std::size_t i = 0; i < cs.communities.size(); ++i) {
        if (!keep[i]) continue;
        if (out != i) cs.communities[out] = std::move(cs.communities[i]);
        ++out;
    }
    cs.communities.resize(out);
}

} // namespace

void canonicalize(CommunitySet& cs) {
    for (auto& c : cs.communities) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    std::erase_if(cs.communities, [](const auto& c) { return c.empty(); });
    std::sort(cs.communities.begin(), cs.communities.end(), canonical_less);
    cs.communities.erase(std::unique(cs.communities.begin(), cs.communities.end()), cs.communities.end());
}

CommunitySet filter_singletons(CommunitySet cs) {
    std::erase_if(cs.communities, [](const auto& c) { return c.size() <= 1; });
    canonicalize(cs);
    return cs;
}

void validate(const DetectorConfig& config) {
    if (config.iterations < 1) throw ValidationError("detector iterations must be >= 1");
    if (!(config.overlap_threshold > 0.0 && config.overlap_threshold < 1.0))
        throw ValidationError("overlap_threshold must lie in (0, 1)");
}

CommunitySet LabelPropagationDetector::detect(const Adjacency& graph, const DetectorConfig& config) const {
    validate(config);
    const std::size_t l = graph.node_count();
    Rng rng(config.seed);

    std::vector<std::vector<LabelCount>> memory(l);
    std::vector<std::uint32_t> total(l, 1);
    for (std::size_t v = 0; v < l; ++v) memory[v].push_back({static_cast<NodeId>(v), 1});

    std::vector<NodeId> order;
    order.reserve(l);
    for (std::size_t v = 0; v < l; ++v) {
        if (graph.degree(static_cast<NodeId>(v)) > 0) order.push_back(static_cast<NodeId>(v));
    }

    std::vector<double> heard(l, 0.0);
    std::vector<char> was_heard(l, 0);
    std::vector<NodeId> heard_labels;

    for (std::uint32_t it = 0; it < config.iterations; ++it) {
        rng.shuffle(std::span<NodeId>(order));
        for (NodeId listener : order) {
            heard_labels.clear();
            const auto nbrs = graph.neighbors(listener);
            const auto wts = graph.weights(listener);
            for (std::size_t i = 0; i < nbrs.size(); ++i) {
                const NodeId speaker = nbrs[i];
                auto pick = static_cast<std::uint32_t>(rng.below(total[speaker]));
                NodeId spoken = memory[speaker].back().label;
                for (const auto& lc : memory[speaker]) {
                    if (pick < lc.count) {
                        spoken = lc.label;
                        break;
                    }
                    pick -= lc.count;
                }
                if (!was_heard[spoken]) {
                    was_heard[spoken] = 1;
                    heard_labels.push_back(spoken);
                }
                heard[spoken] += wts[i];
            }
            NodeId best = 0;
            double best_weight = -1.0;
            for (NodeId label : heard_labels) {
                const double w = heard[label];
                if (w > best_weight || (w == best_weight && label < best)) {
                    best = label;
                    best_weight = w;
                }
                heard[label] = 0.0;
                was_heard[label] = 0;
            }
            if (heard_labels.empty()) continue;
            auto& mem = memory[listener];
            auto hit = std::find_if(mem.begin(), mem.end(), [&](const LabelCount& lc) { return lc.label == best; });
            if (hit != mem.end()) {
                ++hit->count;
            } else {
                mem.push_back({best, 1});
            }
            ++total[listener];
        }
    }

    std::vector<std::vector<NodeId>> retained(l);
    std::vector<std::uint32_t> holders(l, 0);
    for (NodeId v : order) {
        const auto& mem = memory[v];
        const LabelCount* top = &mem.front();
        for (const auto& lc : mem) {
            if (lc.count > top->count || (lc.count == top->count && lc.label < top->label)) top = &lc;
        }
        const double denom = static_cast<double>(total[v]);
        for (const auto& lc : mem) {
            if (&lc == top || static_cast<double>(lc.count) / denom >= config.overlap_threshold) {
                retained[v].push_back(lc.label);
                ++holders[lc.label];
            }
        }
    }

    // A label held by one node alone is dropped when that node holds a shared
    // label as well.
    std::map<NodeId, std::vector<NodeId>> by_label;
    for (NodeId v : order) {
        const bool has_shared =
            std::any_of(retained[v].begin(), retained[v].end(), [&](NodeId label) { return holders[label] > 1; });
        for (NodeId label : retained[v]) {
            if (has_shared && holders[label] == 1) continue;
            by_label[label].push_back(v);
        }
    }

    CommunitySet cs;
    cs.communities.reserve(by_label.size());
    for (auto& [label, members] : by_label) cs.communities.push_back(std::move(members));
    canonicalize(cs);
    remove_nested(cs, l);
    return cs;
}

CommunitySet detect(const Adjacency& graph, const DetectorConfig& config) {
    return LabelPropagationDetector{}.detect(graph, config);
}

std::string format_communities(const CommunitySet& cs, const std::vector<std::string>& nodes) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cs.communities) {
        nlohmann::json members = nlohmann::json::array();
        for (NodeId v : c) members.push_back(nodes.at(v));
        arr.push_back(std::move(members));
    }
    return arr.dump() + "\n";
}

CommunitySet parse_communities(std::string_view json, const std::vector<std::string>& nodes) {
    nlohmann::json arr;
    try {
        arr = nlohmann::json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("communities: ") + e.what());
    }
    if (!arr.is_array()) throw ParseError("communities: expected a JSON array");
    CommunitySet cs;
    for (const auto& item : arr) {
        if (!item.is_array()) throw ParseError("communities: expected arrays of node ids");
        auto& c = cs.communities.emplace_back();
        for (const auto& id : item) {
            if (!id.is_string()) throw ParseError("communities: node ids must be strings");
            const auto idx = find_node(nodes, id.get<std::string>());
            if (idx < 0) throw ValidationError("communities: unknown node " + id.get<std::string>());
            c.push_back(static_cast<NodeId>(idx));
        }
    }
    canonicalize(cs);
    return cs;
}

} // namespace listcomm
