#pragma once

#include "listcomm/corpus.hpp"
#include "listcomm/graph.hpp"

#include <filesystem>
#include <string>

namespace listcomm {

// Lists as nodes, LPV of member overlap as edge weight.
using ListGraph = WeightedGraph;

struct GraphBuildConfig {
    double rho = 6.0; // minimum LPV kept, in log10 units
};

// Candidate pairs come only from lists sharing a user, so the cost is
// sum over users of (lists per user)^2. Pairs are split across `workers`
// threads by first endpoint; the output does not depend on the split.
// Weights are held at 1e-6 resolution, the precision of the TSV export.
ListGraph build_list_graph(const MembershipCorpus& corpus, const GraphBuildConfig& config,
                           unsigned workers = 1);

// Edge TSV `a<TAB>b<TAB>lpv` (6 decimals, lexicographic pair order) and a
// sidecar with one node id per line, which keeps isolated nodes.
std::string format_graph_edges(const ListGraph& graph);
std::string format_graph_nodes(const ListGraph& graph);
ListGraph parse_list_graph(std::string_view edges_tsv, std::string_view nodes_txt);

void write_list_graph(const ListGraph& graph, const std::filesystem::path& edges_path,
                      const std::filesystem::path& nodes_path);
ListGraph read_list_graph(const std::filesystem::path& edges_path, const std::filesystem::path& nodes_path);

} // namespace listcomm
