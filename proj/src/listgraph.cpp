#include "listcomm/listgraph.hpp"

#include "listcomm/error.hpp"
#include "listcomm/hypergeom.hpp"
#include "listcomm/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <map>
#include <thread>
#include <tuple>

namespace listcomm {

namespace {

unsigned resolve_workers(unsigned workers) {
    if (workers != 0) return workers;
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace

ListGraph build_list_graph(const MembershipCorpus& corpus, const GraphBuildConfig& config, unsigned workers) {
    if (!(config.rho >= 0.0)) throw ValidationError("rho must be >= 0");

    ListGraph graph;
    graph.nodes.reserve(corpus.list_count());
    for (const auto& [id, rec] : corpus.lists()) graph.nodes.push_back(id);
    const std::size_t l = graph.nodes.size();

    // Dense integer views of both sides of the bipartite record.
    std::vector<std::vector<NodeId>> lists_of_user;
    lists_of_user.reserve(corpus.user_count());
    std::map<std::string, std::uint32_t> user_ids;
    for (const auto& [user, list_ids] : corpus.user_index()) {
        user_ids.emplace(user, static_cast<std::uint32_t>(lists_of_user.size()));
        auto& row = lists_of_user.emplace_back();
        row.reserve(list_ids.size());
        for (const auto& lid : list_ids) row.push_back(static_cast<NodeId>(find_node(graph.nodes, lid)));
    }
    std::vector<std::vector<std::uint32_t>> users_of_list(l);
    for (std::size_t a = 0; a < l; ++a) {
        for (const auto& user : corpus.members(graph.nodes[a])) users_of_list[a].push_back(user_ids.at(user));
    }

    const std::uint64_t n = corpus.user_count();
    const LogFactorialTable log_factorial(n);

    std::vector<std::vector<WeightedEdge>> rows(l);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        std::vector<std::uint32_t> shared(l, 0);
        std::vector<NodeId> touched;
        for (;;) {
            const std::size_t a = next.fetch_add(1, std::memory_order_relaxed);
            if (a >= l) return;
            touched.clear();
            for (auto u : users_of_list[a]) {
                for (NodeId b : lists_of_user[u]) {
                    if (b <= a) continue;
                    if (shared[b]++ == 0) touched.push_back(b);
                }
            }
            std::sort(touched.begin(), touched.end());
            auto& out = rows[a];
            const std::uint64_t size_a = users_of_list[a].size();
            for (NodeId b : touched) {
                const std::uint64_t k = shared[b];
                shared[b] = 0;
                const double lp = log_overlap_tail(size_a, users_of_list[b].size(), k, n, log_factorial);
                const double lpv = std::max(0.0, -lp / std::numbers::ln10);
                const double stored = io::quantize6(lpv);
                if (lpv >= config.rho && stored >= config.rho)
                    out.push_back({static_cast<NodeId>(a), b, stored});
            }
        }
    };

    const unsigned threads = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(std::max<std::size_t>(l, 1)));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    }

    std::size_t total = 0;
    for (const auto& row : rows) total += row.size();
    graph.edges.reserve(total);
    for (auto& row : rows) graph.edges.insert(graph.edges.end(), row.begin(), row.end());
    return graph;
}

std::string format_graph_edges(const ListGraph& graph) {
    std::string out;
    for (const auto& e : graph.edges) {
        out += graph.nodes[e.a];
        out += '\t';
        out += graph.nodes[e.b];
        out += '\t';
        out += io::format_fixed(e.weight, 6);
        out += '\n';
    }
    return out;
}

std::string format_graph_nodes(const ListGraph& graph) {
    std::string out;
    for (const auto& id : graph.nodes) {
        out += id;
        out += '\n';
    }
    return out;
}

ListGraph parse_list_graph(std::string_view edges_tsv, std::string_view nodes_txt) {
    ListGraph graph;
    std::size_t line_no = 0;
    for (auto line : io::split_lines(nodes_txt)) {
        ++line_no;
        if (line.empty()) continue;
        if (line.find('\t') != std::string_view::npos) throw ParseError("graph nodes", line_no, "tab in node id");
        graph.nodes.emplace_back(line);
    }
    std::sort(graph.nodes.begin(), graph.nodes.end());
    if (std::adjacent_find(graph.nodes.begin(), graph.nodes.end()) != graph.nodes.end())
        throw ValidationError("graph nodes: duplicate node id");

    line_no = 0;
    for (auto line : io::split_lines(edges_tsv)) {
        ++line_no;
        if (line.empty()) continue;
        auto cols = io::split(line, '\t');
        if (cols.size() != 3) throw ParseError("graph edges", line_no, "expected 3 columns");
        const auto a = find_node(graph.nodes, std::string(cols[0]));
        const auto b = find_node(graph.nodes, std::string(cols[1]));
        if (a < 0 || b < 0) throw ValidationError("graph edges line " + std::to_string(line_no) + ": unknown node");
        if (a == b) throw ValidationError("graph edges line " + std::to_string(line_no) + ": self-loop");
        double w = 0.0;
        if (!io::parse_double(cols[2], w) || w < 0.0) throw ParseError("graph edges", line_no, "bad weight");
        graph.edges.push_back({static_cast<NodeId>(std::min(a, b)), static_cast<NodeId>(std::max(a, b)), w});
    }
    std::sort(graph.edges.begin(), graph.edges.end(),
              [](const WeightedEdge& x, const WeightedEdge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
    auto dup = std::adjacent_find(graph.edges.begin(), graph.edges.end(),
                                  [](const WeightedEdge& x, const WeightedEdge& y) { return x.a == y.a && x.b == y.b; });
    if (dup != graph.edges.end()) throw ValidationError("graph edges: duplicate pair");
    return graph;
}

void write_list_graph(const ListGraph& graph, const std::filesystem::path& edges_path,
                      const std::filesystem::path& nodes_path) {
    io::write_file(edges_path, format_graph_edges(graph));
    io::write_file(nodes_path, format_graph_nodes(graph));
}

ListGraph read_list_graph(const std::filesystem::path& edges_path, const std::filesystem::path& nodes_path) {
    return parse_list_graph(io::read_file(edges_path), io::read_file(nodes_path));
}

} // namespace listcomm
