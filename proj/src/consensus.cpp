#include "listcomm/consensus.hpp"

#include "listcomm/error.hpp"
#include "listcomm/io.hpp"
#include "listcomm/random.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <thread>

namespace listcomm {

namespace {

double set_jaccard(std::span<const NodeId> x, std::span<const NodeId> y) {
    std::size_t i = 0, j = 0, common = 0;
    while (i < x.size() && j < y.size()) {
        if (x[i] < y[j]) {
            ++i;
        } else if (y[j] < x[i]) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    const std::size_t uni = x.size() + y.size() - common;
    return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

double directed_agreement(const CommunitySet& from, const CommunitySet& to) {
    double total = 0.0;
    for (const auto& c : from.communities) {
        double best = 0.0;
        for (const auto& d : to.communities) best = std::max(best, set_jaccard(c, d));
        total += best;
    }
    return total / static_cast<double>(from.size());
}

} // namespace

double label_jaccard(std::span<const std::uint32_t> labels_x, std::span<const std::uint32_t> labels_y) {
    return set_jaccard(labels_x, labels_y);
}

std::vector<MatrixEntry> coassignment_scores(const CommunitySet& base, std::size_t node_count) {
    std::vector<std::vector<std::uint32_t>> labels(node_count);
    for (std::uint32_t c = 0; c < base.communities.size(); ++c) {
        if (base.communities[c].size() < 2) continue;
        for (NodeId v : base.communities[c]) {
            if (v >= node_count) throw DomainError("community member outside the matrix order");
            labels[v].push_back(c);
        }
    }

    std::vector<MatrixEntry> out;
    std::vector<std::uint32_t> shared(node_count, 0);
    std::vector<NodeId> touched;
    for (NodeId a = 0; a < node_count; ++a) {
        if (labels[a].empty()) continue;
        touched.clear();
        for (std::uint32_t c : labels[a]) {
            for (NodeId b : base.communities[c]) {
                if (b <= a) continue;
                if (shared[b]++ == 0) touched.push_back(b);
            }
        }
        std::sort(touched.begin(), touched.end());
        const std::size_t la = labels[a].size();
        for (NodeId b : touched) {
            const std::size_t common = shared[b];
            shared[b] = 0;
            const std::size_t uni = la + labels[b].size() - common;
            out.push_back({a, b, static_cast<double>(common) / static_cast<double>(uni)});
        }
    }
    return out;
}

void ConsensusMatrix::accumulate(const CommunitySet& base) {
    const auto scores = coassignment_scores(base, order_.size());
    add_run(scores);
}

void ConsensusMatrix::add_run(std::span<const MatrixEntry> scores) {
    if (normalized_) throw std::logic_error("ConsensusMatrix: accumulate after normalize");
    for (const auto& e : scores) {
        if (e.a >= order_.size() || e.b >= order_.size() || e.a == e.b)
            throw DomainError("consensus entry outside the matrix order");
        values_[key(e.a, e.b)] += e.value;
    }
    ++runs_;
}

void ConsensusMatrix::normalize() {
    if (normalized_) return;
    if (runs_ == 0) throw std::logic_error("ConsensusMatrix: normalize with zero runs");
    const double r = static_cast<double>(runs_);
    for (auto it = values_.begin(); it != values_.end();) {
        it->second = io::quantize6(it->second / r);
        if (it->second <= 0.0) {
            it = values_.erase(it);
        } else {
            ++it;
        }
    }
    normalized_ = true;
}

double ConsensusMatrix::at(NodeId a, NodeId b) const {
    if (a == b) return 0.0;
    auto it = values_.find(key(a, b));
    return it == values_.end() ? 0.0 : it->second;
}

std::vector<MatrixEntry> ConsensusMatrix::entries() const {
    std::vector<MatrixEntry> out;
    out.reserve(values_.size());
    for (const auto& [k, v] : values_) {
        out.push_back({static_cast<NodeId>(k >> 32), static_cast<NodeId>(k & 0xffffffffULL), v});
    }
    std::sort(out.begin(), out.end(),
              [](const MatrixEntry& x, const MatrixEntry& y) { return x.a != y.a ? x.a < y.a : x.b < y.b; });
    return out;
}

ConsensusMatrix ConsensusMatrix::from_entries(std::vector<std::string> order, std::uint32_t runs,
                                              std::span<const MatrixEntry> entries) {
    ConsensusMatrix m(std::move(order));
    for (const auto& e : entries) {
        if (e.a >= m.order_.size() || e.b >= m.order_.size() || e.a == e.b)
            throw DomainError("consensus entry outside the matrix order");
        if (!(e.value > 0.0 && e.value <= 1.0)) throw ValidationError("consensus entry outside (0, 1]");
        if (!m.values_.emplace(key(e.a, e.b), e.value).second) throw ValidationError("duplicate consensus pair");
    }
    m.runs_ = runs;
    m.normalized_ = true;
    return m;
}

void validate(const EnsembleConfig& config) {
    if (config.runs < 1) throw ValidationError("runs must be >= 1");
    if (!(config.tau >= 0.0 && config.tau <= 1.0)) throw ValidationError("tau must lie in [0, 1]");
    validate(config.fast_config);
    validate(config.thorough_config);
}

std::uint64_t run_seed(std::uint64_t master_seed, std::uint32_t index) noexcept {
    return mix_seed(master_seed, index);
}

std::uint64_t thorough_seed(std::uint64_t master_seed) noexcept {
    return mix_seed(~master_seed, 0x7f4a7c15ULL);
}

CommunitySet base_detection(const Adjacency& graph, const EnsembleConfig& config, std::uint32_t index,
                            const CommunityDetector& detector) {
    DetectorConfig fast = config.fast_config;
    fast.seed = run_seed(config.master_seed, index);
    return filter_singletons(detector.detect(graph, fast));
}

ConsensusMatrix run_ensemble(const WeightedGraph& graph, const EnsembleConfig& config, unsigned workers,
                             const CommunityDetector& detector,
                             const std::function<void(std::uint32_t, const CommunitySet&)>& on_run) {
    validate(config);
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    const Adjacency adj(graph);
    const std::size_t l = graph.nodes.size();
    ConsensusMatrix matrix(graph.nodes);

    struct RunResult {
        CommunitySet cover;
        std::vector<MatrixEntry> scores;
    };
    auto compute = [&](std::uint32_t index) {
        RunResult r;
        r.cover = base_detection(adj, config, index, detector);
        r.scores = coassignment_scores(r.cover, l);
        return r;
    };

    for (std::uint32_t first = 0; first < config.runs; first += workers) {
        const std::uint32_t batch = std::min<std::uint32_t>(workers, config.runs - first);
        std::vector<std::optional<RunResult>> results(batch);
        if (batch == 1) {
            results[0] = compute(first);
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(batch);
            for (std::uint32_t i = 0; i < batch; ++i)
                pool.emplace_back([&, i] { results[i] = compute(first + i); });
        }
        for (std::uint32_t i = 0; i < batch; ++i) {
            matrix.add_run(results[i]->scores);
            if (on_run) on_run(first + i, results[i]->cover);
        }
    }
    matrix.normalize();
    return matrix;
}

ConsensusMatrix run_ensemble(const WeightedGraph& graph, const EnsembleConfig& config, unsigned workers,
                             const std::function<void(std::uint32_t, const CommunitySet&)>& on_run) {
    return run_ensemble(graph, config, workers, LabelPropagationDetector{}, on_run);
}

WeightedGraph consensus_graph(const ConsensusMatrix& matrix, double tau) {
    WeightedGraph g;
    g.nodes = matrix.order();
    for (const auto& e : matrix.entries()) {
        if (e.value >= tau) g.edges.push_back({e.a, e.b, e.value});
    }
    return g;
}

CommunitySet consensus_communities(const ConsensusMatrix& matrix, const EnsembleConfig& config,
                                   const CommunityDetector& detector) {
    validate(config);
    const Adjacency adj(consensus_graph(matrix, config.tau));
    DetectorConfig thorough = config.thorough_config;
    thorough.seed = thorough_seed(config.master_seed);
    return filter_singletons(detector.detect(adj, thorough));
}

CommunitySet consensus_communities(const ConsensusMatrix& matrix, const EnsembleConfig& config) {
    return consensus_communities(matrix, config, LabelPropagationDetector{});
}

ConsensusMatrix iterate_ensemble(const WeightedGraph& graph, const EnsembleConfig& config, unsigned workers,
                                 std::uint32_t max_rounds) {
    ConsensusMatrix matrix = run_ensemble(graph, config, workers);
    CommunitySet current = consensus_communities(matrix, config);
    for (std::uint32_t round = 1; round < max_rounds; ++round) {
        EnsembleConfig next = config;
        next.master_seed = mix_seed(config.master_seed, round);
        ConsensusMatrix updated = run_ensemble(consensus_graph(matrix, config.tau), next, workers);
        // The consensus pass always uses the caller's master seed so the
        // returned matrix reproduces the same communities downstream.
        CommunitySet communities = consensus_communities(updated, config);
        matrix = std::move(updated);
        if (communities == current) break;
        current = std::move(communities);
    }
    return matrix;
}

double cover_agreement(const CommunitySet& x, const CommunitySet& y) {
    if (x.empty() && y.empty()) return 1.0;
    if (x.empty() || y.empty()) return 0.0;
    return 0.5 * (directed_agreement(x, y) + directed_agreement(y, x));
}

std::string format_consensus(const ConsensusMatrix& matrix) {
    std::string out = "#r=" + std::to_string(matrix.runs()) + "\n";
    const auto& order = matrix.order();
    for (const auto& e : matrix.entries()) {
        out += order[e.a];
        out += '\t';
        out += order[e.b];
        out += '\t';
        out += io::format_fixed(e.value, 6);
        out += '\n';
    }
    return out;
}

ConsensusMatrix parse_consensus(std::string_view tsv, std::vector<std::string> order) {
    const auto lines = io::split_lines(tsv);
    if (lines.empty() || !lines[0].starts_with("#r="))
        throw ParseError("consensus", 1, "missing #r=<runs> header");
    unsigned long long runs = 0;
    if (!io::parse_uint(lines[0].substr(3), runs) || runs == 0 || runs > 0xffffffffULL)
        throw ParseError("consensus", 1, "bad run count");
    std::vector<MatrixEntry> entries;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto cols = io::split(lines[i], '\t');
        if (cols.size() != 3) throw ParseError("consensus", i + 1, "expected 3 columns");
        const auto a = find_node(order, std::string(cols[0]));
        const auto b = find_node(order, std::string(cols[1]));
        if (a < 0 || b < 0) throw ValidationError("consensus line " + std::to_string(i + 1) + ": unknown node");
        double v = 0.0;
        if (!io::parse_double(cols[2], v)) throw ParseError("consensus", i + 1, "bad score");
        entries.push_back({static_cast<NodeId>(std::min(a, b)), static_cast<NodeId>(std::max(a, b)), v});
    }
    return ConsensusMatrix::from_entries(std::move(order), static_cast<std::uint32_t>(runs), entries);
}

} // namespace listcomm
