#pragma once

#include "listcomm/basedetect.hpp"
#include "listcomm/graph.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace listcomm {

// |X ∩ Y| / |X ∪ Y| over sorted community-id sets; 0 when both are empty.
double label_jaccard(std::span<const std::uint32_t> labels_x, std::span<const std::uint32_t> labels_y);

struct MatrixEntry {
    NodeId a = 0; // a < b
    NodeId b = 0;
    double value = 0.0;

    bool operator==(const MatrixEntry&) const = default;
};

// Sparse pairwise co-assignment scores of one cover: every pair sharing at least
// one community with its label Jaccard, sorted by (a, b). Singleton
// communities are ignored.
std::vector<MatrixEntry> coassignment_scores(const CommunitySet& base, std::size_t node_count);

// Symmetric sparse matrix over graph nodes. Absent pairs are 0; no diagonal.
// Accumulates raw Jaccard sums until normalize() divides by the run count.
class ConsensusMatrix {
public:
    ConsensusMatrix() = default;
    explicit ConsensusMatrix(std::vector<std::string> order) : order_(std::move(order)) {}

    // Adds one singleton-filtered base cover. Throws DomainError for nodes
    // outside the order.
    void accumulate(const CommunitySet& base);
    // Adds precomputed per-run scores (see coassignment_scores) as one run.
    void add_run(std::span<const MatrixEntry> scores);
    // Divides by the run count and rounds to 1e-6, the export precision.
    void normalize();

    double at(NodeId a, NodeId b) const;
    std::vector<MatrixEntry> entries() const; // sorted by (a, b)
    std::size_t nonzeros() const noexcept { return values_.size(); }

    const std::vector<std::string>& order() const noexcept { return order_; }
    std::size_t node_count() const noexcept { return order_.size(); }
    std::uint32_t runs() const noexcept { return runs_; }
    bool normalized() const noexcept { return normalized_; }

    // Restores a normalized matrix from exported entries.
    static ConsensusMatrix from_entries(std::vector<std::string> order, std::uint32_t runs,
                                        std::span<const MatrixEntry> entries);

private:
    static std::uint64_t key(NodeId a, NodeId b) noexcept {
        return a < b ? (std::uint64_t{a} << 32) | b : (std::uint64_t{b} << 32) | a;
    }

    std::vector<std::string> order_;
    std::unordered_map<std::uint64_t, double> values_;
    std::uint32_t runs_ = 0;
    bool normalized_ = false;
};

struct EnsembleConfig {
    std::uint32_t runs = 100;
    double tau = 0.2;
    std::uint64_t master_seed = 0;
    DetectorConfig fast_config = DetectorConfig::fast(0);
    DetectorConfig thorough_config = DetectorConfig::thorough(0);
};

void validate(const EnsembleConfig& config);

// Seed of base run `index`; the thorough pass uses thorough_seed.
std::uint64_t run_seed(std::uint64_t master_seed, std::uint32_t index) noexcept;
std::uint64_t thorough_seed(std::uint64_t master_seed) noexcept;

// One fast base detection, singleton-filtered.
CommunitySet base_detection(const Adjacency& graph, const EnsembleConfig& config, std::uint32_t index,
                            const CommunityDetector& detector);

// Runs `config.runs` fast detections on up to `workers` threads and folds
// them in ascending run order, so the result is bitwise independent of the
// thread count. `on_run`, when set, sees each base cover in run order.
ConsensusMatrix run_ensemble(const WeightedGraph& graph, const EnsembleConfig& config, unsigned workers = 1,
                             const std::function<void(std::uint32_t, const CommunitySet&)>& on_run = {});
ConsensusMatrix run_ensemble(const WeightedGraph& graph, const EnsembleConfig& config, unsigned workers,
                             const CommunityDetector& detector,
                             const std::function<void(std::uint32_t, const CommunitySet&)>& on_run = {});

// Graph over the matrix order with an edge for every entry >= tau.
WeightedGraph consensus_graph(const ConsensusMatrix& matrix, double tau);

// Thorough detection on consensus_graph(matrix, tau), singletons removed.
CommunitySet consensus_communities(const ConsensusMatrix& matrix, const EnsembleConfig& config);
CommunitySet consensus_communities(const ConsensusMatrix& matrix, const EnsembleConfig& config,
                                   const CommunityDetector& detector);

// Repeats the ensemble on the previous round's consensus graph until the
// consensus communities stop changing or max_rounds ensembles have run, and
// returns the last matrix. Round i > 0 uses master seed mix_seed(master, i).
ConsensusMatrix iterate_ensemble(const WeightedGraph& graph, const EnsembleConfig& config, unsigned workers,
                                 std::uint32_t max_rounds = 10);

// Symmetric best-match Jaccard agreement between two covers: the mean over
// both directions of each community's best Jaccard in the other cover.
// 1 for identical covers; 0 if exactly one is empty; 1 if both are.
double cover_agreement(const CommunitySet& x, const CommunitySet& y);

// TSV `a<TAB>b<TAB>score` (6 decimals, lexicographic pair order) after a
// `#r=<runs>` header line.
std::string format_consensus(const ConsensusMatrix& matrix);
ConsensusMatrix parse_consensus(std::string_view tsv, std::vector<std::string> order);

} // namespace listcomm
