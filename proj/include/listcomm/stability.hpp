#pragma once

#include "listcomm/basedetect.hpp"
#include "listcomm/consensus.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace listcomm {

struct StabilityScore {
    double raw = 0.0;      // mean pairwise consensus score
    double expected = 0.0; // mean over random node sets of the same size
    double corrected = 0.0;
    std::uint32_t randomized_runs = 0;
};

// Row-compressed copy of a normalized consensus matrix for fast cohesion sums.
class CohesionIndex {
public:
    explicit CohesionIndex(const ConsensusMatrix& matrix);

    std::size_t node_count() const noexcept { return offsets_.size() - 1; }

    // Sum of scores over unordered pairs of `members` (distinct, < node_count).
    // `scratch` must hold node_count zero bytes and is returned zeroed.
    double pair_sum(std::span<const NodeId> members, std::vector<char>& scratch) const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
    std::vector<double> values_;
};

// Mean of M over all c(c-1)/2 pairs; absent entries count as 0.
// Throws DomainError for fewer than 2 members or members outside the order.
double raw_stability(std::span<const NodeId> community, const ConsensusMatrix& matrix);
double raw_stability(std::span<const NodeId> community, const CohesionIndex& index);

// Mean raw stability of `draws` uniformly random size-node subsets (without
// replacement within a draw). Deterministic in (matrix, size, draws, seed).
double expected_stability(std::size_t size, const ConsensusMatrix& matrix, std::uint32_t draws, std::uint64_t seed);
double expected_stability(std::size_t size, const CohesionIndex& index, std::uint32_t draws, std::uint64_t seed);

// (raw - expected) / (1 - expected). If expected >= 1 - 1e-9 the score is 0
// when raw <= expected and 1 otherwise.
double chance_corrected(double raw, double expected) noexcept;

// Expected stability memoised by community size; each size draws from its
// own stream mix_seed(seed, size), so results do not depend on query order.
class ExpectedStabilityCache {
public:
    ExpectedStabilityCache(const CohesionIndex& index, std::uint32_t draws, std::uint64_t seed)
        : index_(index), draws_(draws), seed_(seed) {}

    double operator()(std::size_t size);

private:
    const CohesionIndex& index_;
    std::uint32_t draws_;
    std::uint64_t seed_;
    std::map<std::size_t, double> cache_;
};

StabilityScore corrected_stability(std::span<const NodeId> community, const ConsensusMatrix& matrix,
                                   std::uint32_t draws, std::uint64_t seed);

struct RankedCommunity {
    std::uint32_t community_id = 0; // index in the ranked CommunitySet
    std::vector<NodeId> members;
    StabilityScore score;
};

// Sorted by corrected score descending; ties by size descending, then members
// lexicographically. Communities with fewer than 2 members are rejected.
std::vector<RankedCommunity> rank_communities(const CommunitySet& cs, const ConsensusMatrix& matrix,
                                              std::uint32_t draws, std::uint64_t seed);

// TSV `rank<TAB>corrected<TAB>raw<TAB>expected<TAB>size_lists<TAB>community_id`,
// corrected to 2 decimals, raw and expected to 6, rank from 1.
std::string format_ranking(const std::vector<RankedCommunity>& ranking);

struct RankingRow {
    std::uint32_t rank = 0;
    double corrected = 0.0;
    double raw = 0.0;
    double expected = 0.0;
    std::size_t size = 0;
    std::uint32_t community_id = 0;
};
std::vector<RankingRow> parse_ranking(std::string_view tsv);

} // namespace listcomm
