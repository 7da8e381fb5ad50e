#include "listcomm/stability.hpp"

#include "listcomm/error.hpp"
#include "listcomm/io.hpp"
#include "listcomm/random.hpp"

#include <algorithm>
#include <numeric>

namespace listcomm {

namespace {

constexpr double kSaturation = 1e-9;

void check_members(std::span<const NodeId> community, std::size_t node_count) {
    if (community.size() < 2) throw DomainError("stability needs at least 2 members");
    for (NodeId v : community) {
        if (v >= node_count) throw DomainError("community member outside the matrix order");
    }
}

} // namespace

CohesionIndex::CohesionIndex(const ConsensusMatrix& matrix) : offsets_(matrix.node_count() + 1, 0) {
    const auto entries = matrix.entries();
    for (const auto& e : entries) {
        ++offsets_[e.a + 1];
        ++offsets_[e.b + 1];
    }
    for (std::size_t v = 0; v + 1 < offsets_.size(); ++v) offsets_[v + 1] += offsets_[v];
    targets_.resize(offsets_.back());
    values_.resize(offsets_.back());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : entries) {
        targets_[cursor[e.a]] = e.b;
        values_[cursor[e.a]++] = e.value;
        targets_[cursor[e.b]] = e.a;
        values_[cursor[e.b]++] = e.value;
    }
}

double CohesionIndex::pair_sum(std::span<const NodeId> members, std::vector<char>& scratch) const {
    for (NodeId v : members) scratch[v] = 1;
    double sum = 0.0;
    for (NodeId v : members) {
        for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i) {
            if (targets_[i] > v && scratch[targets_[i]]) sum += values_[i];
        }
    }
    for (NodeId v : members) scratch[v] = 0;
    return sum;
}

double raw_stability(std::span<const NodeId> community, const CohesionIndex& index) {
    check_members(community, index.node_count());
    std::vector<NodeId> unique(community.begin(), community.end());
    std::sort(unique.begin(), unique.end());
    if (std::adjacent_find(unique.begin(), unique.end()) != unique.end())
        throw DomainError("community has duplicate members");
    std::vector<char> scratch(index.node_count(), 0);
    const double c = static_cast<double>(unique.size());
    return index.pair_sum(unique, scratch) / (c * (c - 1.0) / 2.0);
}

double raw_stability(std::span<const NodeId> community, const ConsensusMatrix& matrix) {
    check_members(community, matrix.node_count());
    return raw_stability(community, CohesionIndex(matrix));
}

double expected_stability(std::size_t size, const CohesionIndex& index, std::uint32_t draws, std::uint64_t seed) {
    const std::size_t l = index.node_count();
    if (size < 2) throw DomainError("expected_stability: size must be >= 2");
    if (size > l) throw DomainError("expected_stability: size exceeds node count");
    if (draws < 1) throw DomainError("expected_stability: draws must be >= 1");

    Rng rng(seed);
    std::vector<NodeId> pool(l);
    std::iota(pool.begin(), pool.end(), NodeId{0});
    std::vector<char> scratch(l, 0);
    const double pairs = static_cast<double>(size) * static_cast<double>(size - 1) / 2.0;
    double total = 0.0;
    for (std::uint32_t d = 0; d < draws; ++d) {
        // Partial Fisher-Yates: pool[0, size) becomes the sample.
        for (std::size_t i = 0; i < size; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(l - i));
            std::swap(pool[i], pool[j]);
        }
        total += index.pair_sum(std::span<const NodeId>(pool.data(), size), scratch) / pairs;
    }
    return total / static_cast<double>(draws);
}

double expected_stability(std::size_t size, const ConsensusMatrix& matrix, std::uint32_t draws, std::uint64_t seed) {
    return expected_stability(size, CohesionIndex(matrix), draws, seed);
}

double chance_corrected(double raw, double expected) noexcept {
    if (expected >= 1.0 - kSaturation) return raw <= expected ? 0.0 : 1.0;
    return (raw - expected) / (1.0 - expected);
}

double ExpectedStabilityCache::operator()(std::size_t size) {
    auto it = cache_.find(size);
    if (it != cache_.end()) return it->second;
    const double value = expected_stability(size, index_, draws_, mix_seed(seed_, size));
    cache_.emplace(size, value);
    return value;
}

StabilityScore corrected_stability(std::span<const NodeId> community, const ConsensusMatrix& matrix,
                                   std::uint32_t draws, std::uint64_t seed) {
    check_members(community, matrix.node_count());
    const CohesionIndex index(matrix);
    ExpectedStabilityCache expected(index, draws, seed);
    StabilityScore s;
    s.raw = raw_stability(community, index);
    s.expected = expected(community.size());
    s.corrected = chance_corrected(s.raw, s.expected);
    s.randomized_runs = draws;
    return s;
}

std::vector<RankedCommunity> rank_communities(const CommunitySet& cs, const ConsensusMatrix& matrix,
                                              std::uint32_t draws, std::uint64_t seed) {
    const CohesionIndex index(matrix);
    ExpectedStabilityCache expected(index, draws, seed);
    std::vector<RankedCommunity> ranking;
    ranking.reserve(cs.size());
    for (std::uint32_t id = 0; id < cs.size(); ++id) {
        const auto& members = cs.communities[id];
        RankedCommunity rc;
        rc.community_id = id;
        rc.members = members;
        rc.score.raw = raw_stability(members, index);
        rc.score.expected = expected(members.size());
        rc.score.corrected = chance_corrected(rc.score.raw, rc.score.expected);
        rc.score.randomized_runs = draws;
        ranking.push_back(std::move(rc));
    }
    std::stable_sort(ranking.begin(), ranking.end(), [](const RankedCommunity& x, const RankedCommunity& y) {
        if (x.score.corrected != y.score.corrected) return x.score.corrected > y.score.corrected;
        if (x.members.size() != y.members.size()) return x.members.size() > y.members.size();
        return x.members < y.members;
    });
    return ranking;
}

std::string format_ranking(const std::vector<RankedCommunity>& ranking) {
    std::string out;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        const auto& r = ranking[i];
        out += std::to_string(i + 1) + '\t' + io::format_fixed(r.score.corrected, 2) + '\t' +
               io::format_fixed(r.score.raw, 6) + '\t' + io::format_fixed(r.score.expected, 6) + '\t' +
               std::to_string(r.members.size()) + '\t' + std::to_string(r.community_id) + '\n';
    }
    return out;
}

std::vector<RankingRow> parse_ranking(std::string_view tsv) {
    std::vector<RankingRow> rows;
    std::size_t line_no = 0;
    for (auto line : io::split_lines(tsv)) {
        ++line_no;
        if (line.empty()) continue;
        auto cols = io::split(line, '\t');
        if (cols.size() != 6) throw ParseError("stability", line_no, "expected 6 columns");
        RankingRow row;
        unsigned long long rank = 0, size = 0, id = 0;
        if (!io::parse_uint(cols[0], rank) || !io::parse_double(cols[1], row.corrected) ||
            !io::parse_double(cols[2], row.raw) || !io::parse_double(cols[3], row.expected) ||
            !io::parse_uint(cols[4], size) || !io::parse_uint(cols[5], id))
            throw ParseError("stability", line_no, "bad field");
        row.rank = static_cast<std::uint32_t>(rank);
        row.size = static_cast<std::size_t>(size);
        row.community_id = static_cast<std::uint32_t>(id);
        rows.push_back(row);
    }
    return rows;
}

} // namespace listcomm
