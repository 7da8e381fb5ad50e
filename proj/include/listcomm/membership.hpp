#pragma once

#include "listcomm/corpus.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace listcomm {

struct MemberWeight {
    std::string user;
    double weight = 0.0;

    bool operator==(const MemberWeight&) const = default;
};

struct UserCommunity {
    std::uint32_t community_id = 0;
    std::vector<MemberWeight> members; // weight descending, then user id ascending

    bool operator==(const UserCommunity&) const = default;
};

// Each of the c lists casts a 1/c vote for each of its members; users whose
// total weight falls below mu are dropped. Throws DomainError for an empty
// community or mu outside [0, 1].
UserCommunity derive_members(std::uint32_t community_id, const std::vector<std::string>& community,
                             const MembershipCorpus& corpus, double mu);

struct EvalRow {
    std::string category;
    std::size_t category_size = 0;
    std::optional<std::uint32_t> matched_community; // none when no community has a core member
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    bool operator==(const EvalRow&) const = default;
};

double f1_score(double precision, double recall) noexcept;

struct EvalOptions {
    // Greedy one-to-one matching: categories claim communities in order of
    // their best precision, and a claimed community is unavailable to others.
    bool unique_match = false;
};

// Communities are restricted to `core` before scoring; categories are used as
// loaded. Each category is matched to the community of highest precision (ties:
// higher recall, then smaller id). Rows are sorted by precision descending,
// then category name. Empty categories are skipped and named in `skipped`.
std::vector<EvalRow> evaluate(const std::vector<UserCommunity>& communities, const GroundTruth& truth,
                              const UserSet& core, const EvalOptions& options = {},
                              std::vector<std::string>* skipped = nullptr);

// users.json: [{"community_id", "stability", "labels", "users":[{"id","weight"}]}]
struct UserCommunityReport {
    UserCommunity community;
    double stability = 0.0;
    std::vector<std::string> labels;
};
std::string format_user_reports(const std::vector<UserCommunityReport>& reports);
std::vector<UserCommunityReport> parse_user_reports(std::string_view json);

// Header `category<TAB>category_size<TAB>precision<TAB>recall<TAB>f1<TAB>community_id`,
// scores to 2 decimals, `-` for an unmatched category.
std::string format_eval(const std::vector<EvalRow>& rows);

} // namespace listcomm
