#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>

namespace listcomm {

struct ListRecord {
    std::string id;
    std::string name;
    std::string description;

    bool operator==(const ListRecord&) const = default;
};

using UserSet = std::set<std::string>;

// Bipartite record of curated lists and their members. Immutable once built;
// construct through CorpusBuilder, load_corpus or filter_lists.
class MembershipCorpus {
public:
    MembershipCorpus() = default;

    const std::map<std::string, ListRecord>& lists() const noexcept { return lists_; }
    const std::map<std::string, UserSet>& memberships() const noexcept { return memberships_; }
    const std::map<std::string, std::set<std::string>>& user_index() const noexcept { return user_index_; }

    // Distinct users assigned to at least one list.
    std::size_t user_count() const noexcept { return user_index_.size(); }
    std::size_t list_count() const noexcept { return lists_.size(); }
    std::size_t membership_count() const noexcept;

    const UserSet& members(const std::string& list_id) const;

    bool operator==(const MembershipCorpus&) const = default;

private:
    friend class CorpusBuilder;

    std::map<std::string, ListRecord> lists_;
    std::map<std::string, UserSet> memberships_;
    std::map<std::string, std::set<std::string>> user_index_;
};

class CorpusBuilder {
public:
    // Duplicate (list, user) pairs collapse. Lists without metadata get empty text.
    void add_membership(const std::string& list_id, const std::string& user_id);
    // Throws ValidationError on an empty or duplicate id.
    void add_list(ListRecord record);

    MembershipCorpus build() &&;

private:
    MembershipCorpus corpus_;
};

struct GroundTruth {
    std::map<std::string, UserSet> categories;

    bool operator==(const GroundTruth&) const = default;
};

// memberships: `list_id<TAB>user_id` per line. lists: JSON lines with exactly the
// keys id, name, description. Blank lines are skipped.
MembershipCorpus load_corpus(const std::filesystem::path& memberships_path,
                             const std::filesystem::path& lists_path);
MembershipCorpus parse_corpus(std::string_view memberships_tsv, std::string_view lists_jsonl);

void write_corpus(const MembershipCorpus& corpus, const std::filesystem::path& memberships_path,
                  const std::filesystem::path& lists_path);

// `category<TAB>user_id` per line.
GroundTruth load_ground_truth(const std::filesystem::path& path);
GroundTruth parse_ground_truth(std::string_view tsv);
std::string format_ground_truth(const GroundTruth& truth);

// One user id per line.
UserSet load_user_set(const std::filesystem::path& path);

// Keeps lists with at least min_size members, of which at least min_core_members
// are in `core`.
MembershipCorpus filter_lists(const MembershipCorpus& corpus, std::size_t min_size,
                              std::size_t min_core_members, const UserSet& core);

} // namespace listcomm
