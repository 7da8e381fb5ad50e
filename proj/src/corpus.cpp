#include "listcomm/corpus.hpp"

#include "listcomm/error.hpp"
#include "listcomm/io.hpp"

#include <json.hpp>

#include <algorithm>

namespace listcomm {

namespace {

const UserSet kEmptyUsers;

std::string json_line(const ListRecord& rec) {
    nlohmann::ordered_json obj;
    obj["id"] = rec.id;
    obj["name"] = rec.name;
    obj["description"] = rec.description;
    return obj.dump();
}

// Splits a two-column TSV line, enforcing nonempty fields and valid UTF-8.
std::pair<std::string, std::string> two_columns(std::string_view source, std::size_t line_no,
                                                std::string_view line) {
    if (!io::is_valid_utf8(line)) throw ParseError(std::string(source), line_no, "invalid UTF-8");
    auto cols = io::split(line, '\t');
    if (cols.size() != 2)
        throw ParseError(std::string(source), line_no,
                         "expected 2 tab-separated columns, found " + std::to_string(cols.size()));
    if (cols[0].empty() || cols[1].empty())
        throw ParseError(std::string(source), line_no, "empty field");
    return {std::string(cols[0]), std::string(cols[1])};
}

} // namespace

std::size_t MembershipCorpus::membership_count() const noexcept {
    std::size_t total = 0;
    for (const auto& [id, users] : memberships_) total += users.size();
    return total;
}

const UserSet& MembershipCorpus::members(const std::string& list_id) const {
    auto it = memberships_.find(list_id);
    return it == memberships_.end() ? kEmptyUsers : it->second;
}

void CorpusBuilder::add_membership(const std::string& list_id, const std::string& user_id) {
    corpus_.memberships_[list_id].insert(user_id);
    corpus_.user_index_[user_id].insert(list_id);
}

void CorpusBuilder::add_list(ListRecord record) {
    if (record.id.empty()) throw ValidationError("list record with empty id");
    const std::string id = record.id;
    if (!corpus_.lists_.emplace(id, std::move(record)).second)
        throw ValidationError("duplicate list id in metadata: " + id);
}

MembershipCorpus CorpusBuilder::build() && {
    for (const auto& [id, users] : corpus_.memberships_) {
        if (!corpus_.lists_.contains(id)) corpus_.lists_.emplace(id, ListRecord{id, {}, {}});
    }
    for (const auto& [id, rec] : corpus_.lists_) corpus_.memberships_.try_emplace(id);
    return std::move(corpus_);
}

MembershipCorpus parse_corpus(std::string_view memberships_tsv, std::string_view lists_jsonl) {
    CorpusBuilder builder;
    std::size_t line_no = 0;
    for (auto line : io::split_lines(memberships_tsv)) {
        ++line_no;
        if (line.empty()) continue;
        auto [list_id, user_id] = two_columns("memberships", line_no, line);
        builder.add_membership(list_id, user_id);
    }

    line_no = 0;
    for (auto line : io::split_lines(lists_jsonl)) {
        ++line_no;
        if (line.empty()) continue;
        if (!io::is_valid_utf8(line)) throw ParseError("lists", line_no, "invalid UTF-8");
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError("lists", line_no, e.what());
        }
        if (!obj.is_object() || obj.size() != 3)
            throw ParseError("lists", line_no, "expected an object with keys id, name, description");
        ListRecord rec;
        try {
            rec.id = obj.at("id").get<std::string>();
            rec.name = obj.at("name").get<std::string>();
            rec.description = obj.at("description").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("lists", line_no, e.what());
        }
        builder.add_list(std::move(rec));
    }
    return std::move(builder).build();
}

MembershipCorpus load_corpus(const std::filesystem::path& memberships_path,
                             const std::filesystem::path& lists_path) {
    return parse_corpus(io::read_file(memberships_path), io::read_file(lists_path));
}

void write_corpus(const MembershipCorpus& corpus, const std::filesystem::path& memberships_path,
                  const std::filesystem::path& lists_path) {
    std::string tsv;
    for (const auto& [list_id, users] : corpus.memberships()) {
        for (const auto& user : users) {
            tsv += list_id;
            tsv += '\t';
            tsv += user;
            tsv += '\n';
        }
    }
    std::string jsonl;
    for (const auto& [id, rec] : corpus.lists()) {
        jsonl += json_line(rec);
        jsonl += '\n';
    }
    io::write_file(memberships_path, tsv);
    io::write_file(lists_path, jsonl);
}

GroundTruth parse_ground_truth(std::string_view tsv) {
    GroundTruth truth;
    std::size_t line_no = 0;
    for (auto line : io::split_lines(tsv)) {
        ++line_no;
        if (line.empty()) continue;
        auto [category, user] = two_columns("groundtruth", line_no, line);
        truth.categories[category].insert(user);
    }
    return truth;
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
    return parse_ground_truth(io::read_file(path));
}

std::string format_ground_truth(const GroundTruth& truth) {
    std::string out;
    for (const auto& [category, users] : truth.categories) {
        for (const auto& user : users) out += category + '\t' + user + '\n';
    }
    return out;
}

UserSet load_user_set(const std::filesystem::path& path) {
    const std::string text = io::read_file(path);
    UserSet users;
    std::size_t line_no = 0;
    for (auto line : io::split_lines(text)) {
        ++line_no;
        if (line.empty()) continue;
        if (!io::is_valid_utf8(line)) throw ParseError(path.string(), line_no, "invalid UTF-8");
        if (line.find('\t') != std::string_view::npos)
            throw ParseError(path.string(), line_no, "expected one id per line");
        users.emplace(line);
    }
    return users;
}

MembershipCorpus filter_lists(const MembershipCorpus& corpus, std::size_t min_size,
                              std::size_t min_core_members, const UserSet& core) {
    if (min_size < 1) throw ValidationError("filter_lists: min_size must be >= 1");
    CorpusBuilder builder;
    for (const auto& [list_id, users] : corpus.memberships()) {
        if (users.size() < min_size) continue;
        const auto core_hits = static_cast<std::size_t>(
            std::count_if(users.begin(), users.end(), [&](const std::string& u) { return core.contains(u); }));
        if (core_hits < min_core_members) continue;
        builder.add_list(corpus.lists().at(list_id));
        for (const auto& user : users) builder.add_membership(list_id, user);
    }
    return std::move(builder).build();
}

} // namespace listcomm
