#include "listcomm/membership.hpp"

#include "listcomm/error.hpp"
#include "listcomm/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>

namespace listcomm {

UserCommunity derive_members(std::uint32_t community_id, const std::vector<std::string>& community,
                             const MembershipCorpus& corpus, double mu) {
    if (community.empty()) throw DomainError("derive_members: empty community");
    if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("derive_members: mu must lie in [0, 1]");
    std::vector<std::string> lists(community);
    std::sort(lists.begin(), lists.end());
    lists.erase(std::unique(lists.begin(), lists.end()), lists.end());

    std::map<std::string, std::uint32_t> votes;
    for (const auto& id : lists) {
        if (!corpus.lists().contains(id)) throw DomainError("derive_members: unknown list " + id);
        for (const auto& user : corpus.members(id)) ++votes[user];
    }

    UserCommunity uc;
    uc.community_id = community_id;
    const double c = static_cast<double>(lists.size());
    for (const auto& [user, n] : votes) {
        const double w = static_cast<double>(n) / c;
        if (w >= mu) uc.members.push_back({user, w});
    }
    std::stable_sort(uc.members.begin(), uc.members.end(),
                     [](const MemberWeight& x, const MemberWeight& y) { return x.weight > y.weight; });
    return uc;
}

double f1_score(double precision, double recall) noexcept {
    const double s = precision + recall;
    return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

namespace {

struct Candidate {
    std::uint32_t community = 0;
    double precision = 0.0;
    double recall = 0.0;
};

bool better(const Candidate& x, const Candidate& y) {
    if (x.precision != y.precision) return x.precision > y.precision;
    if (x.recall != y.recall) return x.recall > y.recall;
    return x.community < y.community;
}

} // namespace

std::vector<EvalRow> evaluate(const std::vector<UserCommunity>& communities, const GroundTruth& truth,
                              const UserSet& core, const EvalOptions& options, std::vector<std::string>* skipped) {
    // Core-restricted member sets.
    std::vector<std::pair<std::uint32_t, std::vector<std::string>>> restricted;
    for (const auto& uc : communities) {
        std::vector<std::string> members;
        for (const auto& m : uc.members) {
            if (core.contains(m.user)) members.push_back(m.user);
        }
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        if (!members.empty()) restricted.emplace_back(uc.community_id, std::move(members));
    }

    struct Ranked {
        std::string category;
        std::size_t size;
        std::vector<Candidate> candidates; // best first
    };
    std::vector<Ranked> ranked;
    for (const auto& [category, users] : truth.categories) {
        if (users.empty()) {
            if (skipped) skipped->push_back(category);
            continue;
        }
        Ranked r{category, users.size(), {}};
        for (const auto& [id, members] : restricted) {
            const auto hits = static_cast<std::size_t>(
                std::count_if(members.begin(), members.end(), [&](const std::string& u) { return users.contains(u); }));
            r.candidates.push_back({id, static_cast<double>(hits) / static_cast<double>(members.size()),
                                    static_cast<double>(hits) / static_cast<double>(users.size())});
        }
        std::sort(r.candidates.begin(), r.candidates.end(), better);
        ranked.push_back(std::move(r));
    }

    std::vector<EvalRow> rows;
    auto make_row = [](const Ranked& r, const Candidate* c) {
        EvalRow row{r.category, r.size, std::nullopt, 0.0, 0.0, 0.0};
        if (c) {
            row.matched_community = c->community;
            row.precision = c->precision;
            row.recall = c->recall;
            row.f1 = f1_score(c->precision, c->recall);
        }
        return row;
    };

    if (!options.unique_match) {
        for (const auto& r : ranked) rows.push_back(make_row(r, r.candidates.empty() ? nullptr : &r.candidates.front()));
    } else {
        // Categories with the strongest best match choose first.
        std::vector<std::size_t> order(ranked.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            if (ranked[x].candidates.empty() || ranked[y].candidates.empty())
                return !ranked[x].candidates.empty() && ranked[y].candidates.empty();
            return better(ranked[x].candidates.front(), ranked[y].candidates.front());
        });
        std::vector<std::uint32_t> taken;
        for (std::size_t i : order) {
            const Candidate* pick = nullptr;
            for (const auto& c : ranked[i].candidates) {
                if (std::find(taken.begin(), taken.end(), c.community) == taken.end()) {
                    pick = &c;
                    break;
                }
            }
            if (pick) taken.push_back(pick->community);
            rows.push_back(make_row(ranked[i], pick));
        }
    }

    std::stable_sort(rows.begin(), rows.end(), [](const EvalRow& x, const EvalRow& y) {
        if (x.precision != y.precision) return x.precision > y.precision;
        return x.category < y.category;
    });
    return rows;
}

std::string format_user_reports(const std::vector<UserCommunityReport>& reports) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json obj;
        obj["community_id"] = r.community.community_id;
        obj["stability"] = r.stability;
        obj["labels"] = r.labels;
        nlohmann::ordered_json users = nlohmann::ordered_json::array();
        for (const auto& m : r.community.members) {
            nlohmann::ordered_json u;
            u["id"] = m.user;
            u["weight"] = m.weight;
            users.push_back(std::move(u));
        }
        obj["users"] = std::move(users);
        arr.push_back(std::move(obj));
    }
    return arr.dump(1) + "\n";
}

std::vector<UserCommunityReport> parse_user_reports(std::string_view json) {
    std::vector<UserCommunityReport> out;
    try {
        const auto arr = nlohmann::json::parse(json);
        if (!arr.is_array()) throw ParseError("users: expected a JSON array");
        for (const auto& obj : arr) {
            UserCommunityReport r;
            r.community.community_id = obj.at("community_id").get<std::uint32_t>();
            r.stability = obj.at("stability").get<double>();
            r.labels = obj.at("labels").get<std::vector<std::string>>();
            for (const auto& u : obj.at("users")) {
                r.community.members.push_back({u.at("id").get<std::string>(), u.at("weight").get<double>()});
            }
            out.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("users: ") + e.what());
    }
    return out;
}

std::string format_eval(const std::vector<EvalRow>& rows) {
    std::string out = "category\tcategory_size\tprecision\trecall\tf1\tcommunity_id\n";
    for (const auto& r : rows) {
        out += r.category + '\t' + std::to_string(r.category_size) + '\t' + io::format_fixed(r.precision, 2) + '\t' +
               io::format_fixed(r.recall, 2) + '\t' + io::format_fixed(r.f1, 2) + '\t' +
               (r.matched_community ? std::to_string(*r.matched_community) : std::string("-")) + '\n';
    }
    return out;
}

} // namespace listcomm
