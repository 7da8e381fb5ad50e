#include "listcomm/error.hpp"
#include "listcomm/membership.hpp"
#include "listcomm/random.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace listcomm;

namespace {

MembershipCorpus random_corpus(Rng& rng, std::size_t lists, std::size_t users) {
    CorpusBuilder b;
    for (std::size_t l = 0; l < lists; ++l) {
        const auto size = 1 + rng.below(8);
        for (std::uint64_t k = 0; k < size; ++k)
            b.add_membership("L" + std::to_string(l), "u" + std::to_string(rng.below(users)));
    }
    return std::move(b).build();
}

std::vector<std::string> random_community(Rng& rng, std::size_t lists) {
    std::vector<std::string> c;
    for (std::size_t l = 0; l < lists; ++l)
        if (rng.below(2) == 0) c.push_back("L" + std::to_string(l));
    if (c.empty()) c.push_back("L0");
    return c;
}

std::set<std::string> users_of(const UserCommunity& uc) {
    std::set<std::string> s;
    for (const auto& m : uc.members) s.insert(m.user);
    return s;
}

UserCommunity flat(std::uint32_t id, const std::vector<std::string>& users) {
    UserCommunity uc;
    uc.community_id = id;
    for (const auto& u : users) uc.members.push_back({u, 1.0});
    return uc;
}

std::vector<std::string> ids(const std::string& prefix, int from, int to) {
    std::vector<std::string> out;
    for (int i = from; i < to; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

UserSet set_of(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

} // namespace

TEST_CASE("membership weight examples") {
    const auto c = testutil::corpus_of({{"a", "x"}, {"a", "y"}, {"b", "y"}, {"c", "y"}, {"d", "y"}, {"e", "z"}});
    const auto uc = derive_members(7, {"a", "b", "c", "d"}, c, 0.1);
    CHECK(uc.community_id == 7);
    REQUIRE(uc.members.size() == 2);
    CHECK(uc.members[0] == MemberWeight{"y", 1.0});
    CHECK(uc.members[1] == MemberWeight{"x", 0.25});

    CHECK(derive_members(0, {"a", "b", "c", "d"}, c, 0.3).members.size() == 1);
    CHECK(derive_members(0, {"a", "b", "c", "d"}, c, 0.25).members.size() == 2);
    CHECK(derive_members(0, {"a", "a", "b"}, c, 0.0) == derive_members(0, {"b", "a"}, c, 0.0));
}

TEST_CASE("derive_members errors") {
    const auto c = testutil::corpus_of({{"a", "x"}});
    CHECK_THROWS_AS((void)derive_members(0, {}, c, 0.1), DomainError);
    CHECK_THROWS_AS((void)derive_members(0, {"a"}, c, -0.1), DomainError);
    CHECK_THROWS_AS((void)derive_members(0, {"a"}, c, 1.5), DomainError);
    CHECK_THROWS_AS((void)derive_members(0, {"zz"}, c, 0.1), DomainError);
}

TEST_CASE("weights are multiples of 1/c and account for every membership record") {
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t lists = 3 + rng.below(15);
        const auto corpus = random_corpus(rng, lists, 30);
        const auto community = random_community(rng, lists);
        const auto uc = derive_members(0, community, corpus, 0.0);
        const double c = static_cast<double>(community.size());
        double total = 0.0;
        for (const auto& m : uc.members) {
            const double votes = m.weight * c;
            CHECK(std::abs(votes - std::round(votes)) < 1e-9);
            CHECK(m.weight <= 1.0);
            total += votes;
        }
        std::size_t records = 0;
        for (const auto& id : community) records += corpus.members(id).size();
        CHECK(std::lround(total) == static_cast<long>(records));
        for (std::size_t i = 1; i < uc.members.size(); ++i) {
            const auto& p = uc.members[i - 1];
            const auto& q = uc.members[i];
            CHECK((p.weight > q.weight || (p.weight == q.weight && p.user < q.user)));
        }
    }
}

TEST_CASE("raising mu never adds members") {
    Rng rng(23);
    for (int trial = 0; trial < 250; ++trial) {
        const std::size_t lists = 2 + rng.below(12);
        const auto corpus = random_corpus(rng, lists, 25);
        const auto community = random_community(rng, lists);
        const double lo = rng.uniform();
        const double hi = lo + (1.0 - lo) * rng.uniform();
        const auto a = users_of(derive_members(0, community, corpus, lo));
        const auto b = users_of(derive_members(0, community, corpus, hi));
        CHECK(std::includes(a.begin(), a.end(), b.begin(), b.end()));
        for (const auto& m : derive_members(0, community, corpus, hi).members) CHECK(m.weight >= hi);
    }
}

TEST_CASE("f1 lies between precision and recall") {
    CHECK(f1_score(0.0, 0.0) == 0.0);
    CHECK(f1_score(1.0, 0.0) == 0.0);
    CHECK(f1_score(1.0, 1.0) == 1.0);
    CHECK(oracle::round2(f1_score(1.0, 0.65)) == 0.79);
    Rng rng(4);
    for (int i = 0; i < 1000; ++i) {
        const double p = 1e-6 + rng.uniform(), r = 1e-6 + rng.uniform();
        const double f = f1_score(p, r);
        CHECK(f >= std::min(p, r) - 1e-12);
        CHECK(f <= std::max(p, r) + 1e-12);
    }
}

TEST_CASE("identical and disjoint communities") {
    const auto cat = ids("u", 0, 10);
    GroundTruth truth;
    truth.categories["same"] = set_of(cat);
    truth.categories["other"] = set_of(ids("v", 0, 5));
    const UserSet core = set_of(ids("u", 0, 10));
    const auto rows = evaluate({flat(3, cat)}, truth, core);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == EvalRow{"same", 10, 3u, 1.0, 1.0, 1.0});
    // "other" users are outside the core, and the only community shares nothing with it
    CHECK(rows[1].category == "other");
    CHECK(rows[1].precision == 0.0);
    CHECK(rows[1].recall == 0.0);
    CHECK(rows[1].f1 == 0.0);
    CHECK(rows[1].matched_community == 3u);
}

TEST_CASE("reported precision is the maximum over communities") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const auto universe = ids("u", 0, 40);
        UserSet core;
        for (const auto& u : universe)
            if (rng.below(5) != 0) core.insert(u);
        GroundTruth truth;
        for (int k = 0; k < 3; ++k) {
            UserSet s;
            for (const auto& u : universe)
                if (rng.below(4) == 0) s.insert(u);
            truth.categories["cat" + std::to_string(k)] = s;
        }
        std::vector<UserCommunity> comms;
        for (std::uint32_t c = 0; c < 6; ++c) {
            std::vector<std::string> members;
            for (const auto& u : universe)
                if (rng.below(3) == 0) members.push_back(u);
            comms.push_back(flat(c * 2 + 1, members));
        }
        std::vector<std::string> skipped;
        const auto rows = evaluate(comms, truth, core, {}, &skipped);
        for (const auto& row : rows) {
            const auto& cat = truth.categories.at(row.category);
            double best = 0.0;
            for (const auto& uc : comms) {
                std::size_t size = 0, hits = 0;
                for (const auto& m : uc.members) {
                    if (!core.contains(m.user)) continue;
                    ++size;
                    hits += cat.contains(m.user);
                }
                if (size) best = std::max(best, static_cast<double>(hits) / static_cast<double>(size));
            }
            CHECK(row.precision == best);
            CHECK(row.f1 == f1_score(row.precision, row.recall));
        }
        for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].precision >= rows[i].precision);
    }
}

TEST_CASE("precision ties prefer higher recall then smaller id") {
    GroundTruth truth;
    truth.categories["c"] = set_of(ids("u", 0, 10));
    const UserSet core = set_of(ids("u", 0, 10));
    const auto rows = evaluate({flat(9, ids("u", 0, 2)), flat(4, ids("u", 0, 5)), flat(2, ids("u", 5, 10))}, truth, core);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].matched_community == 2u);
    CHECK(rows[0].recall == 0.5);
}

TEST_CASE("judo row arithmetic") {
    // 13 of 20 category members recovered by a 13-member community.
    GroundTruth truth;
    truth.categories["judo"] = set_of(ids("j", 0, 20));
    const UserSet core = set_of(ids("j", 0, 20));
    const auto rows = evaluate({flat(0, ids("j", 0, 13))}, truth, core);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].precision == 1.0);
    CHECK(rows[0].recall == 0.65);
    CHECK(rows[0].f1 == doctest::Approx(0.7879).epsilon(1e-4));
    CHECK(std::abs(rows[0].f1 - 0.79) <= 0.005);
}

TEST_CASE("validation table rows are reproduced from integer counts") {
    GroundTruth truth;
    std::vector<UserCommunity> comms;
    UserSet core;
    std::uint32_t id = 0;
    for (const auto& row : oracle::validation_table()) {
        const auto [hits, m] = oracle::reconstruct_counts(row);
        REQUIRE(hits >= 0);
        const std::string cat = row.category;
        const auto members = ids(cat + "-", 0, row.size);
        truth.categories[cat] = set_of(members);
        auto chosen = ids(cat + "-", 0, hits);
        for (const auto& extra : ids(cat + "-x", 0, m - hits)) chosen.push_back(extra);
        comms.push_back(flat(id++, chosen));
        core.insert(members.begin(), members.end());
        core.insert(chosen.begin(), chosen.end());
    }
    const auto rows = evaluate(comms, truth, core);
    REQUIRE(rows.size() == oracle::validation_table().size());
    for (const auto& expect : oracle::validation_table()) {
        const auto it = std::find_if(rows.begin(), rows.end(), [&](const EvalRow& r) { return r.category == expect.category; });
        REQUIRE(it != rows.end());
        INFO(expect.category);
        CHECK(it->category_size == static_cast<std::size_t>(expect.size));
        CHECK(oracle::round2(it->precision) == expect.precision);
        CHECK(oracle::round2(it->recall) == expect.recall);
        CHECK(oracle::round2(it->f1) == expect.f1);
    }
}

TEST_CASE("unique matching and skipped categories") {
    GroundTruth truth;
    truth.categories["a"] = set_of(ids("u", 0, 6));
    truth.categories["b"] = set_of(ids("u", 0, 5));
    truth.categories["empty"] = {};
    const UserSet core = set_of(ids("u", 0, 20));
    const std::vector<UserCommunity> comms{flat(0, ids("u", 0, 5)), flat(1, ids("u", 0, 10))};

    std::vector<std::string> skipped;
    const auto shared = evaluate(comms, truth, core, {}, &skipped);
    CHECK(skipped == std::vector<std::string>{"empty"});
    REQUIRE(shared.size() == 2);
    CHECK(shared[0].matched_community == 0u);
    CHECK(shared[1].matched_community == 0u);

    const auto unique = evaluate(comms, truth, core, {true});
    REQUIRE(unique.size() == 2);
    std::set<std::uint32_t> used;
    for (const auto& r : unique) used.insert(r.matched_community.value());
    CHECK(used.size() == 2);
    CHECK(unique[0] == EvalRow{"b", 5, 0u, 1.0, 1.0, 1.0});
    CHECK(unique[1].category == "a");
    CHECK(unique[1].matched_community == 1u);
    CHECK(unique[1].precision == 0.6);

    // With one community, the second category is left unmatched.
    const auto lone = evaluate({comms[0]}, truth, core, {true});
    REQUIRE(lone.size() == 2);
    CHECK_FALSE(lone[1].matched_community.has_value());
    CHECK(format_eval(lone).ends_with("\t0.00\t0.00\t0.00\t-\n"));
}

TEST_CASE("non-core users do not count") {
    GroundTruth truth;
    truth.categories["c"] = set_of(ids("u", 0, 4));
    const UserSet core = set_of(ids("u", 0, 4));
    auto uc = flat(0, ids("u", 0, 4));
    for (const auto& outsider : ids("o", 0, 10)) uc.members.push_back({outsider, 0.5});
    const auto rows = evaluate({uc}, truth, core);
    CHECK(rows[0].precision == 1.0);
    CHECK(evaluate({flat(0, ids("o", 0, 3))}, truth, core)[0].matched_community == std::nullopt);
}

TEST_CASE("users.json round trip") {
    UserCommunityReport r;
    r.community.community_id = 4;
    r.community.members = {{"alice", 1.0}, {"bob", 0.25}};
    r.stability = 0.87;
    r.labels = {"judo", "judo clubs"};
    const std::vector<UserCommunityReport> reports{r, {}};
    const auto back = parse_user_reports(format_user_reports(reports));
    REQUIRE(back.size() == 2);
    CHECK(back[0].community == r.community);
    CHECK(back[0].stability == 0.87);
    CHECK(back[0].labels == r.labels);
    CHECK(back[1].community.members.empty());
    CHECK(format_user_reports({}) == "[]\n");
    CHECK_THROWS_AS((void)parse_user_reports("{"), ParseError);
    CHECK_THROWS_AS((void)parse_user_reports("{}"), ParseError);
    CHECK_THROWS_AS((void)parse_user_reports("[{\"community_id\":1}]"), ParseError);
}

TEST_CASE("eval export") {
    const std::vector<EvalRow> rows{{"judo", 20, 3u, 1.0, 0.65, f1_score(1.0, 0.65)}};
    CHECK(format_eval(rows) ==
          "category\tcategory_size\tprecision\trecall\tf1\tcommunity_id\njudo\t20\t1.00\t0.65\t0.79\t3\n");
    CHECK(format_eval({}) == "category\tcategory_size\tprecision\trecall\tf1\tcommunity_id\n");
}
