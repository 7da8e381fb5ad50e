#include "listcomm/error.hpp"
#include "listcomm/hypergeom.hpp"
#include "listcomm/io.hpp"
#include "listcomm/listgraph.hpp"
#include "listcomm/random.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace listcomm;

namespace {

MembershipCorpus random_corpus(std::uint64_t seed, std::uint64_t lists, std::uint64_t users) {
    Rng rng(seed);
    CorpusBuilder b;
    for (std::uint64_t l = 0; l < lists; ++l) {
        const auto size = 1 + rng.below(10);
        const auto block = rng.below(3) * (users / 3);
        for (std::uint64_t k = 0; k < size; ++k)
            b.add_membership("L" + std::to_string(l), "u" + std::to_string(block + rng.below(users / 3 + 1)));
    }
    return std::move(b).build();
}

// Edges by direct pair enumeration over every list pair.
std::vector<WeightedEdge> brute_edges(const MembershipCorpus& c, double rho) {
    std::vector<std::string> ids;
    for (const auto& [id, rec] : c.lists()) ids.push_back(id);
    std::vector<WeightedEdge> out;
    for (std::size_t a = 0; a < ids.size(); ++a)
        for (std::size_t b = a + 1; b < ids.size(); ++b) {
            const auto& x = c.members(ids[a]);
            const auto& y = c.members(ids[b]);
            std::vector<std::string> both;
            std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(both));
            if (both.empty()) continue;
            const double lpv = overlap_lpv(x.size(), y.size(), both.size(), c.user_count());
            if (lpv >= rho && io::quantize6(lpv) >= rho)
                out.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b), io::quantize6(lpv)});
        }
    return out;
}

std::set<std::pair<NodeId, NodeId>> pairs_of(const ListGraph& g) {
    std::set<std::pair<NodeId, NodeId>> s;
    for (const auto& e : g.edges) s.emplace(e.a, e.b);
    return s;
}

} // namespace

TEST_CASE("disjoint lists never connect") {
    const auto c = testutil::corpus_of({{"a", "u1"}, {"a", "u2"}, {"b", "u3"}, {"b", "u4"}});
    for (double rho : {0.0, 1.0, 6.0}) {
        const auto g = build_list_graph(c, {rho});
        CHECK(g.nodes == std::vector<std::string>{"a", "b"});
        CHECK(g.edges.empty());
    }
}

TEST_CASE("identical lists of five among 100 users connect at rho 6") {
    CorpusBuilder b;
    for (int u = 0; u < 5; ++u) {
        b.add_membership("x", "u" + std::to_string(u));
        b.add_membership("y", "u" + std::to_string(u));
    }
    for (int u = 5; u < 100; ++u) b.add_membership("filler", "u" + std::to_string(u));
    const auto c = std::move(b).build();
    REQUIRE(c.user_count() == 100);
    const auto g = build_list_graph(c, {6.0});
    REQUIRE(g.edges.size() == 1);
    CHECK(g.nodes[g.edges[0].a] == "x");
    CHECK(g.nodes[g.edges[0].b] == "y");
    CHECK(g.edges[0].weight == doctest::Approx(std::log10(75287520.0)).epsilon(1e-6));
    CHECK(g.edges[0].weight >= 6.0);
}

TEST_CASE("edges match brute-force pair enumeration") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto c = random_corpus(seed, 30, 45);
        for (double rho : {0.0, 0.5, 2.0}) {
            const auto g = build_list_graph(c, {rho});
            CHECK(g.edges == brute_edges(c, rho));
        }
    }
}

TEST_CASE("worker count does not change the graph") {
    const auto c = random_corpus(7, 120, 90);
    const auto one = build_list_graph(c, {1.0}, 1);
    CHECK(build_list_graph(c, {1.0}, 3) == one);
    CHECK(build_list_graph(c, {1.0}, 8) == one);
    CHECK(build_list_graph(c, {1.0}, 0) == one);
}

TEST_CASE("edge sets and degrees shrink as rho grows") {
    Rng pick(99);
    for (int trial = 0; trial < 200; ++trial) {
        const auto c = random_corpus(1000 + trial, 12 + pick.below(20), 20 + pick.below(40));
        const double r1 = pick.uniform() * 4.0;
        const double r2 = r1 + pick.uniform() * 4.0;
        const auto g1 = build_list_graph(c, {r1});
        const auto g2 = build_list_graph(c, {r2});
        const auto p1 = pairs_of(g1);
        const auto p2 = pairs_of(g2);
        CHECK(std::includes(p1.begin(), p1.end(), p2.begin(), p2.end()));
        const Adjacency a1(g1), a2(g2);
        for (NodeId v = 0; v < g1.nodes.size(); ++v) CHECK(a2.degree(v) <= a1.degree(v));
        for (const auto& e : g2.edges) CHECK(e.weight >= r2);
    }
}

TEST_CASE("negative rho is rejected") {
    CHECK_THROWS_AS((void)build_list_graph(testutil::corpus_of({{"a", "u"}}), {-1.0}), ValidationError);
}

TEST_CASE("graph export round trip keeps isolated nodes") {
    testutil::TempDir dir("graph");
    const auto c = random_corpus(3, 40, 40);
    const auto g = build_list_graph(c, {1.0});
    write_list_graph(g, dir / "graph.tsv", dir / "nodes.txt");
    const auto back = read_list_graph(dir / "graph.tsv", dir / "nodes.txt");
    CHECK(back == g);
    CHECK(back.nodes.size() == c.list_count());
    CHECK(format_graph_edges(back) == format_graph_edges(g));
}

TEST_CASE("graph export format") {
    ListGraph g;
    g.nodes = {"a", "b", "c"};
    g.edges = {{0, 2, 7.25}, {1, 2, 6.0}};
    CHECK(format_graph_edges(g) == "a\tc\t7.250000\nb\tc\t6.000000\n");
    CHECK(format_graph_nodes(g) == "a\nb\nc\n");
}

TEST_CASE("malformed graph files") {
    const std::string nodes = "a\nb\nc\n";
    CHECK_THROWS_AS((void)parse_list_graph("a\tb\n", nodes), ParseError);
    CHECK_THROWS_AS((void)parse_list_graph("a\tb\tx\n", nodes), ParseError);
    CHECK_THROWS_AS((void)parse_list_graph("a\tb\t-1\n", nodes), ParseError);
    CHECK_THROWS_AS((void)parse_list_graph("a\tz\t7\n", nodes), ValidationError);
    CHECK_THROWS_AS((void)parse_list_graph("a\ta\t7\n", nodes), ValidationError);
    CHECK_THROWS_AS((void)parse_list_graph("a\tb\t7\nb\ta\t8\n", nodes), ValidationError);
    CHECK_THROWS_AS((void)parse_list_graph("", "a\na\n"), ValidationError);
    // reversed endpoints and unsorted rows are normalised
    const auto g = parse_list_graph("c\tb\t6.5\na\tc\t7\n", nodes);
    CHECK(g.edges == std::vector<WeightedEdge>{{0, 2, 7.0}, {1, 2, 6.5}});
}
