#include <functional>

#include <gtest/gtest.h>

#include "castnet/paths.hpp"
#include "support/oracles.hpp"
#include "support/random_graphs.hpp"

using namespace castnet;
namespace t = castnet::testing;

namespace {

TitleRecord title(std::string id, std::string name, std::vector<std::string> cast) {
    TitleRecord r;
    r.title_id = std::move(id);
    r.title = std::move(name);
    r.cast = std::move(cast);
    return r;
}

/// Every shortest a-b path by label sequence, smallest first.
std::vector<std::string> brute_best_labels(const CoGraph& g, NodeId a, NodeId b) {
    const auto d = t::floyd_warshall(g);
    std::optional<std::vector<std::string>> best;
    std::vector<NodeId> stack{a};
    std::function<void()> walk = [&] {
        const auto u = stack.back();
        if (u == b) {
            std::vector<std::string> labels;
            for (auto x : stack) labels.push_back(g.label(x));
            if (!best || labels < *best) best = labels;
            return;
        }
        for (auto w : g.neighbors(u)) {
            if (d[w][b] != d[u][b] - 1) continue;
            stack.push_back(w);
            walk();
            stack.pop_back();
        }
    };
    walk();
    return best.value_or(std::vector<std::string>{});
}

} // namespace

TEST(ShortestPath, SameActorIsEmptyPath) {
    const auto g = t::path_graph(3);
    const auto p = shortest_path(g, 1, 1);
    ASSERT_TRUE(p);
    EXPECT_EQ(p->length(), 0u);
    EXPECT_EQ(p->nodes, (std::vector<NodeId>{1}));
    EXPECT_EQ(render(*p, g), "1");
}

TEST(ShortestPath, DirectCostarsListSharedTitles) {
    const auto g = project(build_bipartite(
        {title("t1", "Zulu", {"A", "B"}), title("t2", "Alpha", {"B", "A"}), title("t3", "Mid", {"B", "C"})}));
    const auto ab = shortest_path(g, "A", "B");
    ASSERT_TRUE(ab);
    ASSERT_EQ(ab->length(), 1u);
    EXPECT_EQ(ab->hops[0].titles, (std::vector<std::string>{"Alpha", "Zulu"}));
    EXPECT_EQ(render(*ab, g), "A —[Alpha; Zulu]→ B");
    const auto ac = shortest_path(g, "A", "C");
    ASSERT_TRUE(ac);
    EXPECT_EQ(render(*ac, g), "A —[Alpha; Zulu]→ B —[Mid]→ C");
}

TEST(ShortestPath, UnreachableAndUnknown) {
    const auto g = graph_from_edges(4, {{0, 1}, {2, 3}});
    EXPECT_FALSE(shortest_path(g, 0, 3));
    try {
        shortest_path(g, "0", "nobody");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownActor);
    }
}

TEST(ShortestPath, TieBreakPicksSmallestLabelSequence) {
    // two routes s-x-t and s-y-t; labels make "b" beat "c" even though c has the lower id
    const auto g = graph_from_edges({"s", "c", "b", "t"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    const auto p = shortest_path(g, 0, 3);
    ASSERT_TRUE(p);
    EXPECT_EQ(p->nodes, (std::vector<NodeId>{0, 2, 3}));
}

TEST(ShortestPath, MatchesFloydWarshallOnRandomGraphs) {
    Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const auto n = 2 + rng.below(20);
        auto base = t::random_graph(rng, n, 0.2);
        std::vector<std::string> labels;
        for (NodeId u = 0; u < n; ++u) labels.push_back(std::string(1, static_cast<char>('a' + rng.below(26))) + std::to_string(u));
        std::vector<WeightedEdge> edges;
        for (NodeId u = 0; u < n; ++u)
            for (auto v : base.neighbors(u))
                if (v > u) edges.push_back({u, v, 1});
        const auto g = graph_from_edges(labels, edges);
        const auto d = t::floyd_warshall(g);
        for (NodeId a = 0; a < n; ++a)
            for (NodeId b = 0; b < n; ++b) {
                const auto p = shortest_path(g, a, b);
                if (d[a][b] >= t::kInf) {
                    EXPECT_FALSE(p);
                    continue;
                }
                ASSERT_TRUE(p);
                EXPECT_EQ(p->length(), static_cast<std::size_t>(d[a][b]));
                std::vector<std::string> got;
                for (auto x : p->nodes) got.push_back(g.label(x));
                EXPECT_EQ(got, brute_best_labels(g, a, b));
                for (std::size_t i = 0; i + 1 < p->nodes.size(); ++i) EXPECT_GT(g.weight(p->nodes[i], p->nodes[i + 1]), 0u);
            }
    }
}

TEST(DistanceHistogram, SmallFixtures) {
    const auto k3 = distance_histogram(t::complete_graph(3), 10, 1);
    EXPECT_EQ(k3.counts, (std::map<std::int32_t, std::uint64_t>{{1, 6}}));
    EXPECT_EQ(k3.unreachable, 0u);

    const auto p4 = distance_histogram(t::path_graph(4), 4, 1);
    EXPECT_EQ(p4.counts, (std::map<std::int32_t, std::uint64_t>{{1, 6}, {2, 4}, {3, 2}}));

    const auto split = distance_histogram(graph_from_edges(4, {{0, 1}, {2, 3}}), 4, 1);
    EXPECT_EQ(split.counts, (std::map<std::int32_t, std::uint64_t>{{1, 4}}));
    EXPECT_EQ(split.unreachable, 8u);
    EXPECT_THROW(distance_histogram(t::path_graph(3), 0, 1), Error);
}

TEST(DistanceHistogram, SamplesDistinctSourcesDeterministically) {
    Rng rng(11);
    const auto g = t::random_graph(rng, 60, 0.08);
    const auto a = distance_histogram(g, 10, 42);
    const auto b = distance_histogram(g, 10, 42);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.unreachable, b.unreachable);
    EXPECT_EQ(a.sources, 10u);
    std::uint64_t total = a.unreachable;
    for (auto [d, c] : a.counts) total += c;
    EXPECT_EQ(total, 10u * 59u);
}

TEST(TopPartnerships, HeaviestEdgesWithLabelTies) {
    const auto g = graph_from_edges({"d", "c", "b", "a"}, {{0, 1, 3}, {2, 3, 3}, {1, 2, 5}, {0, 3, 1}});
    const auto top = top_partnerships(g, 3);
    ASSERT_EQ(top.size(), 3u);
    EXPECT_EQ(top[0].shared_titles, 5u);
    EXPECT_EQ(g.label(top[0].a), "b");
    EXPECT_EQ(g.label(top[0].b), "c");
    EXPECT_EQ(g.label(top[1].a), "a");
    EXPECT_EQ(g.label(top[1].b), "b");
    EXPECT_EQ(g.label(top[2].a), "c");
    EXPECT_EQ(g.label(top[2].b), "d");
    EXPECT_EQ(top_partnerships(g, 100).size(), 4u);
}
