#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "castnet/graph.hpp"
#include "castnet/graph_io.hpp"
#include "castnet/rng.hpp"
#include "support/oracles.hpp"
#include "support/random_graphs.hpp"

using namespace castnet;
using castnet::testing::brute_projection;

namespace {

TitleRecord title(std::string id, std::vector<std::string> cast, TitleKind kind = TitleKind::Movie,
                  std::optional<int> year = 2000) {
    TitleRecord r;
    r.title_id = id;
    r.title = "Title " + id;
    r.kind = kind;
    r.release_year = year;
    r.cast = std::move(cast);
    return r;
}

} // namespace

TEST(BuildBipartite, InternsInFirstSeenOrder) {
    auto store = build_bipartite({title("t1", {"A", "B", "C"})});
    EXPECT_EQ(store.person_count(), 3u);
    EXPECT_EQ(store.title_count(), 1u);
    EXPECT_EQ(store.incidence[0], (std::vector<NodeId>{0, 1, 2}));
    EXPECT_EQ(store.person_keys, (std::vector<std::string>{"A", "B", "C"}));
}

TEST(BuildBipartite, Filters) {
    std::vector<TitleRecord> recs{title("m", {"A", "B"}), title("s", {"C", "D"}, TitleKind::TvShow),
                                  title("old", {"E", "F"}, TitleKind::Movie, 1950), title("none", {}),
                                  title("noyear", {"G"}, TitleKind::Movie, std::nullopt)};
    BuildFilters f;
    f.kind = TitleKind::Movie;
    auto store = build_bipartite(recs, f);
    EXPECT_EQ(store.title_count(), 3u); // m, old, noyear; empty cast dropped by min_cast = 1
    EXPECT_EQ(store.report.excluded_kind, 1u);
    EXPECT_EQ(store.report.excluded_small_cast, 1u);

    f.year_range = std::pair{1990, 2010};
    store = build_bipartite(recs, f);
    EXPECT_EQ(store.title_count(), 1u);
    EXPECT_EQ(store.report.excluded_year, 2u);

    BuildFilters cap;
    cap.max_cast = 1;
    store = build_bipartite(recs, cap);
    EXPECT_EQ(store.report.rejected_large_cast, 3u);

    f.kind = TitleKind::TvShow;
    f.year_range = std::pair{1800, 1801};
    EXPECT_THROW(build_bipartite(recs, f), Error);
}

TEST(BuildBipartite, UsesNameLookupForLabels) {
    std::unordered_map<std::string, std::string> names{{"nm1", "Ann"}};
    auto store = build_bipartite({title("t", {"nm1", "nm2"})}, {}, &names);
    EXPECT_EQ(store.person_labels, (std::vector<std::string>{"Ann", "nm2"}));
}

TEST(Project, CliquePerTitle) {
    auto g = project(build_bipartite({title("t1", {"A", "B", "C"})}));
    EXPECT_EQ(g.node_count(), 3u);
    EXPECT_EQ(g.edge_count(), 3u);
    for (NodeId u = 0; u < 3; ++u) EXPECT_EQ(g.degree(u), 2u);
    EXPECT_EQ(g.weight(0, 1), 1u);
}

TEST(Project, RepeatedPairsAccumulateWeight) {
    auto g = project(build_bipartite({title("t1", {"A", "B"}), title("t2", {"B", "A"})}));
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_EQ(g.weight(0, 1), 2u);
    const auto titles = g.titles_between(1, 0);
    ASSERT_EQ(titles.size(), 2u);
    EXPECT_EQ(g.title_name(titles[0]), "Title t1");
}

TEST(Project, SoloCastIsIsolatedNode) {
    auto g = project(build_bipartite({title("t1", {"A"})}));
    EXPECT_EQ(g.node_count(), 1u);
    EXPECT_EQ(g.edge_count(), 0u);
    EXPECT_EQ(g.degree(0), 0u);
}

TEST(CoGraph, Accessors) {
    auto k3 = castnet::testing::complete_graph(3);
    EXPECT_EQ(k3.degree(1), 2u);
    auto p = castnet::testing::path_graph(3);
    EXPECT_EQ(p.weight(0, 2), 0u);
    EXPECT_EQ(std::vector<NodeId>(p.neighbors(1).begin(), p.neighbors(1).end()), (std::vector<NodeId>{0, 2}));
    try {
        (void)p.degree(3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NodeOutOfRange);
    }
    EXPECT_THROW((void)p.weight(0, 7), Error);
    auto heavy = graph_from_edges(2, {{0, 1, 187}});
    EXPECT_EQ(heavy.weight(1, 0), 187u);
}

TEST(CoGraph, ResolveByKeyOrLabel) {
    TitleRecord r;
    r.title_id = "tt1";
    r.title = "One";
    r.cast = {"nm1", "nm2", "nm3"};
    const std::unordered_map<std::string, std::string> names{{"nm1", "Ann"}, {"nm2", "Bob"}, {"nm3", "Ann"}};
    const auto g = project(build_bipartite({r}, {}, &names));
    EXPECT_EQ(g.resolve("Bob"), 1u);
    EXPECT_EQ(g.resolve("nm3"), 2u);
    try {
        g.resolve("Ann");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AmbiguousActor);
    }
    try {
        g.resolve("Zed");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownActor);
    }
}

// Random bipartite fixtures (<= 20 titles, <= 30 persons) against a double loop.
TEST(Project, MatchesBruteForceOnRandomFixtures) {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const auto persons = 1 + rng.below(30);
        const auto titles = 1 + rng.below(20);
        std::vector<TitleRecord> recs;
        std::vector<std::vector<std::size_t>> casts;
        for (std::size_t t = 0; t < titles; ++t) {
            std::set<std::size_t> cast;
            const auto size = 1 + rng.below(6);
            while (cast.size() < std::min<std::size_t>(size, persons)) cast.insert(rng.below(persons));
            std::vector<std::string> names;
            for (auto p : cast) names.push_back("p" + std::to_string(p));
            recs.push_back(title("t" + std::to_string(t), names));
            casts.emplace_back(cast.begin(), cast.end());
        }
        const auto g = project(build_bipartite(recs));
        const auto expected = brute_projection(casts);

        std::size_t degree_sum = 0, weight_sum = 0, pair_sum = 0;
        for (NodeId u = 0; u < g.node_count(); ++u) {
            degree_sum += g.degree(u);
            for (auto w : g.weights(u)) weight_sum += w;
        }
        for (const auto& c : casts) pair_sum += c.size() * (c.size() - 1) / 2;
        EXPECT_EQ(degree_sum, 2 * g.edge_count());   // handshake
        EXPECT_EQ(weight_sum / 2, pair_sum);          // sum of weights = sum C(cast, 2)
        EXPECT_EQ(g.edge_count(), expected.size());
        for (const auto& [pair, w] : expected) {
            const auto u = g.resolve("p" + std::to_string(pair.first));
            const auto v = g.resolve("p" + std::to_string(pair.second));
            EXPECT_EQ(g.weight(u, v), w);
            EXPECT_EQ(g.weight(v, u), w);
            EXPECT_EQ(g.titles_between(u, v).size(), w);
        }
    }
}

TEST(InducedSubgraph, KeepsInternalEdgesAndTitles) {
    auto g = project(build_bipartite({title("t1", {"A", "B", "C"}), title("t2", {"C", "D"})}));
    auto sub = induced_subgraph(g, {g.resolve("D"), g.resolve("C"), g.resolve("A")});
    EXPECT_EQ(sub.node_count(), 3u);
    EXPECT_EQ(sub.edge_count(), 2u); // A-C and C-D
    EXPECT_EQ(sub.label(0), "A");
    const auto t = sub.titles_between(sub.resolve("C"), sub.resolve("D"));
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(sub.title_name(t[0]), "Title t2");
}

TEST(GraphCache, RoundTripPreservesEverything) {
    Rng rng(5);
    std::vector<TitleRecord> recs;
    for (int t = 0; t < 40; ++t) {
        std::vector<std::string> cast;
        for (int k = 0; k < 4; ++k) cast.push_back("p" + std::to_string(rng.below(25)));
        std::sort(cast.begin(), cast.end());
        cast.erase(std::unique(cast.begin(), cast.end()), cast.end());
        auto r = title("t" + std::to_string(t), cast);
        if (t % 3) r.country = "C" + std::to_string(t % 4);
        recs.push_back(r);
    }
    for (bool keep : {true, false}) {
        const auto g = project(build_bipartite(recs), keep);
        std::stringstream buf;
        save_cache(buf, g);
        const auto back = load_cache(buf);
        EXPECT_TRUE(back == g);
        EXPECT_EQ(back.keys(), g.keys()); // identical index assignment
    }
}

TEST(GraphCache, RejectsBadMagicVersionAndTruncation) {
    const auto g = castnet::testing::two_triangles();
    std::stringstream buf;
    save_cache(buf, g);
    const auto bytes = buf.str();

    auto expect_cache_error = [](const std::string& data) {
        std::istringstream in(data);
        try {
            load_cache(in);
            FAIL() << "expected CacheFormat";
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::CacheFormat);
        }
    };
    auto wrong_magic = bytes;
    wrong_magic[0] = 'X';
    expect_cache_error(wrong_magic);
    auto wrong_version = bytes;
    wrong_version[8] = 99;
    expect_cache_error(wrong_version);
    expect_cache_error(bytes.substr(0, bytes.size() / 2));
}

TEST(GraphExport, DotAndGraphml) {
    auto g = graph_from_edges({"A \"x\"", "B&C"}, {{0, 1, 3}});
    std::ostringstream dot, xml;
    write_dot(dot, g);
    write_graphml(xml, g);
    EXPECT_NE(dot.str().find("n0 -- n1 [weight=3]"), std::string::npos);
    EXPECT_NE(dot.str().find("label=\"A \\\"x\\\"\""), std::string::npos);
    EXPECT_NE(xml.str().find("<data key=\"name\">B&amp;C</data>"), std::string::npos);
    EXPECT_NE(xml.str().find("<data key=\"weight\">3</data>"), std::string::npos);
}
