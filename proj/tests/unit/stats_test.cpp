#include <gtest/gtest.h>

#include "castnet/stats.hpp"
#include "castnet/rng.hpp"

using namespace castnet;

namespace {

TitleRecord title(std::string id, TitleKind kind, std::optional<int> year, std::vector<std::string> cast,
                  std::vector<std::string> directors = {}, std::optional<std::string> rating = std::nullopt) {
    TitleRecord r;
    r.title_id = id;
    r.title = id;
    r.kind = kind;
    r.release_year = year;
    r.cast = std::move(cast);
    r.directors = std::move(directors);
    r.rating = std::move(rating);
    return r;
}

} // namespace

TEST(Summarize, HandFixture) {
    const std::vector<TitleRecord> recs{
        title("a", TitleKind::Movie, 2019, {"P", "Q", "R", "S"}, {"D1"}, "PG"),
        title("b", TitleKind::Movie, 2019, {"P"}, {"D1", "D2"}, "PG"),
        title("c", TitleKind::TvShow, 2019, {}, {}, "TV-14"),
        title("d", TitleKind::TvShow, std::nullopt, {"Q", "P"}),
    };
    const auto s = summarize(recs, 2);
    EXPECT_EQ(s.total_titles, 4u);
    EXPECT_EQ(s.per_year.at(2019), (YearCounts{2, 1}));
    EXPECT_EQ(s.unknown_year, 1u);
    EXPECT_EQ(s.type_totals, (YearCounts{2, 2}));
    EXPECT_EQ(s.cast_histogram, (std::map<std::size_t, std::size_t>{{0, 1}, {1, 1}, {2, 1}, {4, 1}}));
    EXPECT_DOUBLE_EQ(s.mean_cast_size, 7.0 / 4.0);
    using Board = std::vector<std::pair<std::string, std::size_t>>;
    EXPECT_EQ(s.top_actors, (Board{{"P", 3}, {"Q", 2}}));
    EXPECT_EQ(s.top_directors, (Board{{"D1", 2}, {"D2", 1}}));
    EXPECT_EQ(s.rating_counts.at("PG"), 2u);
    EXPECT_EQ(s.unrated, 1u);
}

TEST(Summarize, DisplayNamesMergeKeys) {
    const std::unordered_map<std::string, std::string> names{{"nm1", "Pat"}, {"nm2", "Pat"}, {"nm3", "Quinn"}};
    const std::vector<TitleRecord> recs{title("a", TitleKind::Movie, 2000, {"nm1", "nm2", "nm3"}),
                                        title("b", TitleKind::Movie, 2000, {"nm2"})};
    const auto s = summarize(recs, 5, &names);
    ASSERT_EQ(s.top_actors.size(), 2u);
    EXPECT_EQ(s.top_actors[0], (std::pair<std::string, std::size_t>{"Pat", 2}));
    EXPECT_EQ(s.top_actors[1], (std::pair<std::string, std::size_t>{"Quinn", 1}));
}

TEST(Summarize, RandomCatalogProperties) {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<TitleRecord> recs;
        const auto n = 1 + rng.below(80);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::string> cast, dirs;
            for (std::size_t k = 0, c = rng.below(6); k < c; ++k) {
                auto p = "p" + std::to_string(rng.below(15));
                if (std::find(cast.begin(), cast.end(), p) == cast.end()) cast.push_back(p);
            }
            if (rng.below(2)) dirs.push_back("d" + std::to_string(rng.below(4)));
            const std::optional<int> year = rng.below(10) ? std::optional<int>(2000 + static_cast<int>(rng.below(5))) : std::nullopt;
            recs.push_back(title(std::to_string(i), rng.below(2) ? TitleKind::Movie : TitleKind::TvShow, year, cast, dirs));
        }
        const auto s = summarize(recs, 10);

        std::size_t per_year_total = s.unknown_year, hist_total = 0;
        for (const auto& [y, c] : s.per_year) per_year_total += c.movies + c.tv;
        for (const auto& [size, c] : s.cast_histogram) hist_total += c;
        EXPECT_EQ(per_year_total, n);
        EXPECT_EQ(hist_total, n);
        EXPECT_EQ(s.type_totals.movies + s.type_totals.tv, n);

        // order of records does not matter
        auto shuffled = recs;
        rng.shuffle(std::span<TitleRecord>(shuffled));
        EXPECT_EQ(summarize(shuffled, 10), s);

        // a shorter leaderboard is a prefix of a longer one
        for (std::size_t k = 1; k <= 10; ++k) {
            const auto small = summarize(recs, k);
            ASSERT_LE(small.top_actors.size(), s.top_actors.size());
            EXPECT_TRUE(std::equal(small.top_actors.begin(), small.top_actors.end(), s.top_actors.begin()));
            EXPECT_TRUE(std::equal(small.top_directors.begin(), small.top_directors.end(), s.top_directors.begin()));
        }
        for (std::size_t i = 1; i < s.top_actors.size(); ++i) EXPECT_GE(s.top_actors[i - 1].second, s.top_actors[i].second);
    }
}
