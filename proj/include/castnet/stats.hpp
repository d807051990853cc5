#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "castnet/ingest.hpp"

namespace castnet {

struct YearCounts {
    std::size_t movies = 0;
    std::size_t tv = 0;
    friend bool operator==(const YearCounts&, const YearCounts&) = default;
};

struct CatalogSummary {
    std::size_t total_titles = 0;
    std::map<int, YearCounts> per_year;
    std::size_t unknown_year = 0;
    std::map<std::size_t, std::size_t> cast_histogram; // cast size -> titles
    double mean_cast_size = 0;
    std::vector<std::pair<std::string, std::size_t>> top_actors;
    std::vector<std::pair<std::string, std::size_t>> top_directors;
    YearCounts type_totals;
    std::map<std::string, std::size_t> rating_counts;
    std::size_t unrated = 0;

    friend bool operator==(const CatalogSummary&, const CatalogSummary&) = default;
};

namespace detail {

/// Full leaderboard: descending count, ties by ascending name.
inline std::vector<std::pair<std::string, std::size_t>> leaderboard(const std::unordered_map<std::string, std::size_t>& counts,
                                                                    std::size_t k) {
    std::vector<std::pair<std::string, std::size_t>> all(counts.begin(), counts.end());
    auto ahead = [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    };
    const auto keep = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), ahead);
    all.resize(keep);
    return all;
}

} // namespace detail

/// Catalog-level counts and leaderboards. Person keys are mapped through
/// `names` when given (IMDb nconst -> primaryName); each person counts at
/// most once per title.
inline CatalogSummary summarize(const std::vector<TitleRecord>& records, std::size_t top_k = 5,
                                const std::unordered_map<std::string, std::string>* names = nullptr) {
    CatalogSummary s;
    std::unordered_map<std::string, std::size_t> actors;
    std::unordered_map<std::string, std::size_t> directors;
    auto display = [&](const std::string& key) -> const std::string& {
        if (names) {
            auto it = names->find(key);
            if (it != names->end()) return it->second;
        }
        return key;
    };
    std::size_t cast_total = 0;
    for (const auto& r : records) {
        ++s.total_titles;
        auto& bucket = r.kind == TitleKind::Movie ? s.type_totals.movies : s.type_totals.tv;
        ++bucket;
        if (r.release_year) {
            auto& y = s.per_year[*r.release_year];
            ++(r.kind == TitleKind::Movie ? y.movies : y.tv);
        } else {
            ++s.unknown_year;
        }
        ++s.cast_histogram[r.cast.size()];
        cast_total += r.cast.size();
        // ingest dedupes keys; keys with equal display names still count once
        std::vector<const std::string*> seen;
        for (const auto& a : r.cast) {
            const auto& name = display(a);
            if (std::none_of(seen.begin(), seen.end(), [&](auto* p) { return *p == name; })) {
                seen.push_back(&name);
                ++actors[name];
            }
        }
        seen.clear();
        for (const auto& d : r.directors) {
            const auto& name = display(d);
            if (std::none_of(seen.begin(), seen.end(), [&](auto* p) { return *p == name; })) {
                seen.push_back(&name);
                ++directors[name];
            }
        }
        if (r.rating) {
            ++s.rating_counts[*r.rating];
        } else {
            ++s.unrated;
        }
    }
    if (s.total_titles) s.mean_cast_size = static_cast<double>(cast_total) / static_cast<double>(s.total_titles);
    s.top_actors = detail::leaderboard(actors, top_k);
    s.top_directors = detail::leaderboard(directors, top_k);
    return s;
}

} // namespace castnet
