#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "castnet/detail/csv.hpp"
#include "castnet/detail/gzip.hpp"
#include "castnet/error.hpp"

namespace castnet {

enum class TitleKind { Movie, TvShow };

inline std::string_view to_string(TitleKind kind) {
    return kind == TitleKind::Movie ? "Movie" : "TvShow";
}

struct CalendarDate {
    int year = 0;
    int month = 0;
    int day = 0;

    friend bool operator==(const CalendarDate&, const CalendarDate&) = default;
};

inline constexpr int kMinYear = 1870;
inline constexpr int kMaxYear = 2100;

/// One catalog entry. `cast` and `directors` hold person keys: the
/// normalized name for Netflix, the nconst for IMDb.
struct TitleRecord {
    std::string title_id;
    std::string title;
    TitleKind kind = TitleKind::Movie;
    std::optional<int> release_year;
    std::vector<std::string> directors;
    std::vector<std::string> cast;
    std::optional<std::string> country;
    std::optional<std::string> language_hint;
    std::optional<std::string> rating;
    std::optional<CalendarDate> date_added;
    std::optional<std::string> duration;
    std::vector<std::string> genres;

    friend bool operator==(const TitleRecord&, const TitleRecord&) = default;
};

enum class PersonRole { Actor, Director };

struct PersonRecord {
    std::string person_id;
    std::string name;
    std::set<PersonRole> roles;

    friend bool operator==(const PersonRecord&, const PersonRecord&) = default;
};

struct RowIssue {
    std::size_t row = 0;  // 1-based data row (header excluded)
    std::size_t line = 0; // physical line the row starts on
    ErrorCode code = ErrorCode::BadValue;
    std::string detail;
};

/// Per-file accounting. Invariant: accepted + skipped == data_rows.
struct IngestReport {
    static constexpr std::size_t kMaxStoredIssues = 100;

    std::size_t data_rows = 0;
    std::size_t accepted = 0;
    std::size_t skipped = 0;
    std::map<std::string, std::size_t> skipped_by_reason;
    std::vector<RowIssue> issues; // first kMaxStoredIssues error rows only

    void skip(std::string_view reason) {
        ++skipped;
        ++skipped_by_reason[std::string(reason)];
    }

    void skip(std::size_t row, std::size_t line, ErrorCode code, std::string detail) {
        skip(to_string(code));
        if (issues.size() < kMaxStoredIssues) issues.push_back({row, line, code, std::move(detail)});
    }
};

inline bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

/// Trims and collapses internal whitespace runs to one space. Case is kept.
inline std::string normalize_name(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

/// Comma-split, normalize, drop empties and repeated entries (first wins).
inline std::vector<std::string> split_names(std::string_view cell) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= cell.size()) {
        auto comma = cell.find(',', start);
        if (comma == std::string_view::npos) comma = cell.size();
        auto name = normalize_name(cell.substr(start, comma - start));
        if (!name.empty() && std::find(out.begin(), out.end(), name) == out.end())
            out.push_back(std::move(name));
        start = comma + 1;
    }
    return out;
}

namespace detail {

inline std::optional<int> parse_int(std::string_view s) {
    auto t = normalize_name(s);
    int value = 0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (t.empty() || ec != std::errc{} || ptr != last) return std::nullopt;
    return value;
}

inline std::optional<int> parse_year(std::string_view s) {
    auto y = parse_int(s);
    if (!y || *y < kMinYear || *y > kMaxYear) return std::nullopt;
    return y;
}

/// "September 25, 2021" (Kaggle date_added format).
inline std::optional<CalendarDate> parse_long_date(std::string_view raw) {
    static constexpr std::string_view kMonths[] = {"January", "February", "March",     "April",
                                                   "May",     "June",     "July",      "August",
                                                   "September", "October", "November", "December"};
    auto s = normalize_name(raw);
    const auto sp = s.find(' ');
    const auto comma = s.find(',');
    if (sp == std::string::npos || comma == std::string::npos || comma < sp) return std::nullopt;
    const std::string_view month_name(s.data(), sp);
    int month = 0;
    for (int m = 0; m < 12; ++m)
        if (kMonths[m] == month_name) month = m + 1;
    auto day = parse_int(std::string_view(s).substr(sp + 1, comma - sp - 1));
    auto year = parse_int(std::string_view(s).substr(comma + 1));
    if (month == 0 || !day || !year || *day < 1 || *day > 31) return std::nullopt;
    return CalendarDate{*year, month, *day};
}

inline std::optional<std::string> non_empty(std::string_view s) {
    auto t = normalize_name(s);
    if (t.empty()) return std::nullopt;
    return t;
}

inline void strip_bom(std::string& s) {
    if (s.size() >= 3 && static_cast<unsigned char>(s[0]) == 0xEF &&
        static_cast<unsigned char>(s[1]) == 0xBB && static_cast<unsigned char>(s[2]) == 0xBF)
        s.erase(0, 3);
}

template <class Header>
std::size_t require_column(const Header& header, std::string_view name, std::string_view file) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw Error(ErrorCode::MissingColumn, std::string(file) + " header lacks '" + std::string(name) + "'");
}

template <class Header>
std::optional<std::size_t> find_column(const Header& header, std::string_view name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    return std::nullopt;
}

} // namespace detail

struct NetflixCatalog {
    std::vector<TitleRecord> records;
    IngestReport report;
};

/// Parses the Kaggle `netflix_titles.csv` schema (plain or gzip).
inline NetflixCatalog parse_netflix(std::istream& input) {
    detail::TextSource source(input);
    detail::CsvReader reader(source.stream());
    std::vector<std::string> header;
    if (reader.next(header) == detail::CsvReader::Status::End)
        throw Error(ErrorCode::MissingColumn, "netflix csv is empty");
    if (!header.empty()) detail::strip_bom(header.front());
    for (auto& h : header) h = normalize_name(h);

    const auto c_id = detail::require_column(header, "show_id", "netflix csv");
    const auto c_type = detail::require_column(header, "type", "netflix csv");
    const auto c_title = detail::require_column(header, "title", "netflix csv");
    const auto c_director = detail::require_column(header, "director", "netflix csv");
    const auto c_cast = detail::require_column(header, "cast", "netflix csv");
    const auto c_year = detail::require_column(header, "release_year", "netflix csv");
    const auto c_country = detail::find_column(header, "country");
    const auto c_added = detail::find_column(header, "date_added");
    const auto c_rating = detail::find_column(header, "rating");
    const auto c_duration = detail::find_column(header, "duration");
    const auto c_listed = detail::find_column(header, "listed_in");

    NetflixCatalog out;
    std::unordered_set<std::string> seen_ids;
    std::vector<std::string> row;
    for (;;) {
        const auto status = reader.next(row);
        if (status == detail::CsvReader::Status::End) break;
        auto& rep = out.report;
        const std::size_t row_no = ++rep.data_rows;
        if (status == detail::CsvReader::Status::Malformed) {
            rep.skip(row_no, reader.line(), ErrorCode::RowArity, "malformed quoted field");
            continue;
        }
        if (row.size() != header.size()) {
            rep.skip(row_no, reader.line(), ErrorCode::RowArity,
                     "expected " + std::to_string(header.size()) + " fields, got " +
                         std::to_string(row.size()));
            continue;
        }
        TitleRecord rec;
        rec.title_id = normalize_name(row[c_id]);
        if (rec.title_id.empty()) {
            rep.skip(row_no, reader.line(), ErrorCode::BadValue, "empty show_id");
            continue;
        }
        const auto type = normalize_name(row[c_type]);
        if (type == "Movie") {
            rec.kind = TitleKind::Movie;
        } else if (type == "TV Show") {
            rec.kind = TitleKind::TvShow;
        } else {
            rep.skip(row_no, reader.line(), ErrorCode::BadValue, "unknown type '" + type + "'");
            continue;
        }
        if (!seen_ids.insert(rec.title_id).second) {
            rep.skip(row_no, reader.line(), ErrorCode::DuplicateKey, "repeated show_id " + rec.title_id);
            continue;
        }
        rec.title = normalize_name(row[c_title]);
        rec.directors = split_names(row[c_director]);
        rec.cast = split_names(row[c_cast]);
        rec.release_year = detail::parse_year(row[c_year]);
        if (c_country) {
            auto countries = split_names(row[*c_country]);
            if (!countries.empty()) rec.country = countries.front();
        }
        if (c_added) rec.date_added = detail::parse_long_date(row[*c_added]);
        if (c_rating) rec.rating = detail::non_empty(row[*c_rating]);
        if (c_duration) rec.duration = detail::non_empty(row[*c_duration]);
        if (c_listed) rec.genres = split_names(row[*c_listed]);
        out.records.push_back(std::move(rec));
        ++rep.accepted;
    }
    return out;
}

/// Which IMDb titleType values are kept and what they map to.
struct TitleKindFilter {
    std::set<std::string, std::less<>> movie_types;
    std::set<std::string, std::less<>> tv_types;

    static TitleKindFilter movies() { return {{"movie"}, {}}; }
    static TitleKindFilter tv() { return {{}, {"tvSeries", "tvMiniSeries"}}; }
    static TitleKindFilter all() { return {{"movie", "tvMovie"}, {"tvSeries", "tvMiniSeries"}}; }

    std::optional<TitleKind> classify(std::string_view title_type) const {
        if (movie_types.contains(title_type)) return TitleKind::Movie;
        if (tv_types.contains(title_type)) return TitleKind::TvShow;
        return std::nullopt;
    }
};

struct ImdbCatalog {
    std::vector<TitleRecord> records;
    std::vector<PersonRecord> persons;
    IngestReport basics_report;
    IngestReport principals_report;
    IngestReport names_report;
    std::size_t dangling_cast = 0; // principals whose nconst is missing from name.basics
};

namespace detail {

inline constexpr std::string_view kImdbNull = "\\N";

inline std::optional<std::string_view> imdb_field(std::string_view v) {
    if (v == kImdbNull || v.empty()) return std::nullopt;
    return v;
}

/// Reads one TSV header, returns column lookup.
inline std::vector<std::string> read_tsv_header(std::istream& in, std::string_view file) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::MissingColumn, std::string(file) + " is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    strip_bom(line);
    std::vector<std::string_view> parts;
    split_tabs(line, parts);
    return {parts.begin(), parts.end()};
}

} // namespace detail

/// Joins title.basics, title.principals and name.basics (plain or gzip).
/// Cast/director entries of the returned records are nconst keys; the
/// persons list resolves them to primaryName.
inline ImdbCatalog parse_imdb(std::istream& basics_in, std::istream& principals_in,
                              std::istream& names_in,
                              const TitleKindFilter& filter = TitleKindFilter::movies()) {
    ImdbCatalog out;
    std::string line;
    std::vector<std::string_view> f;

    // title.basics
    detail::TextSource basics_src(basics_in);
    auto& basics = basics_src.stream();
    const auto bh = detail::read_tsv_header(basics, "title.basics");
    const auto b_id = detail::require_column(bh, "tconst", "title.basics");
    const auto b_type = detail::require_column(bh, "titleType", "title.basics");
    const auto b_title = detail::require_column(bh, "primaryTitle", "title.basics");
    const auto b_year = detail::require_column(bh, "startYear", "title.basics");
    const auto b_genres = detail::find_column(bh, "genres");

    // every tconst in basics, kept or not, so filtered titles are not
    // mistaken for dangling references; hashed to bound memory on full dumps
    std::unordered_set<std::size_t> all_titles;
    std::unordered_map<std::string, std::size_t> kept; // tconst -> record index
    std::size_t line_no = 1;
    while (std::getline(basics, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto& rep = out.basics_report;
        const auto row_no = ++rep.data_rows;
        detail::split_tabs(line, f);
        if (f.size() != bh.size()) {
            rep.skip(row_no, line_no, ErrorCode::RowArity,
                     "expected " + std::to_string(bh.size()) + " fields, got " + std::to_string(f.size()));
            continue;
        }
        const std::string id(f[b_id]);
        if (id.empty()) {
            rep.skip(row_no, line_no, ErrorCode::BadValue, "empty tconst");
            continue;
        }
        if (!all_titles.insert(std::hash<std::string>{}(id)).second) {
            rep.skip(row_no, line_no, ErrorCode::DuplicateKey, "repeated tconst " + id);
            continue;
        }
        const auto kind = filter.classify(f[b_type]);
        if (!kind) {
            rep.skip("filtered_kind");
            continue;
        }
        TitleRecord rec;
        rec.title_id = id;
        rec.title = normalize_name(f[b_title]);
        rec.kind = *kind;
        if (auto y = detail::imdb_field(f[b_year])) rec.release_year = detail::parse_year(*y);
        if (b_genres)
            if (auto g = detail::imdb_field(f[*b_genres])) rec.genres = split_names(*g);
        kept.emplace(id, out.records.size());
        out.records.push_back(std::move(rec));
        ++rep.accepted;
    }

    // title.principals
    struct Credit {
        int ordering;
        std::string nconst;
    };
    std::vector<std::vector<Credit>> cast(out.records.size());
    std::vector<std::vector<Credit>> directors(out.records.size());
    std::unordered_set<std::string> wanted_people;

    detail::TextSource principals_src(principals_in);
    auto& principals = principals_src.stream();
    const auto ph = detail::read_tsv_header(principals, "title.principals");
    const auto p_title = detail::require_column(ph, "tconst", "title.principals");
    const auto p_order = detail::require_column(ph, "ordering", "title.principals");
    const auto p_person = detail::require_column(ph, "nconst", "title.principals");
    const auto p_cat = detail::require_column(ph, "category", "title.principals");
    line_no = 1;
    while (std::getline(principals, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto& rep = out.principals_report;
        const auto row_no = ++rep.data_rows;
        detail::split_tabs(line, f);
        if (f.size() != ph.size()) {
            rep.skip(row_no, line_no, ErrorCode::RowArity,
                     "expected " + std::to_string(ph.size()) + " fields, got " + std::to_string(f.size()));
            continue;
        }
        const auto category = f[p_cat];
        const bool acting = category == "actor" || category == "actress";
        const bool directing = category == "director";
        if (!acting && !directing) {
            rep.skip("ignored_category");
            continue;
        }
        const std::string tconst(f[p_title]);
        auto it = kept.find(tconst);
        if (it == kept.end()) {
            if (all_titles.contains(std::hash<std::string>{}(tconst))) {
                rep.skip("filtered_title");
            } else {
                rep.skip(row_no, line_no, ErrorCode::DanglingReference, "unknown tconst " + tconst);
            }
            continue;
        }
        const auto ordering = detail::parse_int(f[p_order]).value_or(0);
        std::string nconst(f[p_person]);
        if (nconst.empty() || nconst == detail::kImdbNull) {
            rep.skip(row_no, line_no, ErrorCode::BadValue, "empty nconst");
            continue;
        }
        wanted_people.insert(nconst);
        (acting ? cast : directors)[it->second].push_back({ordering, std::move(nconst)});
        ++rep.accepted;
    }

    // name.basics, only for people referenced above
    std::unordered_map<std::string, std::string> names;
    detail::TextSource names_src(names_in);
    auto& names_stream = names_src.stream();
    const auto nh = detail::read_tsv_header(names_stream, "name.basics");
    const auto n_id = detail::require_column(nh, "nconst", "name.basics");
    const auto n_name = detail::require_column(nh, "primaryName", "name.basics");
    line_no = 1;
    while (std::getline(names_stream, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto& rep = out.names_report;
        const auto row_no = ++rep.data_rows;
        detail::split_tabs(line, f);
        if (f.size() != nh.size()) {
            rep.skip(row_no, line_no, ErrorCode::RowArity,
                     "expected " + std::to_string(nh.size()) + " fields, got " + std::to_string(f.size()));
            continue;
        }
        std::string id(f[n_id]);
        if (!wanted_people.contains(id)) {
            rep.skip("unreferenced");
            continue;
        }
        auto name = normalize_name(detail::imdb_field(f[n_name]).value_or(std::string_view{}));
        if (name.empty()) name = id;
        if (!names.emplace(std::move(id), std::move(name)).second) {
            rep.skip(row_no, line_no, ErrorCode::DuplicateKey, "repeated nconst");
            continue;
        }
        ++rep.accepted;
    }

    std::unordered_map<std::string, std::size_t> person_index;
    auto resolve = [&](std::vector<Credit>& credits, std::vector<std::string>& dest, PersonRole role) {
        std::stable_sort(credits.begin(), credits.end(),
                         [](const Credit& a, const Credit& b) { return a.ordering < b.ordering; });
        for (auto& c : credits) {
            auto name = names.find(c.nconst);
            if (name == names.end()) {
                // dangling nconst: drop the credit, count against principals
                ++out.dangling_cast;
                auto& rep = out.principals_report;
                --rep.accepted;
                rep.skip(to_string(ErrorCode::DanglingReference));
                continue;
            }
            if (std::find(dest.begin(), dest.end(), c.nconst) != dest.end()) continue;
            dest.push_back(c.nconst);
            auto [pos, fresh] = person_index.emplace(c.nconst, out.persons.size());
            if (fresh) out.persons.push_back({c.nconst, name->second, {}});
            out.persons[pos->second].roles.insert(role);
        }
    };
    for (std::size_t t = 0; t < out.records.size(); ++t) {
        resolve(cast[t], out.records[t].cast, PersonRole::Actor);
        resolve(directors[t], out.records[t].directors, PersonRole::Director);
    }
    return out;
}

/// person key -> display name, for labeling graph nodes.
inline std::unordered_map<std::string, std::string> name_lookup(const std::vector<PersonRecord>& persons) {
    std::unordered_map<std::string, std::string> out;
    out.reserve(persons.size());
    for (const auto& p : persons) out.emplace(p.person_id, p.name);
    return out;
}

} // namespace castnet
