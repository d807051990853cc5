#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "castnet/error.hpp"
#include "castnet/ingest.hpp"

namespace castnet {

using Json = nlohmann::ordered_json;

namespace detail {

template <class T>
Json optional_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

inline std::string iso_date(const CalendarDate& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

inline CalendarDate parse_iso_date(const std::string& s) {
    CalendarDate d;
    if (std::sscanf(s.c_str(), "%d-%d-%d", &d.year, &d.month, &d.day) != 3)
        throw Error(ErrorCode::BadValue, "bad date '" + s + "'");
    return d;
}

template <class T>
std::optional<T> optional_from(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<T>();
}

} // namespace detail

inline Json to_json(const TitleRecord& r) {
    Json j;
    j["title_id"] = r.title_id;
    j["title"] = r.title;
    j["kind"] = std::string(to_string(r.kind));
    j["release_year"] = detail::optional_json(r.release_year);
    j["directors"] = r.directors;
    j["cast"] = r.cast;
    j["country"] = detail::optional_json(r.country);
    j["language_hint"] = detail::optional_json(r.language_hint);
    j["rating"] = detail::optional_json(r.rating);
    j["date_added"] = r.date_added ? Json(detail::iso_date(*r.date_added)) : Json(nullptr);
    j["duration"] = detail::optional_json(r.duration);
    j["genres"] = r.genres;
    return j;
}

inline TitleRecord title_from_json(const Json& j) {
    TitleRecord r;
    r.title_id = j.at("title_id").get<std::string>();
    r.title = j.at("title").get<std::string>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "Movie") {
        r.kind = TitleKind::Movie;
    } else if (kind == "TvShow") {
        r.kind = TitleKind::TvShow;
    } else {
        throw Error(ErrorCode::BadValue, "unknown kind '" + kind + "'");
    }
    r.release_year = detail::optional_from<int>(j, "release_year");
    r.directors = j.value("directors", std::vector<std::string>{});
    r.cast = j.value("cast", std::vector<std::string>{});
    r.country = detail::optional_from<std::string>(j, "country");
    r.language_hint = detail::optional_from<std::string>(j, "language_hint");
    r.rating = detail::optional_from<std::string>(j, "rating");
    if (auto d = detail::optional_from<std::string>(j, "date_added")) r.date_added = detail::parse_iso_date(*d);
    r.duration = detail::optional_from<std::string>(j, "duration");
    r.genres = j.value("genres", std::vector<std::string>{});
    return r;
}

inline Json to_json(const PersonRecord& p) {
    Json roles = Json::array();
    for (auto role : p.roles) roles.push_back(role == PersonRole::Actor ? "Actor" : "Director");
    return Json{{"person_id", p.person_id}, {"name", p.name}, {"roles", roles}};
}

inline PersonRecord person_from_json(const Json& j) {
    PersonRecord p;
    p.person_id = j.at("person_id").get<std::string>();
    p.name = j.at("name").get<std::string>();
    for (const auto& role : j.value("roles", Json::array())) {
        const auto s = role.get<std::string>();
        if (s == "Actor") {
            p.roles.insert(PersonRole::Actor);
        } else if (s == "Director") {
            p.roles.insert(PersonRole::Director);
        } else {
            throw Error(ErrorCode::BadValue, "unknown role '" + s + "'");
        }
    }
    return p;
}

template <class Record>
void write_jsonl(std::ostream& out, const std::vector<Record>& items) {
    for (const auto& item : items) out << to_json(item).dump() << '\n';
}

namespace detail {

template <class Parse>
auto read_jsonl(std::istream& in, Parse parse) {
    std::vector<decltype(parse(Json{}))> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(parse(Json::parse(line)));
        } catch (const Json::exception& e) {
            throw Error(ErrorCode::BadValue, "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

} // namespace detail

inline std::vector<TitleRecord> read_titles_jsonl(std::istream& in) {
    return detail::read_jsonl(in, title_from_json);
}

inline std::vector<PersonRecord> read_persons_jsonl(std::istream& in) {
    return detail::read_jsonl(in, person_from_json);
}

} // namespace castnet
