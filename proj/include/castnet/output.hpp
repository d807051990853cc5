#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>

#include "castnet/centrality.hpp"
#include "castnet/community.hpp"
#include "castnet/graph_io.hpp"
#include "castnet/linkpred.hpp"
#include "castnet/paths.hpp"
#include "castnet/records_io.hpp"
#include "castnet/stats.hpp"

// Serializers for every result type. Reals are printed with 6 significant
// digits so output files are stable across runs.

namespace castnet {

inline std::string fmt6(double x) {
    if (x == 0) return "0"; // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

/// Rounded the same way fmt6 prints, for JSON numbers.
inline double round6(double x) {
    if (x == 0 || !std::isfinite(x)) return x == 0 ? 0.0 : x;
    return std::stod(fmt6(x));
}

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline void write_scores_csv(std::ostream& out, const ScoreTable& t, const CoGraph& g) {
    out << "name,score\n";
    for (const auto& [u, s] : ranked(t, g)) out << csv_field(g.label(u)) << ',' << fmt6(s) << '\n';
}

inline Json scores_json(const ScoreTable& t, const CoGraph& g, std::size_t top = SIZE_MAX) {
    Json params = Json::object();
    for (const auto& [k, v] : t.params) params[k] = round6(v);
    Json rows = Json::array();
    for (const auto& [u, s] : ranked(t, g)) {
        if (rows.size() >= top) break;
        rows.push_back({{"name", g.label(u)}, {"score", round6(s)}});
    }
    return {{"measure", std::string(to_string(t.measure))}, {"converged", t.converged}, {"params", params},
            {"scores", rows}};
}

inline Json path_json(const std::optional<AnnotatedPath>& p, const CoGraph& g, NodeId a, NodeId b) {
    Json j{{"from", g.label(a)}, {"to", g.label(b)}};
    if (!p) {
        j["reachable"] = false;
        return j;
    }
    j["reachable"] = true;
    j["length"] = p->length();
    Json hops = Json::array();
    for (const auto& h : p->hops) hops.push_back({{"from", h.from}, {"to", h.to}, {"titles", h.titles}});
    j["hops"] = hops;
    return j;
}

inline Json histogram_json(const DistanceHistogram& h) {
    Json counts = Json::object();
    for (const auto& [d, c] : h.counts) counts[std::to_string(d)] = c;
    return {{"sources", h.sources}, {"counts", counts}, {"unreachable", h.unreachable}};
}

inline void write_partnerships_csv(std::ostream& out, const std::vector<Partnership>& ps, const CoGraph& g) {
    out << "actor_a,actor_b,shared_titles\n";
    for (const auto& p : ps) out << csv_field(g.label(p.a)) << ',' << csv_field(g.label(p.b)) << ',' << p.shared_titles << '\n';
}

inline void write_predictions_csv(std::ostream& out, const Prediction& pred, const CoGraph& g) {
    out << "actor_a,actor_b,method,score\n";
    for (const auto& p : pred.top)
        out << csv_field(g.label(p.u)) << ',' << csv_field(g.label(p.v)) << ',' << to_string(p.method) << ','
            << fmt6(p.score) << '\n';
}

inline Json predictions_json(const Prediction& pred, const CoGraph& g) {
    Json rows = Json::array();
    for (const auto& p : pred.top)
        rows.push_back({{"u", g.label(p.u)}, {"v", g.label(p.v)}, {"method", std::string(to_string(p.method))},
                        {"score", round6(p.score)}});
    return {{"candidates", pred.candidates}, {"pairs", rows}};
}

inline void write_partition_csv(std::ostream& out, const Partition& p, const CoGraph& g) {
    out << "name,community\n";
    for (NodeId u = 0; u < g.node_count(); ++u) out << csv_field(g.label(u)) << ',' << p.assignment[u] << '\n';
}

inline Json partition_json(const Partition& p) {
    Json hist = Json::array();
    for (auto q : p.q_history) hist.push_back(round6(q));
    return {{"communities", p.community_count}, {"modularity", round6(p.q)}, {"seed", p.seed},
            {"resolution", round6(p.resolution)}, {"passes", p.passes}, {"levels", p.levels},
            {"modularity_per_pass", hist}};
}

inline Json cluster_graph_json(const ClusterGraph& cg) {
    Json clusters = Json::array();
    for (CommunityId c = 0; c < cg.clusters.size(); ++c)
        clusters.push_back({{"id", c}, {"label", cg.clusters[c].label}, {"size", cg.clusters[c].size},
                            {"volume", round6(cg.clusters[c].volume)}});
    Json links = Json::array();
    for (const auto& l : cg.links)
        links.push_back({{"a", l.a}, {"b", l.b}, {"weight", round6(l.weight)}, {"frequency", round6(l.frequency)}});
    return {{"clusters", clusters}, {"links", links}};
}

/// Cluster nodes sized by membership, edges labeled with frequency.
inline void write_cluster_dot(std::ostream& out, const ClusterGraph& cg) {
    out << "graph clusters {\n";
    for (CommunityId c = 0; c < cg.clusters.size(); ++c) {
        const auto& info = cg.clusters[c];
        out << "  c" << c << " [label=" << detail::dot_quote(info.label + " (" + std::to_string(info.size) + ")")
            << ", width=" << fmt6(0.3 + std::sqrt(static_cast<double>(info.size)) / 10) << "];\n";
    }
    for (const auto& l : cg.links)
        out << "  c" << l.a << " -- c" << l.b << " [label=\"" << fmt6(l.frequency) << "\", weight=" << fmt6(l.weight)
            << "];\n";
    out << "}\n";
}

inline Json timeline_json(const EvolutionTimeline& tl) {
    Json windows = Json::array();
    for (const auto& w : tl.windows) {
        std::string status = w.status == WindowStatus::Ok ? "ok" : w.status == WindowStatus::NoTitles ? "no_titles" : "no_edges";
        Json jw{{"first_year", w.first_year}, {"last_year", w.last_year}, {"status", status}, {"actors", w.keys.size()}};
        if (w.status == WindowStatus::Ok) {
            jw["communities"] = w.partition.community_count;
            jw["modularity"] = round6(w.partition.q);
            jw["labels"] = w.community_labels;
        }
        windows.push_back(jw);
    }
    Json matches = Json::array();
    for (const auto& step : tl.matches) {
        Json js = Json::array();
        for (const auto& m : step)
            js.push_back({{"from", m.from}, {"to", m.to ? Json(*m.to) : Json(nullptr)}, {"overlap", round6(m.overlap)}});
        matches.push_back(js);
    }
    return {{"windows", windows}, {"matches", matches}};
}

inline Json summary_json(const CatalogSummary& s) {
    Json per_year = Json::array();
    for (const auto& [y, c] : s.per_year) per_year.push_back({{"year", y}, {"movies", c.movies}, {"tv", c.tv}});
    Json hist = Json::array();
    for (const auto& [size, c] : s.cast_histogram) hist.push_back({{"cast_size", size}, {"count", c}});
    auto board = [](const auto& rows) {
        Json out = Json::array();
        for (const auto& [name, c] : rows) out.push_back({{"name", name}, {"count", c}});
        return out;
    };
    Json ratings = Json::object();
    for (const auto& [r, c] : s.rating_counts) ratings[r] = c;
    return {{"total_titles", s.total_titles},
            {"type_totals", {{"movies", s.type_totals.movies}, {"tv", s.type_totals.tv}}},
            {"unknown_year", s.unknown_year},
            {"mean_cast_size", round6(s.mean_cast_size)},
            {"per_year", per_year},
            {"cast_histogram", hist},
            {"top_actors", board(s.top_actors)},
            {"top_directors", board(s.top_directors)},
            {"rating_counts", ratings},
            {"unrated", s.unrated}};
}

inline void write_per_year_csv(std::ostream& out, const CatalogSummary& s) {
    out << "year,movies,tv\n";
    for (const auto& [y, c] : s.per_year) out << y << ',' << c.movies << ',' << c.tv << '\n';
}

inline void write_cast_histogram_csv(std::ostream& out, const CatalogSummary& s) {
    out << "cast_size,count\n";
    for (const auto& [size, c] : s.cast_histogram) out << size << ',' << c << '\n';
}

inline void write_leaderboard_csv(std::ostream& out, const std::vector<std::pair<std::string, std::size_t>>& rows) {
    out << "name,count\n";
    for (const auto& [name, c] : rows) out << csv_field(name) << ',' << c << '\n';
}

inline Json ingest_report_json(const IngestReport& r) {
    Json reasons = Json::object();
    for (const auto& [k, v] : r.skipped_by_reason) reasons[k] = v;
    Json issues = Json::array();
    for (const auto& i : r.issues)
        issues.push_back({{"row", i.row}, {"line", i.line}, {"code", std::string(to_string(i.code))}, {"detail", i.detail}});
    return {{"data_rows", r.data_rows}, {"accepted", r.accepted}, {"skipped", r.skipped},
            {"skipped_by_reason", reasons}, {"issues", issues}};
}

inline Json build_report_json(const BuildReport& r) {
    return {{"titles_in", r.titles_in},
            {"titles_kept", r.titles_kept},
            {"excluded_kind", r.excluded_kind},
            {"excluded_year", r.excluded_year},
            {"excluded_small_cast", r.excluded_small_cast},
            {"rejected_large_cast", r.rejected_large_cast}};
}

} // namespace castnet
