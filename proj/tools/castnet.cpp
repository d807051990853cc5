// castnet: command-line front end. Every subcommand writes its results
// into --out and finishes with run_report.json there.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "castnet/castnet.hpp"

namespace fs = std::filesystem;
using namespace castnet;

namespace {

struct RunConfig {
    std::string source = "netflix";
    std::string netflix;
    std::string basics;
    std::string principals;
    std::string names;
    std::string imdb_kinds = "movies";
    std::string records;
    std::string persons;
    std::string graph;
    std::string kind;
    std::optional<int> year_from;
    std::optional<int> year_to;
    std::size_t min_cast = 1;
    std::size_t max_cast = 500;
    std::uint64_t seed = 42;
    std::string out = "castnet-out";
    std::string format = "csv";
    unsigned threads = 0;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string data_path(const std::string& given, const std::vector<std::string>& candidates) {
    if (!given.empty()) return given;
    const char* root = std::getenv("CASTNET_DATA_DIR");
    if (!root) return {};
    for (const auto& name : candidates) {
        auto p = fs::path(root) / name;
        if (fs::exists(p)) return p.string();
    }
    return (fs::path(root) / candidates.front()).string();
}

std::ifstream open_in(const std::string& path, const char* what) {
    if (path.empty()) throw UsageError(std::string("no ") + what + " path given (flag or CASTNET_DATA_DIR)");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, std::string("cannot open ") + what + " '" + path + "'");
    return in;
}

class Session {
public:
    Session(RunConfig cfg, std::string command) : cfg_(std::move(cfg)) {
        report_["command"] = std::move(command);
        report_["seed"] = cfg_.seed;
        report_["source"] = cfg_.source;
        report_["outputs"] = Json::array();
        report_["warnings"] = Json::array();
        fs::create_directories(cfg_.out);
    }

    const RunConfig& cfg() const { return cfg_; }
    Json& report() { return report_; }

    void warn(const std::string& msg) {
        std::cerr << "castnet: warning: " << msg << '\n';
        report_["warnings"].push_back(msg);
    }

    void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
        const auto path = fs::path(cfg_.out) / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
        body(out);
        if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
        report_["outputs"].push_back(name);
    }

    void write_json(const std::string& name, const Json& j) {
        write(name, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
    }

    const std::vector<TitleRecord>& records() {
        if (!records_) load_records();
        return *records_;
    }

    /// nconst -> name for IMDb; null for Netflix (keys are names).
    const std::unordered_map<std::string, std::string>* names() {
        records();
        return names_.empty() ? nullptr : &names_;
    }

    const std::vector<PersonRecord>& persons() {
        records();
        return persons_;
    }

    BuildFilters filters() const {
        BuildFilters f;
        if (cfg_.kind == "movie") f.kind = TitleKind::Movie;
        else if (cfg_.kind == "tv") f.kind = TitleKind::TvShow;
        else if (!cfg_.kind.empty()) throw UsageError("--kind must be movie or tv");
        if (cfg_.year_from || cfg_.year_to) f.year_range = std::pair{cfg_.year_from.value_or(kMinYear), cfg_.year_to.value_or(kMaxYear)};
        f.min_cast = cfg_.min_cast;
        f.max_cast = cfg_.max_cast;
        return f;
    }

    const CoGraph& graph() {
        if (graph_) return *graph_;
        if (!cfg_.graph.empty()) {
            auto in = open_in(cfg_.graph, "graph cache");
            try {
                graph_ = load_cache(in);
                report_["graph"] = {{"cache", cfg_.graph}};
            } catch (const Error& e) {
                if (e.code() != ErrorCode::CacheFormat) throw;
                warn(std::string("graph cache rejected (") + e.what() + "), rebuilding from records");
            }
        }
        if (!graph_) {
            const auto store = build_bipartite(records(), filters(), names());
            report_["build"] = build_report_json(store.report);
            graph_ = project(store, true);
        }
        report_["graph_nodes"] = graph_->node_count();
        report_["graph_edges"] = graph_->edge_count();
        return *graph_;
    }

    void finish() {
        std::ofstream out(fs::path(cfg_.out) / "run_report.json", std::ios::binary | std::ios::trunc);
        out << report_.dump(2) << '\n';
    }

private:
    void load_records() {
        if (!cfg_.records.empty()) {
            auto in = open_in(cfg_.records, "records");
            records_ = read_titles_jsonl(in);
            if (!cfg_.persons.empty()) {
                auto pin = open_in(cfg_.persons, "persons");
                persons_ = read_persons_jsonl(pin);
            }
            report_["records_file"] = cfg_.records;
        } else if (cfg_.source == "netflix") {
            auto in = open_in(data_path(cfg_.netflix, {"netflix_titles.csv", "netflix_titles.csv.gz"}), "netflix csv");
            auto cat = parse_netflix(in);
            report_["ingest"] = {{"netflix", ingest_report_json(cat.report)}};
            records_ = std::move(cat.records);
        } else if (cfg_.source == "imdb") {
            auto b = open_in(data_path(cfg_.basics, {"title.basics.tsv.gz", "title.basics.tsv"}), "title.basics");
            auto p = open_in(data_path(cfg_.principals, {"title.principals.tsv.gz", "title.principals.tsv"}), "title.principals");
            auto n = open_in(data_path(cfg_.names, {"name.basics.tsv.gz", "name.basics.tsv"}), "name.basics");
            TitleKindFilter filter;
            if (cfg_.imdb_kinds == "movies") filter = TitleKindFilter::movies();
            else if (cfg_.imdb_kinds == "tv") filter = TitleKindFilter::tv();
            else if (cfg_.imdb_kinds == "all") filter = TitleKindFilter::all();
            else throw UsageError("--imdb-kinds must be movies, tv or all");
            auto cat = parse_imdb(b, p, n, filter);
            report_["ingest"] = {{"title.basics", ingest_report_json(cat.basics_report)},
                                 {"title.principals", ingest_report_json(cat.principals_report)},
                                 {"name.basics", ingest_report_json(cat.names_report)},
                                 {"dangling_cast", cat.dangling_cast}};
            records_ = std::move(cat.records);
            persons_ = std::move(cat.persons);
        } else {
            throw UsageError("--source must be netflix or imdb");
        }
        names_ = name_lookup(persons_);
    }

    RunConfig cfg_;
    Json report_;
    std::optional<std::vector<TitleRecord>> records_;
    std::vector<PersonRecord> persons_;
    std::unordered_map<std::string, std::string> names_;
    std::optional<CoGraph> graph_;
};

std::optional<Measure> parse_measure(const std::string& s) {
    for (auto m : {Measure::Degree, Measure::Betweenness, Measure::Closeness, Measure::Eigenvector})
        if (to_string(m) == s) return m;
    return std::nullopt;
}

Partition run_louvain(Session& s, double resolution) {
    auto p = louvain(s.graph(), {s.cfg().seed, resolution});
    s.report()["louvain"] = partition_json(p);
    return p;
}

ClusterLabeler label_overrides(Session& s, const std::string& path) {
    auto base = country_labeler(s.graph());
    if (path.empty()) return base;
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open label file '" + path + "'");
    const auto j = Json::parse(in);
    auto overrides = std::make_shared<std::map<CommunityId, std::string>>();
    for (const auto& [k, v] : j.items()) (*overrides)[static_cast<CommunityId>(std::stoul(k))] = v.get<std::string>();
    return [base, overrides](CommunityId id, std::span<const NodeId> members) {
        auto it = overrides->find(id);
        return it != overrides->end() ? it->second : base(id, members);
    };
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"castnet: actor collaboration network analytics"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key = value config file mirroring the long options");

    RunConfig cfg;
    app.add_option("--source", cfg.source, "netflix | imdb")->capture_default_str();
    app.add_option("--netflix", cfg.netflix, "netflix_titles.csv (plain or gzip)");
    app.add_option("--basics", cfg.basics, "IMDb title.basics.tsv[.gz]");
    app.add_option("--principals", cfg.principals, "IMDb title.principals.tsv[.gz]");
    app.add_option("--names", cfg.names, "IMDb name.basics.tsv[.gz]");
    app.add_option("--imdb-kinds", cfg.imdb_kinds, "movies | tv | all")->capture_default_str();
    app.add_option("--records", cfg.records, "records.jsonl written by `ingest` (skips raw parsing)");
    app.add_option("--persons", cfg.persons, "persons.jsonl written by `ingest` (IMDb)");
    app.add_option("--graph", cfg.graph, "graph cache written by `build`");
    app.add_option("--kind", cfg.kind, "keep only movie | tv titles");
    app.add_option("--year-from", cfg.year_from, "first release year kept");
    app.add_option("--year-to", cfg.year_to, "last release year kept");
    app.add_option("--min-cast", cfg.min_cast, "drop titles with fewer cast members")->capture_default_str();
    app.add_option("--max-cast", cfg.max_cast, "reject titles with more cast members")->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed for Louvain and sampling")->capture_default_str();
    app.add_option("--out", cfg.out, "output directory")->capture_default_str();
    app.add_option("--format", cfg.format, "json | csv | dot | graphml")
        ->check(CLI::IsMember({"json", "csv", "dot", "graphml"}))
        ->capture_default_str();
    app.add_option("--threads", cfg.threads, "worker threads, 0 = auto")->capture_default_str();

    std::function<void(Session&)> action;
    auto sub = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };

    auto* ingest = sub("ingest", "parse raw catalogs into records.jsonl");
    ingest->callback([&] {
        action = [](Session& s) {
            const auto& recs = s.records();
            s.write("records.jsonl", [&](std::ostream& o) { write_jsonl(o, recs); });
            if (!s.persons().empty())
                s.write("persons.jsonl", [&](std::ostream& o) { write_jsonl(o, s.persons()); });
            s.report()["records"] = recs.size();
        };
    });

    auto* build = sub("build", "project the co-appearance graph and cache it as graph.bin");
    build->callback([&] {
        action = [](Session& s) {
            const auto& g = s.graph();
            s.write("graph.bin", [&](std::ostream& o) { save_cache(o, g); });
        };
    });

    std::size_t top = 5;
    auto* stats = sub("stats", "catalog summary, per-year counts and leaderboards");
    stats->add_option("--top", top, "leaderboard length")->capture_default_str();
    stats->callback([&] {
        action = [&top](Session& s) {
            const auto summary = summarize(s.records(), top, s.names());
            s.write_json("summary.json", summary_json(summary));
            s.write("per_year.csv", [&](std::ostream& o) { write_per_year_csv(o, summary); });
            s.write("cast_histogram.csv", [&](std::ostream& o) { write_cast_histogram_csv(o, summary); });
            s.write("top_actors.csv", [&](std::ostream& o) { write_leaderboard_csv(o, summary.top_actors); });
            s.write("top_directors.csv", [&](std::ostream& o) { write_leaderboard_csv(o, summary.top_directors); });
        };
    });

    std::string measure_name;
    EigenvectorOptions eig;
    auto* centrality = sub("centrality", "degree | betweenness | closeness | eigenvector");
    centrality->add_option("measure", measure_name)->required();
    centrality->add_option("--tol", eig.tol, "eigenvector convergence tolerance")->capture_default_str();
    centrality->add_option("--max-iter", eig.max_iter, "eigenvector iteration cap")->capture_default_str();
    centrality->callback([&] {
        action = [&](Session& s) {
            const auto m = parse_measure(measure_name);
            if (!m) throw UsageError("unknown measure '" + measure_name + "'");
            const auto& g = s.graph();
            ScoreTable t;
            switch (*m) {
            case Measure::Degree: t = degree_centrality(g); break;
            case Measure::Betweenness: t = betweenness_centrality(g, s.cfg().threads); break;
            case Measure::Closeness: t = closeness_centrality(g, s.cfg().threads); break;
            default: t = eigenvector_centrality(g, eig); break;
            }
            if (!t.converged) s.warn("eigenvector centrality did not converge within max_iter");
            const auto stem = "centrality_" + measure_name;
            if (s.cfg().format == "json") {
                s.write_json(stem + ".json", scores_json(t, g));
            } else {
                s.write(stem + ".csv", [&](std::ostream& o) { write_scores_csv(o, t, g); });
            }
            s.report()["centrality"] = {{"measure", measure_name}, {"converged", t.converged}};
        };
    });

    std::string actor_a, actor_b;
    auto* path = sub("path", "shortest collaboration path between two actors");
    path->add_option("a", actor_a)->required();
    path->add_option("b", actor_b)->required();
    path->callback([&] {
        action = [&](Session& s) {
            const auto& g = s.graph();
            const auto a = g.resolve(actor_a);
            const auto b = g.resolve(actor_b);
            const auto p = shortest_path(g, a, b);
            s.write_json("path.json", path_json(p, g, a, b));
            if (p) {
                std::cout << render(*p, g) << '\n';
            } else {
                std::cout << "unreachable\n";
            }
        };
    });

    std::size_t sample = 1000;
    auto* distances = sub("distances", "hop-distance histogram from sampled sources");
    distances->add_option("--sample", sample, "number of BFS sources")->capture_default_str();
    distances->callback([&] {
        action = [&](Session& s) {
            s.write_json("distances.json", histogram_json(distance_histogram(s.graph(), sample, s.cfg().seed)));
        };
    });

    std::size_t partners_top = 10;
    auto* partners = sub("partners", "pairs sharing the most titles");
    partners->add_option("--top", partners_top)->capture_default_str();
    partners->callback([&] {
        action = [&](Session& s) {
            const auto& g = s.graph();
            const auto ps = top_partnerships(g, partners_top);
            s.write("partners.csv", [&](std::ostream& o) { write_partnerships_csv(o, ps, g); });
        };
    });

    std::string method_name;
    std::size_t predict_top_k = 10;
    PredictOptions popt;
    auto* predict = sub("predict", "rank non-adjacent pairs by a link-prediction index");
    predict->add_option("method", method_name,
                        "common_neighbors | jaccard | resource_allocation | adamic_adar | preferential_attachment")
        ->required();
    predict->add_option("--top", predict_top_k)->capture_default_str();
    predict->add_option("--min-common", popt.min_common)->capture_default_str();
    predict->add_flag("--allow-zero-common", popt.allow_zero_common,
                      "preferential_attachment only: admit pairs without common neighbors");
    predict->add_option("--cap", popt.candidate_cap, "candidate pair limit")->capture_default_str();
    predict->callback([&] {
        action = [&](Session& s) {
            const auto m = parse_link_index(method_name);
            if (!m) throw UsageError("unknown method '" + method_name + "'");
            const auto& g = s.graph();
            const auto pred = predict_top(g, *m, predict_top_k, popt);
            const auto stem = "predict_" + method_name;
            if (s.cfg().format == "json") {
                s.write_json(stem + ".json", predictions_json(pred, g));
            } else {
                s.write(stem + ".csv", [&](std::ostream& o) { write_predictions_csv(o, pred, g); });
            }
            s.report()["predict"] = {{"method", method_name}, {"candidates", pred.candidates}};
        };
    });

    double resolution = 1.0;
    std::optional<CommunityId> within;
    auto* communities = sub("communities", "Louvain partition and modularity");
    communities->add_option("--resolution", resolution)->capture_default_str();
    communities->add_option("--within", within, "re-run Louvain inside one community of the top-level partition");
    communities->callback([&] {
        action = [&](Session& s) {
            auto p = run_louvain(s, resolution);
            const CoGraph* g = &s.graph();
            std::optional<CoGraph> sub_graph;
            if (within) {
                const auto members = community_members(p);
                if (*within >= members.size()) throw UsageError("--within names a community that does not exist");
                sub_graph = induced_subgraph(*g, members[*within]);
                if (sub_graph->edge_count() == 0) throw Error(ErrorCode::EmptyGraph, "community has no internal edges");
                p = louvain(*sub_graph, {s.cfg().seed, resolution});
                g = &*sub_graph;
                s.report()["within"] = {{"community", *within}, {"louvain", partition_json(p)}};
            }
            s.write("partition.csv", [&](std::ostream& o) { write_partition_csv(o, p, *g); });
            s.write_json("communities.json", partition_json(p));
        };
    });

    double tau = 0.05;
    std::string labels_file;
    auto* clusters = sub("clusters", "community meta-graph filtered by interaction frequency");
    clusters->add_option("--tau", tau, "minimum interaction frequency, in (0, 1]")->capture_default_str();
    clusters->add_option("--labels", labels_file, "JSON map community id -> label");
    clusters->add_option("--resolution", resolution)->capture_default_str();
    clusters->callback([&] {
        action = [&](Session& s) {
            const auto p = run_louvain(s, resolution);
            const auto full = build_cluster_graph(s.graph(), p, label_overrides(s, labels_file));
            const auto kept = filter_interactions(full, tau);
            s.write_json("clusters.json", cluster_graph_json(kept));
            s.write("clusters.dot", [&](std::ostream& o) { write_cluster_dot(o, kept); });
            s.report()["clusters"] = {{"tau", tau}, {"links_total", full.links.size()}, {"links_kept", kept.links.size()}};
        };
    });

    std::size_t crossover_top = 20;
    auto* crossover = sub("crossover", "participation coefficient of every actor");
    crossover->add_option("--top", crossover_top)->capture_default_str();
    crossover->callback([&] {
        action = [&](Session& s) {
            const auto p = run_louvain(s, 1.0);
            const auto t = crossover_scores(s.graph(), p);
            s.write("crossover.csv", [&](std::ostream& o) { write_scores_csv(o, t, s.graph()); });
        };
    });

    int window = 10, step = 5;
    auto* evolve = sub("evolve", "Louvain per sliding year window, matched across windows");
    evolve->add_option("--window", window)->capture_default_str();
    evolve->add_option("--step", step)->capture_default_str();
    evolve->callback([&] {
        action = [&](Session& s) {
            const auto tl = community_evolution(s.records(), window, step, s.cfg().seed, s.filters(), s.names());
            s.write_json("evolution.json", timeline_json(tl));
        };
    });

    auto* exporter = sub("export", "write the graph as DOT or GraphML (--format)");
    exporter->callback([&] {
        action = [](Session& s) {
            const auto& g = s.graph();
            if (s.cfg().format == "graphml") {
                s.write("graph.graphml", [&](std::ostream& o) { write_graphml(o, g); });
            } else if (s.cfg().format == "dot") {
                s.write("graph.dot", [&](std::ostream& o) { write_dot(o, g); });
            } else {
                throw UsageError("export needs --format dot or graphml");
            }
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        Session session(cfg, app.get_subcommands().front()->get_name());
        try {
            action(session);
        } catch (const std::exception& e) {
            session.report()["error"] = e.what();
            session.finish();
            throw;
        }
        session.finish();
    } catch (const UsageError& e) {
        std::cerr << "castnet: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "castnet: " << e.what() << '\n';
        return e.code() == ErrorCode::InvalidArgument ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "castnet: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
