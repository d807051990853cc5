#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "castnet/centrality.hpp"
#include "castnet/error.hpp"
#include "castnet/graph.hpp"
#include "castnet/ingest.hpp"
#include "castnet/rng.hpp"

namespace castnet {

using CommunityId = std::uint32_t;

struct Partition {
    std::vector<CommunityId> assignment; // contiguous ids, numbered by first member id
    std::size_t community_count = 0;
    double q = 0;
    std::uint64_t seed = 0;
    double resolution = 1.0;
    std::size_t passes = 0;           // local-moving sweeps over all levels
    std::size_t levels = 0;           // aggregation levels that moved at least one node
    std::vector<double> q_history;    // modularity on the input graph after every sweep
};

/// Weighted modularity sum_c (e_c/m - resolution * (d_c/2m)^2), with e_c
/// the weight inside c and d_c its total weighted degree.
inline double modularity(const CoGraph& g, std::span<const CommunityId> assignment, double resolution = 1.0) {
    if (assignment.size() != g.node_count())
        throw Error(ErrorCode::InvalidArgument, "assignment covers " + std::to_string(assignment.size()) +
                                                    " nodes, graph has " + std::to_string(g.node_count()));
    const double m = g.total_edge_weight();
    if (m <= 0) throw Error(ErrorCode::EmptyGraph, "modularity is undefined without edges");
    CommunityId top = 0;
    for (auto c : assignment) top = std::max(top, c);
    std::vector<double> inside(static_cast<std::size_t>(top) + 1, 0.0);
    std::vector<double> volume(static_cast<std::size_t>(top) + 1, 0.0);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto nbrs = g.neighbors(u);
        const auto ws = g.weights(u);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            volume[assignment[u]] += ws[i];
            if (assignment[nbrs[i]] == assignment[u]) inside[assignment[u]] += ws[i];
        }
    }
    double q = 0;
    for (std::size_t c = 0; c < inside.size(); ++c) {
        const double frac = volume[c] / (2 * m);
        q += (inside[c] / 2) / m - resolution * frac * frac;
    }
    return q;
}

namespace detail {

/// Aggregated graph used inside Louvain. Self-loop weight counts internal
/// edges once; a node's degree is its incident weight plus twice its loop.
struct LevelGraph {
    std::vector<std::uint64_t> offsets{0};
    std::vector<std::uint32_t> targets;
    std::vector<double> weights;
    std::vector<double> loops;

    std::size_t size() const { return loops.size(); }

    static LevelGraph from(const CoGraph& g) {
        LevelGraph lg;
        lg.loops.assign(g.node_count(), 0.0);
        for (NodeId u = 0; u < g.node_count(); ++u) {
            for (auto v : g.neighbors(u)) lg.targets.push_back(v);
            for (auto w : g.weights(u)) lg.weights.push_back(w);
            lg.offsets.push_back(lg.targets.size());
        }
        return lg;
    }
};

/// Renumbers arbitrary labels to 0..k-1 in order of first appearance.
inline std::size_t compact(std::vector<CommunityId>& labels) {
    std::unordered_map<CommunityId, CommunityId> remap;
    for (auto& c : labels) {
        auto [it, fresh] = remap.emplace(c, static_cast<CommunityId>(remap.size()));
        c = it->second;
    }
    return remap.size();
}

} // namespace detail

struct LouvainOptions {
    std::uint64_t seed = 42;
    double resolution = 1.0;
    std::size_t max_sweeps_per_level = 1000;
};

/// Two-phase Louvain on the weighted graph. Each sweep visits nodes in a
/// fresh seeded Fisher-Yates order and moves a node to the neighboring
/// community with the largest modularity gain when that gain beats staying
/// put; sweeps repeat until nothing moves, then communities are collapsed
/// into nodes and the process restarts. Stops when a level moves nothing.
inline Partition louvain(const CoGraph& g, const LouvainOptions& opt = {}) {
    const double m = g.total_edge_weight();
    if (m <= 0) throw Error(ErrorCode::EmptyGraph, "louvain needs at least one edge");
    const double two_m = 2 * m;
    const double gamma = opt.resolution;
    // moves must clear this margin over staying put; keeps float noise from
    // producing zero-gain moves that could cycle
    constexpr double kMinGain = 1e-12;

    Rng rng(opt.seed);
    Partition part;
    part.seed = opt.seed;
    part.resolution = gamma;
    std::vector<CommunityId> node_to_comm(g.node_count());
    std::iota(node_to_comm.begin(), node_to_comm.end(), CommunityId{0});

    detail::LevelGraph level = detail::LevelGraph::from(g);
    for (;;) {
        const std::size_t n = level.size();
        std::vector<double> degree(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double k = 2 * level.loops[i];
            for (auto e = level.offsets[i]; e < level.offsets[i + 1]; ++e) k += level.weights[e];
            degree[i] = k;
        }
        std::vector<CommunityId> comm(n);
        std::iota(comm.begin(), comm.end(), CommunityId{0});
        std::vector<double> tot(degree);

        std::vector<double> link(n, 0.0);
        std::vector<CommunityId> seen;
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), std::uint32_t{0});

        bool level_moved = false;
        for (std::size_t sweep = 0; sweep < opt.max_sweeps_per_level; ++sweep) {
            rng.shuffle(std::span<std::uint32_t>(order));
            std::size_t moves = 0;
            for (auto i : order) {
                const auto own = comm[i];
                seen.clear();
                link[own] = 0;
                seen.push_back(own);
                for (auto e = level.offsets[i]; e < level.offsets[i + 1]; ++e) {
                    const auto c = comm[level.targets[e]];
                    if (link[c] == 0 && c != own) seen.push_back(c); // weights are positive
                    link[c] += level.weights[e];
                }
                tot[own] -= degree[i];
                const double k = degree[i];
                auto gain = [&](CommunityId c) { return link[c] - gamma * tot[c] * k / two_m; };
                const double stay = gain(own);
                CommunityId best = own;
                double best_gain = stay;
                for (auto c : seen) {
                    const double gc = gain(c);
                    if (gc > best_gain) {
                        best = c;
                        best_gain = gc;
                    }
                }
                if (best != own && best_gain - stay > kMinGain) {
                    comm[i] = best;
                    ++moves;
                } else {
                    best = own;
                }
                tot[best] += degree[i];
                for (auto c : seen) link[c] = 0;
            }
            ++part.passes;
            std::vector<CommunityId> flat(g.node_count());
            for (NodeId u = 0; u < g.node_count(); ++u) flat[u] = comm[node_to_comm[u]];
            part.q_history.push_back(modularity(g, flat, gamma));
            if (moves == 0) break;
            level_moved = true;
        }
        if (!level_moved) break;
        ++part.levels;

        const auto k = detail::compact(comm);
        for (auto& c : node_to_comm) c = comm[c];

        // collapse communities into nodes
        std::vector<std::vector<std::uint32_t>> members(k);
        for (std::uint32_t i = 0; i < n; ++i) members[comm[i]].push_back(i);
        detail::LevelGraph next;
        next.loops.assign(k, 0.0);
        std::vector<double> acc(k, 0.0);
        std::vector<CommunityId> touched;
        for (CommunityId c = 0; c < k; ++c) {
            touched.clear();
            double inside = 0;
            for (auto i : members[c]) {
                inside += 2 * level.loops[i];
                for (auto e = level.offsets[i]; e < level.offsets[i + 1]; ++e) {
                    const auto d = comm[level.targets[e]];
                    if (d == c) {
                        inside += level.weights[e];
                        continue;
                    }
                    if (acc[d] == 0) touched.push_back(d);
                    acc[d] += level.weights[e];
                }
            }
            next.loops[c] = inside / 2;
            std::sort(touched.begin(), touched.end());
            for (auto d : touched) {
                next.targets.push_back(d);
                next.weights.push_back(acc[d]);
                acc[d] = 0;
            }
            next.offsets.push_back(next.targets.size());
        }
        level = std::move(next);
        if (level.size() == 1) break;
    }
    part.assignment = std::move(node_to_comm);
    part.community_count = detail::compact(part.assignment);
    part.q = modularity(g, part.assignment, gamma);
    return part;
}

/// Member node ids of every community, ascending.
inline std::vector<std::vector<NodeId>> community_members(const Partition& p) {
    std::vector<std::vector<NodeId>> out(p.community_count);
    for (NodeId u = 0; u < p.assignment.size(); ++u) out.at(p.assignment[u]).push_back(u);
    return out;
}

struct ClusterInfo {
    std::string label;
    std::size_t size = 0;
    double volume = 0; // total incident edge weight of members
};

struct ClusterLink {
    CommunityId a; // a < b
    CommunityId b;
    double weight = 0;
    double frequency = 0; // weight / min(volume a, volume b)
};

struct ClusterGraph {
    std::vector<ClusterInfo> clusters;
    std::vector<ClusterLink> links; // sorted by (a, b)
};

using ClusterLabeler = std::function<std::string(CommunityId, std::span<const NodeId>)>;

/// Each actor's most frequent title country (ties: smallest name), then the
/// plurality of those over a cluster's members; "cluster-<id>" when no
/// member has a country.
inline ClusterLabeler country_labeler(const CoGraph& g) {
    auto home = std::make_shared<std::vector<std::string>>(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
        std::map<std::string, std::size_t> counts;
        for (auto t : g.titles_of(u))
            if (!g.title_country(t).empty()) ++counts[g.title_country(t)];
        std::size_t best = 0;
        for (const auto& [country, c] : counts)
            if (c > best) {
                best = c;
                (*home)[u] = country;
            }
    }
    return [home](CommunityId id, std::span<const NodeId> members) {
        std::map<std::string, std::size_t> counts;
        for (auto u : members)
            if (!(*home)[u].empty()) ++counts[(*home)[u]];
        std::string label = "cluster-" + std::to_string(id);
        std::size_t best = 0;
        for (const auto& [country, c] : counts)
            if (c > best) {
                best = c;
                label = country;
            }
        return label;
    };
}

inline ClusterGraph build_cluster_graph(const CoGraph& g, const Partition& p, const ClusterLabeler& labeler = {}) {
    if (p.assignment.size() != g.node_count()) throw Error(ErrorCode::InvalidArgument, "partition does not match graph");
    const auto members = community_members(p);
    const auto label_of = labeler ? labeler : country_labeler(g);
    ClusterGraph cg;
    cg.clusters.resize(p.community_count);
    std::map<std::pair<CommunityId, CommunityId>, double> between;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto cu = p.assignment[u];
        const auto nbrs = g.neighbors(u);
        const auto ws = g.weights(u);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            cg.clusters[cu].volume += ws[i];
            const auto cv = p.assignment[nbrs[i]];
            if (cu < cv) between[{cu, cv}] += ws[i];
        }
    }
    for (CommunityId c = 0; c < p.community_count; ++c) {
        cg.clusters[c].size = members[c].size();
        cg.clusters[c].label = label_of(c, members[c]);
    }
    for (const auto& [key, w] : between) {
        const double smaller = std::min(cg.clusters[key.first].volume, cg.clusters[key.second].volume);
        cg.links.push_back({key.first, key.second, w, w / smaller});
    }
    return cg;
}

/// Keeps links with frequency >= tau; clusters are always kept.
inline ClusterGraph filter_interactions(const ClusterGraph& cg, double tau) {
    if (!(tau > 0 && tau <= 1)) throw Error(ErrorCode::InvalidArgument, "tau must lie in (0, 1]");
    ClusterGraph out;
    out.clusters = cg.clusters;
    for (const auto& l : cg.links)
        if (l.frequency >= tau) out.links.push_back(l);
    return out;
}

/// Participation coefficient 1 - sum_c (k_uc / k_u)^2 over unweighted
/// edge counts; 0 for isolated nodes.
inline ScoreTable crossover_scores(const CoGraph& g, const Partition& p) {
    if (p.assignment.size() != g.node_count()) throw Error(ErrorCode::InvalidArgument, "partition does not match graph");
    ScoreTable t{Measure::Participation, std::vector<double>(g.node_count(), 0.0), {}, true};
    std::vector<std::size_t> per(p.community_count, 0);
    std::vector<CommunityId> seen;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto k = g.degree(u);
        if (k == 0) continue;
        seen.clear();
        for (auto v : g.neighbors(u)) {
            const auto c = p.assignment[v];
            if (per[c]++ == 0) seen.push_back(c);
        }
        std::sort(seen.begin(), seen.end());
        double sum = 0;
        for (auto c : seen) {
            const double f = static_cast<double>(per[c]) / static_cast<double>(k);
            sum += f * f;
            per[c] = 0;
        }
        t.scores[u] = 1.0 - sum;
    }
    return t;
}

enum class WindowStatus { Ok, NoTitles, NoEdges };

struct EvolutionWindow {
    int first_year = 0;
    int last_year = 0;
    WindowStatus status = WindowStatus::Ok;
    Partition partition;
    std::vector<std::string> keys;                // person key per node of the window graph
    std::vector<std::string> community_labels;    // per community
};

struct CommunityMatch {
    CommunityId from;
    std::optional<CommunityId> to; // none when the later window is empty
    double overlap = 0;            // Jaccard of member key sets
};

struct EvolutionTimeline {
    std::vector<EvolutionWindow> windows;
    std::vector<std::vector<CommunityMatch>> matches; // matches[i]: window i -> i+1
};

/// Best-overlap match of every community in `from` to one in `to`.
/// Ties prefer the smaller community label, then the smaller id.
inline std::vector<CommunityMatch> match_communities(const EvolutionWindow& from, const EvolutionWindow& to) {
    std::vector<CommunityMatch> out;
    if (from.status != WindowStatus::Ok) return out;
    std::unordered_map<std::string, CommunityId> later;
    std::vector<std::size_t> later_size(to.partition.community_count, 0);
    if (to.status == WindowStatus::Ok) {
        for (std::size_t u = 0; u < to.keys.size(); ++u) {
            later.emplace(to.keys[u], to.partition.assignment[u]);
            ++later_size[to.partition.assignment[u]];
        }
    }
    const auto members = community_members(from.partition);
    for (CommunityId c = 0; c < members.size(); ++c) {
        CommunityMatch m{c, std::nullopt, 0.0};
        if (to.status == WindowStatus::Ok) {
            std::vector<std::size_t> inter(to.partition.community_count, 0);
            for (auto u : members[c]) {
                auto it = later.find(from.keys[u]);
                if (it != later.end()) ++inter[it->second];
            }
            for (CommunityId d = 0; d < inter.size(); ++d) {
                const double uni = static_cast<double>(members[c].size() + later_size[d] - inter[d]);
                const double j = static_cast<double>(inter[d]) / uni;
                const bool better = !m.to || j > m.overlap ||
                                    (j == m.overlap && to.community_labels[d] < to.community_labels[*m.to]);
                if (better) {
                    m.to = d;
                    m.overlap = j;
                }
            }
        }
        out.push_back(m);
    }
    return out;
}

/// Sliding year windows [start, start + window - 1], advancing by `step`
/// from the earliest release year; Louvain per window, then consecutive
/// windows are matched by member overlap. `filters.year_range` is ignored.
inline EvolutionTimeline community_evolution(const std::vector<TitleRecord>& records, int window_years, int step_years,
                                             std::uint64_t seed, BuildFilters filters = {},
                                             const std::unordered_map<std::string, std::string>* names = nullptr) {
    if (step_years < 1 || window_years < step_years)
        throw Error(ErrorCode::InvalidArgument, "need window >= step >= 1");
    std::optional<int> lo, hi;
    for (const auto& r : records) {
        if (!r.release_year) continue;
        lo = std::min(lo.value_or(*r.release_year), *r.release_year);
        hi = std::max(hi.value_or(*r.release_year), *r.release_year);
    }
    if (!lo) throw Error(ErrorCode::EmptyInput, "no record carries a release year");
    EvolutionTimeline tl;
    for (int start = *lo; start <= *hi; start += step_years) {
        EvolutionWindow w;
        w.first_year = start;
        w.last_year = start + window_years - 1;
        filters.year_range = std::pair{w.first_year, w.last_year};
        try {
            const auto store = build_bipartite(records, filters, names);
            const auto g = project(store, false);
            w.keys = g.keys();
            if (g.edge_count() == 0) {
                w.status = WindowStatus::NoEdges;
            } else {
                w.partition = louvain(g, {seed, 1.0});
                const auto label = country_labeler(g);
                const auto members = community_members(w.partition);
                for (CommunityId c = 0; c < members.size(); ++c) w.community_labels.push_back(label(c, members[c]));
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptyInput) throw;
            w.status = WindowStatus::NoTitles;
        }
        tl.windows.push_back(std::move(w));
    }
    for (std::size_t i = 0; i + 1 < tl.windows.size(); ++i)
        tl.matches.push_back(match_communities(tl.windows[i], tl.windows[i + 1]));
    return tl;
}

} // namespace castnet
