#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "castnet/detail/parallel.hpp"
#include "castnet/error.hpp"
#include "castnet/graph.hpp"

namespace castnet {

enum class Measure { Degree, Betweenness, Closeness, Eigenvector, Participation };

inline std::string_view to_string(Measure m) {
    switch (m) {
    case Measure::Degree: return "degree";
    case Measure::Betweenness: return "betweenness";
    case Measure::Closeness: return "closeness";
    case Measure::Eigenvector: return "eigenvector";
    case Measure::Participation: return "participation";
    }
    return "unknown";
}

struct ScoreTable {
    Measure measure = Measure::Degree;
    std::vector<double> scores; // indexed by NodeId
    std::map<std::string, double> params;
    bool converged = true;
};

/// Nodes by descending score, ties by ascending label then id.
inline std::vector<std::pair<NodeId, double>> ranked(const ScoreTable& table, const CoGraph& g) {
    std::vector<std::pair<NodeId, double>> out;
    out.reserve(table.scores.size());
    for (NodeId u = 0; u < table.scores.size(); ++u) out.emplace_back(u, table.scores[u]);
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        if (g.label(a.first) != g.label(b.first)) return g.label(a.first) < g.label(b.first);
        return a.first < b.first;
    });
    return out;
}

namespace detail {

inline void require_nodes(const CoGraph& g, std::size_t at_least, Measure m) {
    if (g.node_count() < at_least)
        throw Error(ErrorCode::TooFewNodes, std::string(to_string(m)) + " needs at least " + std::to_string(at_least) +
                                                " nodes, graph has " + std::to_string(g.node_count()));
}

struct SweepResult {
    std::vector<double> betweenness_raw; // ordered-pair sums
    std::vector<double> closeness;
};

/// Closed-twin quotient: nodes with equal closed neighborhoods N[u] share a
/// class. Twins have the same distances to everything else, and no shortest
/// path runs through a twin of its own endpoint, so one BFS per class with
/// class sizes as multiplicities gives exact per-node results. Actors who
/// appear in a single title collapse into one class per title.
struct TwinQuotient {
    std::vector<std::uint32_t> class_of;  // node -> class, classes numbered by smallest member
    std::vector<double> size;             // members per class
    std::vector<std::uint64_t> offsets;   // class adjacency (CSR)
    std::vector<std::uint32_t> targets;

    std::size_t class_count() const { return size.size(); }
    std::span<const std::uint32_t> neighbors(std::uint32_t c) const {
        return {targets.data() + offsets[c], targets.data() + offsets[c + 1]};
    }
};

inline bool closed_twins(const CoGraph& g, NodeId u, NodeId v) {
    // u and v adjacent with equal degree: compare N(u) - {v} with N(v) - {u}
    auto a = g.neighbors(u), b = g.neighbors(v);
    std::size_t i = 0, j = 0;
    for (;;) {
        if (i < a.size() && a[i] == v) ++i;
        if (j < b.size() && b[j] == u) ++j;
        if (i == a.size() || j == b.size()) return i == a.size() && j == b.size();
        if (a[i] != b[j]) return false;
        ++i;
        ++j;
    }
}

inline TwinQuotient twin_quotient(const CoGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::uint64_t> hash(n, 0);
    auto mix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    for (NodeId u = 0; u < n; ++u) {
        std::uint64_t h = mix(u);
        for (auto v : g.neighbors(u)) h += mix(v);
        hash[u] = h;
    }
    std::vector<NodeId> rep(n);
    for (NodeId u = 0; u < n; ++u) {
        rep[u] = u;
        for (auto v : g.neighbors(u)) {
            if (v >= u) break;
            if (rep[v] == v && g.degree(v) == g.degree(u) && hash[v] == hash[u] && closed_twins(g, u, v)) {
                rep[u] = v;
                break;
            }
        }
    }
    TwinQuotient q;
    q.class_of.resize(n);
    for (NodeId u = 0; u < n; ++u) {
        if (rep[u] == u) {
            q.class_of[u] = static_cast<std::uint32_t>(q.size.size());
            q.size.push_back(0.0);
        } else {
            q.class_of[u] = q.class_of[rep[u]];
        }
        q.size[q.class_of[u]] += 1.0;
    }
    q.offsets.push_back(0);
    std::vector<std::uint32_t> mark(q.class_count(), UINT32_MAX);
    for (NodeId u = 0; u < n; ++u) {
        if (rep[u] != u) continue;
        const auto c = q.class_of[u];
        mark[c] = c;
        const auto first = q.targets.size();
        for (auto v : g.neighbors(u)) {
            const auto d = q.class_of[v];
            if (mark[d] != c) {
                mark[d] = c;
                q.targets.push_back(d);
            }
        }
        std::sort(q.targets.begin() + static_cast<std::ptrdiff_t>(first), q.targets.end());
        q.offsets.push_back(q.targets.size());
    }
    return q;
}

/// One BFS per twin class on the unweighted graph. Brandes dependency
/// accumulation (with class multiplicities) gives betweenness; the same BFS
/// gives reach and distance sums for closeness. Sources are cut into fixed
/// blocks whose partial sums are merged in block order, so results do not
/// depend on `threads`.
inline SweepResult shortest_path_sweep(const CoGraph& g, bool betweenness, bool closeness, unsigned threads) {
    const std::size_t n = g.node_count();
    const auto q = twin_quotient(g);
    const std::size_t k = q.class_count();
    std::vector<double> class_bw(betweenness ? k : 0, 0.0);
    std::vector<double> class_cl(closeness ? k : 0, 0.0);

    std::mutex merge_mu;
    std::map<std::size_t, std::vector<double>> finished;
    std::size_t next_merge = 0;

    for_each_block(k, threads, [&](std::size_t block, std::size_t lo, std::size_t hi) {
        std::vector<double> partial(betweenness ? k : 0, 0.0);
        std::vector<std::int32_t> dist(k, -1);
        std::vector<double> sigma(k, 0.0);
        std::vector<double> delta(k, 0.0);
        std::vector<std::uint32_t> order;
        order.reserve(k);
        for (std::size_t s = lo; s < hi; ++s) {
            order.clear();
            const auto src = static_cast<std::uint32_t>(s);
            const double twins = q.size[src] - 1; // the source's own class, all at distance 1
            dist[src] = 0;
            sigma[src] = 1.0;
            order.push_back(src);
            double reach = twins;
            double dist_sum = twins;
            for (std::size_t head = 0; head < order.size(); ++head) {
                const auto v = order[head];
                const auto dv = dist[v];
                // paths leave the source through the source node itself only
                const double through = v == src ? sigma[v] : sigma[v] * q.size[v];
                for (auto w : q.neighbors(v)) {
                    if (dist[w] < 0) {
                        dist[w] = dv + 1;
                        reach += q.size[w];
                        dist_sum += q.size[w] * (dv + 1);
                        order.push_back(w);
                    }
                    if (dist[w] == dv + 1) sigma[w] += through;
                }
            }
            if (closeness && reach > 0)
                class_cl[src] = (reach / static_cast<double>(n - 1)) * (reach / dist_sum);
            if (betweenness) {
                for (auto it = order.rbegin(); it != order.rend(); ++it) {
                    const auto w = *it;
                    const double coeff = q.size[w] * (1.0 + delta[w]) / sigma[w];
                    const auto dw = dist[w];
                    for (auto v : q.neighbors(w))
                        if (dist[v] == dw - 1) delta[v] += sigma[v] * coeff;
                    if (w != src) partial[w] += q.size[src] * delta[w];
                }
            }
            for (auto v : order) {
                dist[v] = -1;
                sigma[v] = 0.0;
                delta[v] = 0.0;
            }
        }
        if (!betweenness) return;
        std::lock_guard lock(merge_mu);
        finished.emplace(block, std::move(partial));
        for (auto it = finished.find(next_merge); it != finished.end(); it = finished.find(next_merge)) {
            for (std::size_t c = 0; c < k; ++c) class_bw[c] += it->second[c];
            finished.erase(it);
            ++next_merge;
        }
    });

    SweepResult result;
    if (betweenness) {
        result.betweenness_raw.resize(n);
        for (NodeId u = 0; u < n; ++u) result.betweenness_raw[u] = class_bw[q.class_of[u]];
    }
    if (closeness) {
        result.closeness.resize(n);
        for (NodeId u = 0; u < n; ++u) result.closeness[u] = class_cl[q.class_of[u]];
    }
    return result;
}

} // namespace detail

/// degree / (g - 1)
inline ScoreTable degree_centrality(const CoGraph& g) {
    detail::require_nodes(g, 2, Measure::Degree);
    ScoreTable t{Measure::Degree, std::vector<double>(g.node_count()), {}, true};
    const double denom = static_cast<double>(g.node_count() - 1);
    for (NodeId u = 0; u < g.node_count(); ++u) t.scores[u] = static_cast<double>(g.degree(u)) / denom;
    return t;
}

/// Shortest-path betweenness over ordered pairs, divided by (g-1)(g-2).
/// Edge weights are ignored.
inline ScoreTable betweenness_centrality(const CoGraph& g, unsigned threads = 1) {
    detail::require_nodes(g, 3, Measure::Betweenness);
    auto sweep = detail::shortest_path_sweep(g, true, false, threads);
    const double n = static_cast<double>(g.node_count());
    const double denom = (n - 1) * (n - 2);
    for (auto& s : sweep.betweenness_raw) s /= denom;
    return {Measure::Betweenness, std::move(sweep.betweenness_raw), {{"normalization", denom}}, true};
}

/// (r/(g-1)) * (r/S) with r reachable nodes at total distance S; 0 when
/// nothing is reachable. Equals (g-1)/S on connected graphs.
inline ScoreTable closeness_centrality(const CoGraph& g, unsigned threads = 1) {
    detail::require_nodes(g, 2, Measure::Closeness);
    auto sweep = detail::shortest_path_sweep(g, false, true, threads);
    return {Measure::Closeness, std::move(sweep.closeness), {}, true};
}

/// Betweenness and closeness from a single BFS sweep.
inline std::pair<ScoreTable, ScoreTable> betweenness_and_closeness(const CoGraph& g, unsigned threads = 1) {
    detail::require_nodes(g, 3, Measure::Betweenness);
    auto sweep = detail::shortest_path_sweep(g, true, true, threads);
    const double n = static_cast<double>(g.node_count());
    const double denom = (n - 1) * (n - 2);
    for (auto& s : sweep.betweenness_raw) s /= denom;
    return {ScoreTable{Measure::Betweenness, std::move(sweep.betweenness_raw), {{"normalization", denom}}, true},
            ScoreTable{Measure::Closeness, std::move(sweep.closeness), {}, true}};
}

struct EigenvectorOptions {
    double tol = 1e-10;
    std::size_t max_iter = 1000;
};

/// Power iteration for the dominant eigenvector of the binary adjacency
/// matrix. Iterates with A + I: same eigenvectors, but the spectrum is
/// shifted so bipartite graphs (paths, stars) converge instead of
/// oscillating between +lambda and -lambda. L2-normalized; lambda is the
/// Rayleigh quotient of the final iterate. On max_iter the last iterate is
/// returned with converged = false.
inline ScoreTable eigenvector_centrality(const CoGraph& g, EigenvectorOptions opt = {}) {
    detail::require_nodes(g, 2, Measure::Eigenvector);
    if (g.edge_count() == 0) throw Error(ErrorCode::EmptyGraph, "eigenvector centrality needs at least one edge");
    const std::size_t n = g.node_count();
    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> y(n);
    bool converged = false;
    std::size_t iter = 0;
    double last_change = 0;
    while (iter < opt.max_iter) {
        ++iter;
        for (NodeId v = 0; v < n; ++v) {
            double acc = x[v];
            for (auto t : g.neighbors(v)) acc += x[t];
            y[v] = acc;
        }
        double norm = 0;
        for (auto val : y) norm += val * val;
        norm = std::sqrt(norm);
        double change = 0;
        for (std::size_t v = 0; v < n; ++v) {
            y[v] /= norm;
            change += (y[v] - x[v]) * (y[v] - x[v]);
        }
        x.swap(y);
        last_change = std::sqrt(change);
        if (last_change < opt.tol) {
            converged = true;
            break;
        }
    }
    double lambda = 0;
    for (NodeId v = 0; v < n; ++v) {
        double ax = 0;
        for (auto t : g.neighbors(v)) ax += x[t];
        lambda += x[v] * ax;
    }
    ScoreTable t{Measure::Eigenvector, std::move(x), {}, converged};
    t.params["lambda"] = lambda;
    t.params["iterations"] = static_cast<double>(iter);
    t.params["tol"] = opt.tol;
    t.params["max_iter"] = static_cast<double>(opt.max_iter);
    t.params["final_change"] = last_change;
    return t;
}

} // namespace castnet
