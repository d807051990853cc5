#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "castnet/error.hpp"
#include "castnet/graph.hpp"
#include "castnet/rng.hpp"

namespace castnet {

struct PathHop {
    std::string from;
    std::string to;
    std::vector<std::string> titles; // sorted by title name
};

struct AnnotatedPath {
    std::vector<NodeId> nodes; // a .. b
    std::vector<PathHop> hops;

    std::size_t length() const { return hops.size(); }
};

/// BFS hop distances from `source`; -1 marks unreachable nodes.
inline std::vector<std::int32_t> bfs_distances(const CoGraph& g, NodeId source) {
    std::vector<std::int32_t> dist(g.node_count(), -1);
    std::vector<NodeId> queue{source};
    dist[source] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto v = queue[head];
        for (auto w : g.neighbors(v)) {
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

/// Shortest unweighted path; among equal-length paths the one with the
/// lexicographically smallest label sequence. nullopt when unreachable.
inline std::optional<AnnotatedPath> shortest_path(const CoGraph& g, NodeId a, NodeId b) {
    (void)g.degree(a); // range checks
    const auto to_b = bfs_distances(g, b);
    if (to_b[a] < 0) return std::nullopt;
    AnnotatedPath path;
    path.nodes.push_back(a);
    auto current = a;
    while (current != b) {
        std::optional<NodeId> best;
        for (auto w : g.neighbors(current)) {
            if (to_b[w] != to_b[current] - 1) continue;
            if (!best || g.label(w) < g.label(*best)) best = w; // ids ascend, so equal labels keep the lower id
        }
        current = *best;
        path.nodes.push_back(current);
    }
    for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
        const auto u = path.nodes[i];
        const auto v = path.nodes[i + 1];
        PathHop hop{g.label(u), g.label(v), {}};
        for (auto t : g.titles_between(u, v)) hop.titles.push_back(g.title_name(t));
        std::sort(hop.titles.begin(), hop.titles.end());
        path.hops.push_back(std::move(hop));
    }
    return path;
}

inline std::optional<AnnotatedPath> shortest_path(const CoGraph& g, std::string_view a, std::string_view b) {
    return shortest_path(g, g.resolve(a), g.resolve(b));
}

/// `A —[T1; T2]→ B —[T3]→ C`
inline std::string render(const AnnotatedPath& path, const CoGraph& g) {
    std::string out = g.label(path.nodes.front());
    for (const auto& hop : path.hops) {
        out += " —[";
        for (std::size_t i = 0; i < hop.titles.size(); ++i) {
            if (i) out += "; ";
            out += hop.titles[i];
        }
        out += "]→ ";
        out += hop.to;
    }
    return out;
}

struct DistanceHistogram {
    std::map<std::int32_t, std::uint64_t> counts; // ordered (source, target) pairs by hop distance
    std::uint64_t unreachable = 0;
    std::size_t sources = 0;
};

/// BFS from min(sample_sources, g) distinct sources drawn uniformly with a
/// seeded shuffle. Every node is a source when the sample covers the graph.
inline DistanceHistogram distance_histogram(const CoGraph& g, std::size_t sample_sources, std::uint64_t seed) {
    if (sample_sources == 0) throw Error(ErrorCode::InvalidArgument, "sample_sources must be >= 1");
    std::vector<NodeId> order(g.node_count());
    std::iota(order.begin(), order.end(), NodeId{0});
    DistanceHistogram h;
    if (sample_sources < order.size()) {
        Rng rng(seed);
        rng.shuffle(std::span<NodeId>(order));
        order.resize(sample_sources);
        std::sort(order.begin(), order.end());
    }
    h.sources = order.size();
    for (auto s : order) {
        const auto dist = bfs_distances(g, s);
        for (NodeId t = 0; t < dist.size(); ++t) {
            if (t == s) continue;
            if (dist[t] < 0) {
                ++h.unreachable;
            } else {
                ++h.counts[dist[t]];
            }
        }
    }
    return h;
}

struct Partnership {
    NodeId a; // label(a) <= label(b)
    NodeId b;
    std::uint32_t shared_titles;
};

/// Heaviest edges; ties by (label a, label b).
inline std::vector<Partnership> top_partnerships(const CoGraph& g, std::size_t k) {
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
    std::vector<Partnership> all;
    all.reserve(g.edge_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto nbrs = g.neighbors(u);
        const auto ws = g.weights(u);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            if (nbrs[i] <= u) continue;
            auto a = u, b = nbrs[i];
            if (g.label(b) < g.label(a)) std::swap(a, b);
            all.push_back({a, b, ws[i]});
        }
    }
    auto better = [&](const Partnership& x, const Partnership& y) {
        if (x.shared_titles != y.shared_titles) return x.shared_titles > y.shared_titles;
        return std::tie(g.label(x.a), g.label(x.b), x.a, x.b) < std::tie(g.label(y.a), g.label(y.b), y.a, y.b);
    };
    const auto keep = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), better);
    all.resize(keep);
    return all;
}

} // namespace castnet
