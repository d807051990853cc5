#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "castnet/error.hpp"
#include "castnet/graph.hpp"

namespace castnet {

enum class LinkIndex { CommonNeighbors, Jaccard, ResourceAllocation, AdamicAdar, PreferentialAttachment };

inline std::string_view to_string(LinkIndex m) {
    switch (m) {
    case LinkIndex::CommonNeighbors: return "common_neighbors";
    case LinkIndex::Jaccard: return "jaccard";
    case LinkIndex::ResourceAllocation: return "resource_allocation";
    case LinkIndex::AdamicAdar: return "adamic_adar";
    case LinkIndex::PreferentialAttachment: return "preferential_attachment";
    }
    return "unknown";
}

inline std::optional<LinkIndex> parse_link_index(std::string_view s) {
    for (auto m : {LinkIndex::CommonNeighbors, LinkIndex::Jaccard, LinkIndex::ResourceAllocation,
                   LinkIndex::AdamicAdar, LinkIndex::PreferentialAttachment})
        if (to_string(m) == s) return m;
    return std::nullopt;
}

namespace detail {

inline void require_pair(const CoGraph& g, NodeId u, NodeId v) {
    (void)g.degree(u);
    (void)g.degree(v);
    if (u == v) throw Error(ErrorCode::InvalidArgument, "link indices need two distinct nodes");
}

/// Calls f(z) for every common neighbor, ascending z.
template <class F>
void for_common_neighbors(const CoGraph& g, NodeId u, NodeId v, F&& f) {
    auto a = g.neighbors(u);
    auto b = g.neighbors(v);
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            f(a[i]);
            ++i;
            ++j;
        }
    }
}

} // namespace detail

inline std::size_t common_neighbors(const CoGraph& g, NodeId u, NodeId v) {
    detail::require_pair(g, u, v);
    std::size_t c = 0;
    detail::for_common_neighbors(g, u, v, [&](NodeId) { ++c; });
    return c;
}

inline double jaccard(const CoGraph& g, NodeId u, NodeId v) {
    const auto c = common_neighbors(g, u, v);
    const auto uni = g.degree(u) + g.degree(v) - c;
    return uni == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(uni);
}

inline double resource_allocation(const CoGraph& g, NodeId u, NodeId v) {
    detail::require_pair(g, u, v);
    double s = 0;
    detail::for_common_neighbors(g, u, v, [&](NodeId z) { s += 1.0 / static_cast<double>(g.degree(z)); });
    return s;
}

/// Natural log. A common neighbor always has degree >= 2.
inline double adamic_adar(const CoGraph& g, NodeId u, NodeId v) {
    detail::require_pair(g, u, v);
    double s = 0;
    detail::for_common_neighbors(g, u, v,
                                 [&](NodeId z) { s += 1.0 / std::log(static_cast<double>(g.degree(z))); });
    return s;
}

inline double preferential_attachment(const CoGraph& g, NodeId u, NodeId v) {
    detail::require_pair(g, u, v);
    return static_cast<double>(g.degree(u)) * static_cast<double>(g.degree(v));
}

inline double link_score(const CoGraph& g, LinkIndex m, NodeId u, NodeId v) {
    switch (m) {
    case LinkIndex::CommonNeighbors: return static_cast<double>(common_neighbors(g, u, v));
    case LinkIndex::Jaccard: return jaccard(g, u, v);
    case LinkIndex::ResourceAllocation: return resource_allocation(g, u, v);
    case LinkIndex::AdamicAdar: return adamic_adar(g, u, v);
    case LinkIndex::PreferentialAttachment: return preferential_attachment(g, u, v);
    }
    return 0;
}

/// Raw index value for a non-adjacent pair; not a probability.
struct PairScore {
    NodeId u; // label(u) <= label(v)
    NodeId v;
    LinkIndex method;
    double score;
};

struct PredictOptions {
    std::size_t min_common = 1;
    /// Only honored for PreferentialAttachment: every non-adjacent pair is a
    /// candidate and min_common is ignored.
    bool allow_zero_common = false;
    std::uint64_t candidate_cap = 50'000'000;
};

/// Non-adjacent pairs with >= min_common common neighbors, found by
/// walking 2-hop neighborhoods; calls f(u, v, common) with u < v by id.
/// min_common = 0 is rejected unless allow_zero_common applies.
/// Throws CandidateExplosion past opt.candidate_cap.
template <class F>
std::uint64_t for_each_candidate(const CoGraph& g, LinkIndex method, const PredictOptions& opt, F&& f) {
    const auto n = g.node_count();
    const bool all_pairs = method == LinkIndex::PreferentialAttachment && opt.allow_zero_common;
    if (opt.min_common == 0 && !all_pairs)
        throw Error(ErrorCode::InvalidArgument,
                    "min_common = 0 is only accepted for preferential_attachment with allow_zero_common");
    std::uint64_t count = 0;
    auto bump = [&] {
        if (++count > opt.candidate_cap)
            throw Error(ErrorCode::CandidateExplosion,
                        "more than " + std::to_string(opt.candidate_cap) + " candidate pairs; raise min_common");
    };
    if (all_pairs) {
        const std::uint64_t nn = n;
        const std::uint64_t total = nn * (nn - (nn ? 1 : 0)) / 2 - g.edge_count();
        if (total > opt.candidate_cap)
            throw Error(ErrorCode::CandidateExplosion,
                        std::to_string(total) + " candidate pairs exceed the cap; raise min_common");
        for (NodeId u = 0; u < n; ++u) {
            auto nbrs = g.neighbors(u);
            auto it = nbrs.begin();
            for (NodeId v = u + 1; v < n; ++v) {
                while (it != nbrs.end() && *it < v) ++it;
                if (it != nbrs.end() && *it == v) continue;
                bump();
                f(u, v, common_neighbors(g, u, v));
            }
        }
        return count;
    }
    std::vector<std::uint32_t> hits(n, 0);
    std::vector<NodeId> touched;
    std::vector<char> adjacent(n, 0);
    for (NodeId u = 0; u < n; ++u) {
        for (auto z : g.neighbors(u)) adjacent[z] = 1;
        touched.clear();
        for (auto z : g.neighbors(u)) {
            for (auto v : g.neighbors(z)) {
                if (v <= u || adjacent[v]) continue;
                if (hits[v]++ == 0) touched.push_back(v);
            }
        }
        std::sort(touched.begin(), touched.end());
        for (auto v : touched) {
            if (hits[v] >= opt.min_common) {
                bump();
                f(u, v, static_cast<std::size_t>(hits[v]));
            }
            hits[v] = 0;
        }
        for (auto z : g.neighbors(u)) adjacent[z] = 0;
    }
    return count;
}

struct Prediction {
    std::vector<PairScore> top;
    std::uint64_t candidates = 0;
};

/// Top-k candidate pairs by score, ties by (label u, label v).
inline Prediction predict_top(const CoGraph& g, LinkIndex method, std::size_t k, const PredictOptions& opt = {}) {
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
    auto canonical = [&](NodeId a, NodeId b) {
        if (g.label(b) < g.label(a) || (g.label(b) == g.label(a) && b < a)) std::swap(a, b);
        return std::pair{a, b};
    };
    // strict weak order, "a ranks ahead of b"
    auto ahead = [&](const PairScore& a, const PairScore& b) {
        if (a.score != b.score) return a.score > b.score;
        return std::tie(g.label(a.u), g.label(a.v), a.u, a.v) < std::tie(g.label(b.u), g.label(b.v), b.u, b.v);
    };
    // max-heap on "ahead" keeps the worst retained pair on top
    std::priority_queue<PairScore, std::vector<PairScore>, decltype(ahead)> heap(ahead);
    Prediction out;
    out.candidates = for_each_candidate(g, method, opt, [&](NodeId u, NodeId v, std::size_t common) {
        auto [a, b] = canonical(u, v);
        const double score =
            method == LinkIndex::CommonNeighbors ? static_cast<double>(common) : link_score(g, method, a, b);
        PairScore ps{a, b, method, score};
        if (heap.size() < k) {
            heap.push(ps);
        } else if (ahead(ps, heap.top())) {
            heap.pop();
            heap.push(ps);
        }
    });
    while (!heap.empty()) {
        out.top.push_back(heap.top());
        heap.pop();
    }
    std::reverse(out.top.begin(), out.top.end());
    return out;
}

} // namespace castnet
