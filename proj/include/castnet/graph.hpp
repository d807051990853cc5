#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "castnet/error.hpp"
#include "castnet/ingest.hpp"

namespace castnet {

using NodeId = std::uint32_t;
using TitleId = std::uint32_t;

struct BuildFilters {
    std::optional<TitleKind> kind;
    std::optional<std::pair<int, int>> year_range; // inclusive; titles without a year drop out
    std::size_t min_cast = 1;
    std::size_t max_cast = 500; // larger casts are treated as corrupt rows
};

struct BuildReport {
    std::size_t titles_in = 0;
    std::size_t titles_kept = 0;
    std::size_t excluded_kind = 0;
    std::size_t excluded_year = 0;
    std::size_t excluded_small_cast = 0;
    std::size_t rejected_large_cast = 0;
};

struct TitleMeta {
    std::string title_id;
    std::string name;
    std::optional<int> year;
    TitleKind kind = TitleKind::Movie;
    std::optional<std::string> country;
    std::vector<std::string> directors;
};

/// Person <-> title incidence with dense ids in first-seen order.
struct BipartiteStore {
    std::vector<std::string> person_keys;
    std::vector<std::string> person_labels;
    std::vector<TitleMeta> titles;
    std::vector<std::vector<NodeId>> incidence; // per title, sorted, unique
    BuildReport report;

    std::size_t person_count() const { return person_keys.size(); }
    std::size_t title_count() const { return titles.size(); }
};

/// `names` maps person keys to display labels (IMDb); keys are used as
/// labels when it is null or lacks an entry.
inline BipartiteStore build_bipartite(const std::vector<TitleRecord>& records, const BuildFilters& filters = {},
                                      const std::unordered_map<std::string, std::string>* names = nullptr) {
    BipartiteStore store;
    std::unordered_map<std::string, NodeId> index;
    auto& rep = store.report;
    for (const auto& rec : records) {
        ++rep.titles_in;
        if (filters.kind && rec.kind != *filters.kind) {
            ++rep.excluded_kind;
            continue;
        }
        if (filters.year_range &&
            (!rec.release_year || *rec.release_year < filters.year_range->first ||
             *rec.release_year > filters.year_range->second)) {
            ++rep.excluded_year;
            continue;
        }
        if (rec.cast.size() < filters.min_cast) {
            ++rep.excluded_small_cast;
            continue;
        }
        if (rec.cast.size() > filters.max_cast) {
            ++rep.rejected_large_cast;
            continue;
        }
        std::vector<NodeId> members;
        members.reserve(rec.cast.size());
        for (const auto& key : rec.cast) {
            if (key.empty()) continue;
            auto [it, fresh] = index.emplace(key, static_cast<NodeId>(store.person_keys.size()));
            if (fresh) {
                store.person_keys.push_back(key);
                const std::string* label = nullptr;
                if (names) {
                    auto n = names->find(key);
                    if (n != names->end()) label = &n->second;
                }
                store.person_labels.push_back(label ? *label : key);
            }
            members.push_back(it->second);
        }
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        store.incidence.push_back(std::move(members));
        store.titles.push_back({rec.title_id, rec.title, rec.release_year, rec.kind, rec.country, rec.directors});
        ++rep.titles_kept;
    }
    if (store.titles.empty()) throw Error(ErrorCode::EmptyInput, "no titles survive filtering");
    return store;
}

/// Weighted undirected co-appearance graph in CSR form. Immutable once
/// built; adjacency rows are sorted by neighbor id, weights count shared
/// titles. Title data rides along so results can be reported by name.
class CoGraph {
public:
    CoGraph() = default;

    std::size_t node_count() const { return labels_.size(); }
    std::size_t edge_count() const { return targets_.size() / 2; }
    bool has_edge_titles() const { return !slot_title_offsets_.empty(); }

    std::size_t degree(NodeId u) const {
        check(u);
        return offsets_[u + 1] - offsets_[u];
    }

    std::span<const NodeId> neighbors(NodeId u) const {
        check(u);
        return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
    }

    std::span<const std::uint32_t> weights(NodeId u) const {
        check(u);
        return {weights_.data() + offsets_[u], weights_.data() + offsets_[u + 1]};
    }

    /// Shared-title count, 0 when not adjacent.
    std::uint32_t weight(NodeId u, NodeId v) const {
        check(v);
        auto slot = find_slot(u, v);
        return slot ? weights_[*slot] : 0;
    }

    /// Title ids connecting u and v (ascending id); empty when titles were not kept.
    std::span<const TitleId> titles_between(NodeId u, NodeId v) const {
        check(v);
        auto slot = find_slot(u, v);
        if (!slot || !has_edge_titles()) return {};
        return {slot_titles_.data() + slot_title_offsets_[*slot],
                slot_titles_.data() + slot_title_offsets_[*slot + 1]};
    }

    /// Titles a person appears in (ascending id).
    std::span<const TitleId> titles_of(NodeId u) const {
        check(u);
        return {node_titles_.data() + node_title_offsets_[u], node_titles_.data() + node_title_offsets_[u + 1]};
    }

    double weighted_degree(NodeId u) const {
        double s = 0;
        for (auto w : weights(u)) s += w;
        return s;
    }

    /// Sum of weights over undirected edges.
    double total_edge_weight() const { return total_weight_; }

    const std::string& label(NodeId u) const {
        check(u);
        return labels_[u];
    }
    const std::string& key(NodeId u) const {
        check(u);
        return keys_[u];
    }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<std::string>& keys() const { return keys_; }

    std::size_t title_count() const { return title_names_.size(); }
    const std::string& title_name(TitleId t) const { return title_names_.at(t); }
    /// Empty string when the title has no country.
    const std::string& title_country(TitleId t) const { return title_countries_.at(t); }

    /// Accepts a person key or an exact label.
    NodeId resolve(std::string_view actor) const {
        std::optional<NodeId> by_label;
        bool ambiguous = false;
        for (NodeId u = 0; u < node_count(); ++u) {
            if (keys_[u] == actor) return u;
            if (labels_[u] == actor) {
                if (by_label) ambiguous = true;
                else by_label = u;
            }
        }
        if (ambiguous) throw Error(ErrorCode::AmbiguousActor, "several people are named '" + std::string(actor) + "'");
        if (!by_label) throw Error(ErrorCode::UnknownActor, "'" + std::string(actor) + "' is not in the graph");
        return *by_label;
    }

    friend bool operator==(const CoGraph&, const CoGraph&) = default;

    /// Low-level constructor used by projection, subgraphs and the cache
    /// reader. Validates structure.
    struct Parts {
        std::vector<std::string> labels;
        std::vector<std::string> keys;
        std::vector<std::uint64_t> offsets;
        std::vector<NodeId> targets;
        std::vector<std::uint32_t> weights;
        std::vector<std::uint64_t> slot_title_offsets; // empty when titles not kept
        std::vector<TitleId> slot_titles;
        std::vector<std::string> title_names;
        std::vector<std::string> title_countries;
        std::vector<std::uint64_t> node_title_offsets;
        std::vector<TitleId> node_titles;
    };

    static CoGraph from_parts(Parts p) {
        const auto n = p.labels.size();
        auto bad = [](const char* why) { throw Error(ErrorCode::CacheFormat, why); };
        if (p.keys.size() != n || p.offsets.size() != n + 1 || p.offsets.front() != 0 ||
            p.offsets.back() != p.targets.size() || p.weights.size() != p.targets.size())
            bad("adjacency arrays are inconsistent");
        if (p.title_countries.size() != p.title_names.size()) bad("title arrays are inconsistent");
        if (p.node_title_offsets.size() != n + 1 || p.node_title_offsets.back() != p.node_titles.size())
            bad("node title arrays are inconsistent");
        if (!p.slot_title_offsets.empty() &&
            (p.slot_title_offsets.size() != p.targets.size() + 1 || p.slot_title_offsets.back() != p.slot_titles.size()))
            bad("edge title arrays are inconsistent");
        for (const auto* offs : {&p.offsets, &p.node_title_offsets, &p.slot_title_offsets})
            if (!offs->empty() && (offs->front() != 0 || !std::is_sorted(offs->begin(), offs->end())))
                bad("offsets are not monotone");
        CoGraph g;
        g.labels_ = std::move(p.labels);
        g.keys_ = std::move(p.keys);
        g.offsets_ = std::move(p.offsets);
        g.targets_ = std::move(p.targets);
        g.weights_ = std::move(p.weights);
        g.slot_title_offsets_ = std::move(p.slot_title_offsets);
        g.slot_titles_ = std::move(p.slot_titles);
        g.title_names_ = std::move(p.title_names);
        g.title_countries_ = std::move(p.title_countries);
        g.node_title_offsets_ = std::move(p.node_title_offsets);
        g.node_titles_ = std::move(p.node_titles);
        for (std::size_t u = 0; u < n; ++u) {
            for (auto i = g.offsets_[u]; i < g.offsets_[u + 1]; ++i) {
                if (g.targets_[i] >= n || g.targets_[i] == u || g.weights_[i] == 0) bad("bad adjacency entry");
                if (i > g.offsets_[u] && g.targets_[i - 1] >= g.targets_[i]) bad("adjacency row not sorted");
            }
        }
        for (NodeId u = 0; u < n; ++u) {
            const auto ws = g.weights(u);
            const auto nbrs = g.neighbors(u);
            for (std::size_t i = 0; i < nbrs.size(); ++i) {
                auto back = g.find_slot(nbrs[i], u);
                if (!back || g.weights_[*back] != ws[i]) bad("adjacency is not symmetric");
            }
        }
        for (auto t : g.node_titles_)
            if (t >= g.title_names_.size()) bad("title id out of range");
        for (auto t : g.slot_titles_)
            if (t >= g.title_names_.size()) bad("title id out of range");
        double total = 0;
        for (auto w : g.weights_) total += w;
        g.total_weight_ = total / 2;
        return g;
    }

    /// Raw arrays, for serializers.
    Parts parts() const {
        return {labels_, keys_, offsets_, targets_, weights_, slot_title_offsets_, slot_titles_,
                title_names_, title_countries_, node_title_offsets_, node_titles_};
    }

private:
    void check(NodeId u) const {
        if (u >= labels_.size())
            throw Error(ErrorCode::NodeOutOfRange, "node " + std::to_string(u) + " >= " + std::to_string(labels_.size()));
    }

    std::optional<std::uint64_t> find_slot(NodeId u, NodeId v) const {
        auto row = neighbors(u);
        auto it = std::lower_bound(row.begin(), row.end(), v);
        if (it == row.end() || *it != v) return std::nullopt;
        return offsets_[u] + static_cast<std::uint64_t>(it - row.begin());
    }

    std::vector<std::string> labels_;
    std::vector<std::string> keys_;
    std::vector<std::uint64_t> offsets_{0};
    std::vector<NodeId> targets_;
    std::vector<std::uint32_t> weights_;
    std::vector<std::uint64_t> slot_title_offsets_;
    std::vector<TitleId> slot_titles_;
    std::vector<std::string> title_names_;
    std::vector<std::string> title_countries_;
    std::vector<std::uint64_t> node_title_offsets_{0};
    std::vector<TitleId> node_titles_;
    double total_weight_ = 0;
};

namespace detail {

struct PairCredit {
    NodeId u;
    NodeId v;
    TitleId title;
    friend bool operator<(const PairCredit& a, const PairCredit& b) {
        return std::tie(a.u, a.v, a.title) < std::tie(b.u, b.v, b.title);
    }
};

/// Builds CSR from (u<v, title) credits. Credits must be sorted.
inline CoGraph assemble(std::vector<std::string> labels, std::vector<std::string> keys,
                        const std::vector<PairCredit>& credits, bool keep_titles,
                        std::vector<std::string> title_names, std::vector<std::string> title_countries,
                        std::vector<std::uint64_t> node_title_offsets, std::vector<TitleId> node_titles) {
    const auto n = labels.size();
    struct Edge {
        NodeId u, v;
        std::uint32_t w;
        std::size_t first; // index of first credit
    };
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < credits.size(); ++i) {
        if (edges.empty() || edges.back().u != credits[i].u || edges.back().v != credits[i].v)
            edges.push_back({credits[i].u, credits[i].v, 0, i});
        ++edges.back().w;
    }
    CoGraph::Parts p;
    p.labels = std::move(labels);
    p.keys = std::move(keys);
    p.offsets.assign(n + 1, 0);
    for (const auto& e : edges) {
        ++p.offsets[e.u + 1];
        ++p.offsets[e.v + 1];
    }
    for (std::size_t u = 0; u < n; ++u) p.offsets[u + 1] += p.offsets[u];
    const auto slots = p.offsets[n];
    p.targets.resize(slots);
    p.weights.resize(slots);
    std::vector<std::size_t> slot_edge(slots);
    std::vector<std::uint64_t> fill(p.offsets.begin(), p.offsets.end() - 1);
    // lower neighbors first, then higher: rows come out sorted
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto s = fill[edges[i].v]++;
        p.targets[s] = edges[i].u;
        p.weights[s] = edges[i].w;
        slot_edge[s] = i;
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto s = fill[edges[i].u]++;
        p.targets[s] = edges[i].v;
        p.weights[s] = edges[i].w;
        slot_edge[s] = i;
    }
    if (keep_titles) {
        p.slot_title_offsets.assign(slots + 1, 0);
        for (std::uint64_t s = 0; s < slots; ++s) p.slot_title_offsets[s + 1] = p.slot_title_offsets[s] + p.weights[s];
        p.slot_titles.resize(p.slot_title_offsets[slots]);
        for (std::uint64_t s = 0; s < slots; ++s) {
            const auto& e = edges[slot_edge[s]];
            for (std::uint32_t k = 0; k < e.w; ++k) p.slot_titles[p.slot_title_offsets[s] + k] = credits[e.first + k].title;
        }
    }
    p.title_names = std::move(title_names);
    p.title_countries = std::move(title_countries);
    p.node_title_offsets = std::move(node_title_offsets);
    p.node_titles = std::move(node_titles);
    return CoGraph::from_parts(std::move(p));
}

} // namespace detail

/// Clique-projects every title's cast. Persons with solo casts stay as
/// isolated nodes.
inline CoGraph project(const BipartiteStore& store, bool keep_titles = true) {
    if (store.titles.empty()) throw Error(ErrorCode::EmptyInput, "store has no titles");
    const auto n = store.person_count();
    std::vector<detail::PairCredit> credits;
    std::size_t pairs = 0;
    for (const auto& cast : store.incidence) pairs += cast.size() * (cast.size() - (cast.empty() ? 0 : 1)) / 2;
    credits.reserve(pairs);

    std::vector<std::uint64_t> node_title_offsets(n + 1, 0);
    for (TitleId t = 0; t < store.incidence.size(); ++t) {
        const auto& cast = store.incidence[t];
        for (std::size_t i = 0; i < cast.size(); ++i) {
            ++node_title_offsets[cast[i] + 1];
            for (std::size_t j = i + 1; j < cast.size(); ++j) credits.push_back({cast[i], cast[j], t});
        }
    }
    std::sort(credits.begin(), credits.end());
    for (std::size_t u = 0; u < n; ++u) node_title_offsets[u + 1] += node_title_offsets[u];
    std::vector<TitleId> node_titles(node_title_offsets[n]);
    {
        std::vector<std::uint64_t> fill(node_title_offsets.begin(), node_title_offsets.end() - 1);
        for (TitleId t = 0; t < store.incidence.size(); ++t)
            for (auto u : store.incidence[t]) node_titles[fill[u]++] = t;
    }
    std::vector<std::string> title_names;
    std::vector<std::string> title_countries;
    title_names.reserve(store.titles.size());
    title_countries.reserve(store.titles.size());
    for (const auto& t : store.titles) {
        title_names.push_back(t.name);
        title_countries.push_back(t.country.value_or(""));
    }
    return detail::assemble(store.person_labels, store.person_keys, credits, keep_titles, std::move(title_names),
                            std::move(title_countries), std::move(node_title_offsets), std::move(node_titles));
}

/// Subgraph induced by `nodes` (any order, duplicates ignored). New ids
/// follow ascending old id; title tables are shared unchanged.
inline CoGraph induced_subgraph(const CoGraph& g, std::vector<NodeId> nodes) {
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    constexpr auto kAbsent = static_cast<NodeId>(-1);
    std::vector<NodeId> remap(g.node_count(), kAbsent);
    for (NodeId i = 0; i < nodes.size(); ++i) {
        if (nodes[i] >= g.node_count()) throw Error(ErrorCode::NodeOutOfRange, "subgraph node out of range");
        remap[nodes[i]] = i;
    }
    std::vector<std::string> labels, keys;
    std::vector<std::uint64_t> node_title_offsets{0};
    std::vector<TitleId> node_titles;
    std::vector<detail::PairCredit> credits;
    const bool titles = g.has_edge_titles();
    for (auto old : nodes) {
        labels.push_back(g.label(old));
        keys.push_back(g.key(old));
        for (auto t : g.titles_of(old)) node_titles.push_back(t);
        node_title_offsets.push_back(node_titles.size());
        const auto nbrs = g.neighbors(old);
        const auto ws = g.weights(old);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            const auto v = nbrs[i];
            if (v <= old || remap[v] == kAbsent) continue;
            if (titles) {
                for (auto t : g.titles_between(old, v)) credits.push_back({remap[old], remap[v], t});
            } else {
                for (std::uint32_t k = 0; k < ws[i]; ++k) credits.push_back({remap[old], remap[v], 0});
            }
        }
    }
    std::sort(credits.begin(), credits.end());
    auto parts = g.parts();
    return detail::assemble(std::move(labels), std::move(keys), credits, titles, std::move(parts.title_names),
                            std::move(parts.title_countries), std::move(node_title_offsets), std::move(node_titles));
}

struct WeightedEdge {
    NodeId u;
    NodeId v;
    std::uint32_t weight = 1;
};

/// Graph without title data, straight from an edge list. Repeated pairs
/// accumulate weight; self-loops are rejected.
inline CoGraph graph_from_edges(std::vector<std::string> labels, const std::vector<WeightedEdge>& edges) {
    const auto n = labels.size();
    std::vector<detail::PairCredit> credits;
    for (const auto& e : edges) {
        if (e.u >= n || e.v >= n) throw Error(ErrorCode::NodeOutOfRange, "edge endpoint out of range");
        if (e.u == e.v) throw Error(ErrorCode::InvalidArgument, "self-loop on node " + std::to_string(e.u));
        for (std::uint32_t k = 0; k < e.weight; ++k) credits.push_back({std::min(e.u, e.v), std::max(e.u, e.v), 0});
    }
    std::sort(credits.begin(), credits.end());
    auto keys = labels;
    return detail::assemble(std::move(labels), std::move(keys), credits, false, {}, {},
                            std::vector<std::uint64_t>(n + 1, 0), {});
}

/// Labels "0", "1", ... for fixtures.
inline CoGraph graph_from_edges(std::size_t n, const std::vector<WeightedEdge>& edges) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return graph_from_edges(std::move(labels), edges);
}

} // namespace castnet
