#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "castnet/error.hpp"
#include "castnet/graph.hpp"

namespace castnet {

namespace detail {

inline std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

} // namespace detail

inline void write_dot(std::ostream& out, const CoGraph& g) {
    out << "graph castnet {\n";
    for (NodeId u = 0; u < g.node_count(); ++u) out << "  n" << u << " [label=" << detail::dot_quote(g.label(u)) << "];\n";
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto nbrs = g.neighbors(u);
        const auto ws = g.weights(u);
        for (std::size_t i = 0; i < nbrs.size(); ++i)
            if (nbrs[i] > u) out << "  n" << u << " -- n" << nbrs[i] << " [weight=" << ws[i] << "];\n";
    }
    out << "}\n";
}

inline void write_graphml(std::ostream& out, const CoGraph& g) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
           "  <key id=\"name\" for=\"node\" attr.name=\"name\" attr.type=\"string\"/>\n"
           "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n"
           "  <graph id=\"castnet\" edgedefault=\"undirected\">\n";
    for (NodeId u = 0; u < g.node_count(); ++u)
        out << "    <node id=\"n" << u << "\"><data key=\"name\">" << detail::xml_escape(g.label(u)) << "</data></node>\n";
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto nbrs = g.neighbors(u);
        const auto ws = g.weights(u);
        for (std::size_t i = 0; i < nbrs.size(); ++i)
            if (nbrs[i] > u)
                out << "    <edge source=\"n" << u << "\" target=\"n" << nbrs[i] << "\"><data key=\"weight\">" << ws[i]
                    << "</data></edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

// Binary cache layout: docs/graph-cache.md. All integers little-endian.
inline constexpr std::array<char, 8> kCacheMagic{'C', 'S', 'T', 'N', 'G', 'R', 'P', 'H'};
inline constexpr std::uint32_t kCacheVersion = 1;

namespace detail {

class LeWriter {
public:
    explicit LeWriter(std::ostream& out) : out_(out) {}

    void u32(std::uint32_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void str(const std::string& s) {
        u64(s.size());
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }
    template <class T>
    void array(const std::vector<T>& v) {
        u64(v.size());
        for (auto x : v) put(static_cast<std::uint64_t>(x), sizeof(T));
    }
    void strings(const std::vector<std::string>& v) {
        u64(v.size());
        for (const auto& s : v) str(s);
    }

private:
    void put(std::uint64_t v, int bytes) {
        char buf[8];
        for (int i = 0; i < bytes; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out_.write(buf, bytes);
    }
    std::ostream& out_;
};

class LeReader {
public:
    explicit LeReader(std::istream& in) : in_(in) {}

    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    std::uint64_t u64() { return get(8); }
    std::string str() {
        const auto len = length();
        std::string s;
        for (std::uint64_t done = 0; done < len;) {
            const auto chunk = std::min<std::uint64_t>(len - done, 1u << 16);
            s.resize(done + chunk);
            in_.read(s.data() + done, static_cast<std::streamsize>(chunk));
            if (!in_) break;
            done += chunk;
        }
        if (!in_) throw Error(ErrorCode::CacheFormat, "truncated graph cache");
        return s;
    }
    template <class T>
    std::vector<T> array() {
        const auto len = length();
        std::vector<T> v;
        v.reserve(std::min<std::uint64_t>(len, 1u << 20)); // a corrupt length fails on read, not on allocation
        for (std::uint64_t i = 0; i < len; ++i) v.push_back(static_cast<T>(get(sizeof(T))));
        return v;
    }
    std::vector<std::string> strings() {
        const auto len = length();
        std::vector<std::string> v;
        v.reserve(std::min<std::uint64_t>(len, 1u << 20));
        for (std::uint64_t i = 0; i < len; ++i) v.push_back(str());
        return v;
    }

private:
    std::uint64_t length() {
        const auto len = u64();
        if (len > (std::uint64_t{1} << 40)) throw Error(ErrorCode::CacheFormat, "implausible length in graph cache");
        return len;
    }
    std::uint64_t get(int bytes) {
        unsigned char buf[8];
        in_.read(reinterpret_cast<char*>(buf), bytes);
        if (!in_) throw Error(ErrorCode::CacheFormat, "truncated graph cache");
        std::uint64_t v = 0;
        for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
        return v;
    }
    std::istream& in_;
};

} // namespace detail

inline void save_cache(std::ostream& out, const CoGraph& g) {
    const auto p = g.parts();
    out.write(kCacheMagic.data(), kCacheMagic.size());
    detail::LeWriter w(out);
    w.u32(kCacheVersion);
    w.u32(g.has_edge_titles() ? 1u : 0u);
    w.strings(p.labels);
    w.strings(p.keys);
    w.array(p.offsets);
    w.array(p.targets);
    w.array(p.weights);
    w.strings(p.title_names);
    w.strings(p.title_countries);
    w.array(p.node_title_offsets);
    w.array(p.node_titles);
    if (g.has_edge_titles()) {
        w.array(p.slot_title_offsets);
        w.array(p.slot_titles);
    }
    if (!out) throw Error(ErrorCode::Io, "failed writing graph cache");
}

/// Throws CacheFormat on bad magic, unknown version or inconsistent data;
/// callers treat that as "rebuild".
inline CoGraph load_cache(std::istream& in) {
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kCacheMagic) throw Error(ErrorCode::CacheFormat, "not a castnet graph cache");
    detail::LeReader r(in);
    const auto version = r.u32();
    if (version != kCacheVersion)
        throw Error(ErrorCode::CacheFormat, "graph cache version " + std::to_string(version) + ", expected " +
                                                std::to_string(kCacheVersion));
    const auto flags = r.u32();
    CoGraph::Parts p;
    p.labels = r.strings();
    p.keys = r.strings();
    p.offsets = r.array<std::uint64_t>();
    p.targets = r.array<NodeId>();
    p.weights = r.array<std::uint32_t>();
    p.title_names = r.strings();
    p.title_countries = r.strings();
    p.node_title_offsets = r.array<std::uint64_t>();
    p.node_titles = r.array<TitleId>();
    if (flags & 1u) {
        p.slot_title_offsets = r.array<std::uint64_t>();
        p.slot_titles = r.array<TitleId>();
    }
    return CoGraph::from_parts(std::move(p));
}

} // namespace castnet
