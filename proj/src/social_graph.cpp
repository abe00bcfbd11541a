#include "sdht/social_graph.hpp"

#include "sdht/identifier.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace sdht {

SocialGraph SocialGraph::from_edges(std::size_t node_count,
                                    std::span<const std::pair<UserId, UserId>> edges,
                                    std::vector<std::int64_t> original_ids, LoadStats* stats) {
    if (!original_ids.empty() && original_ids.size() != node_count)
        throw std::invalid_argument("original id table does not match node count");
    if (original_ids.empty()) {
        original_ids.resize(node_count);
        for (std::size_t i = 0; i < node_count; ++i) original_ids[i] = static_cast<std::int64_t>(i);
    }

    std::vector<std::pair<UserId, UserId>> arcs;
    arcs.reserve(edges.size() * 2);
    std::size_t self_loops = 0;
    for (auto [u, v] : edges) {
        if (u >= node_count || v >= node_count) throw std::out_of_range("edge endpoint out of range");
        if (u == v) {
            ++self_loops;
            continue;
        }
        arcs.emplace_back(u, v);
        arcs.emplace_back(v, u);
    }
    std::sort(arcs.begin(), arcs.end());
    const auto unique_end = std::unique(arcs.begin(), arcs.end());
    const std::size_t kept = static_cast<std::size_t>(unique_end - arcs.begin());
    if (stats) {
        stats->self_loops += self_loops;
        stats->duplicates += (arcs.size() - kept) / 2;
    }
    arcs.erase(unique_end, arcs.end());

    SocialGraph g;
    g.offsets_.assign(node_count + 1, 0);
    g.neighbors_.reserve(arcs.size());
    for (auto [u, v] : arcs) {
        ++g.offsets_[u + 1];
        g.neighbors_.push_back(v);
    }
    for (std::size_t i = 0; i < node_count; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.original_ids_ = std::move(original_ids);
    return g;
}

bool SocialGraph::has_edge(UserId u, UserId v) const {
    const auto adj = neighbors(u);
    return std::binary_search(adj.begin(), adj.end(), v);
}

std::vector<std::pair<UserId, UserId>> SocialGraph::edges() const {
    std::vector<std::pair<UserId, UserId>> out;
    out.reserve(edge_count());
    for (UserId u = 0; u < node_count(); ++u)
        for (UserId v : neighbors(u))
            if (u < v) out.emplace_back(u, v);
    return out;
}

SocialGraph SocialGraph::induced_subgraph(std::span<const UserId> users) const {
    constexpr UserId absent = UINT32_MAX;
    std::vector<UserId> local(node_count(), absent);
    std::vector<std::int64_t> ids;
    ids.reserve(users.size());
    for (std::size_t i = 0; i < users.size(); ++i) {
        if (users[i] >= node_count()) throw std::out_of_range("induced_subgraph: unknown user");
        if (local[users[i]] != absent) throw std::invalid_argument("induced_subgraph: repeated user");
        local[users[i]] = static_cast<UserId>(i);
        ids.push_back(original_ids_[users[i]]);
    }
    std::vector<std::pair<UserId, UserId>> sub;
    for (UserId u : users)
        for (UserId v : neighbors(u))
            if (local[v] != absent && u < v) sub.emplace_back(local[u], local[v]);
    return from_edges(users.size(), sub, std::move(ids));
}

namespace {

struct GzCloser {
    void operator()(gzFile f) const { gzclose(f); }
};

bool skip_space(const char*& p, const char* end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r' || *p == '\n')) ++p;
    return p < end;
}

}  // namespace

SocialGraph load_edge_list(const std::filesystem::path& path, bool directed_input,
                           LoadStats* stats) {
    // gzread passes uncompressed files through untouched.
    std::unique_ptr<gzFile_s, GzCloser> file(gzopen(path.c_str(), "rb"));
    if (!file) throw std::runtime_error("cannot open edge list: " + path.string());
    gzbuffer(file.get(), 1 << 17);

    LoadStats local;
    std::vector<std::pair<std::int64_t, std::int64_t>> raw;
    std::string line;
    char chunk[4096];
    std::size_t line_no = 0;
    bool more = true;
    while (more) {
        line.clear();
        while (true) {
            if (!gzgets(file.get(), chunk, sizeof chunk)) {
                more = false;
                break;
            }
            line += chunk;
            if (!line.empty() && line.back() == '\n') break;
        }
        if (line.empty() && !more) break;
        ++line_no;
        ++local.lines;
        const char* p = line.data();
        const char* end = p + line.size();
        if (!skip_space(p, end)) continue;
        if (*p == '#') {
            ++local.comment_lines;
            continue;
        }
        std::int64_t ids[2];
        for (auto& id : ids) {
            if (!skip_space(p, end))
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": expected two integer ids");
            auto [next, ec] = std::from_chars(p, end, id);
            if (ec != std::errc{} ||
                (next < end && *next != ' ' && *next != '\t' && *next != '\r' && *next != '\n'))
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": malformed id");
            p = next;
        }
        raw.emplace_back(ids[0], ids[1]);
        ++local.arcs;
    }
    int gz_err = Z_OK;
    gzerror(file.get(), &gz_err);
    if (gz_err != Z_OK && gz_err != Z_STREAM_END)
        throw std::runtime_error("read error in " + path.string());
    if (raw.empty()) throw std::runtime_error("empty graph: " + path.string());

    std::vector<std::int64_t> ids;
    ids.reserve(raw.size() * 2);
    for (auto [a, b] : raw) {
        ids.push_back(a);
        ids.push_back(b);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    auto dense = [&](std::int64_t id) {
        return static_cast<UserId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };
    std::vector<std::pair<UserId, UserId>> edges;
    edges.reserve(raw.size());
    for (auto [a, b] : raw) edges.emplace_back(dense(a), dense(b));
    raw.clear();

    // Arcs of a directed file are symmetrized; reciprocal pairs collapse
    // into one edge and are counted under `duplicates`.
    local.directed_input = directed_input;
    const std::size_t n = ids.size();
    auto g = SocialGraph::from_edges(n, edges, std::move(ids), &local);
    if (stats) *stats = local;
    return g;
}

void write_edge_list(const SocialGraph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write edge list: " + path.string());
    out << "# Nodes: " << g.node_count() << " Edges: " << g.edge_count() << '\n';
    for (auto [u, v] : g.edges()) out << g.original_id(u) << ' ' << g.original_id(v) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::size_t common_neighbor_count(const SocialGraph& g, UserId u, UserId v) {
    const auto a = g.neighbors(u);
    const auto b = g.neighbors(v);
    std::size_t count = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

namespace {

void check_pair(const SocialGraph& g, UserId u, UserId v) {
    if (u >= g.node_count() || v >= g.node_count()) throw std::out_of_range("strength: unknown user");
    if (u == v) throw std::invalid_argument("strength: a user has no tie with itself");
}

double strength_unchecked(const SocialGraph& g, UserId u, UserId v, const StrengthProvider& p) {
    if (p.mode == StrengthMode::IdDistance)
        return 1.0 - circular_distance(p.reference_ids[u], p.reference_ids[v]);
    const std::size_t deg = g.degree(u);
    if (deg == 0) return 0.0;
    return static_cast<double>(common_neighbor_count(g, u, v)) / static_cast<double>(deg);
}

void check_provider(const SocialGraph& g, const StrengthProvider& p) {
    if (p.mode == StrengthMode::IdDistance && p.reference_ids.size() != g.node_count())
        throw std::invalid_argument("IdDistance strength needs one reference id per user");
}

}  // namespace

double strength(const SocialGraph& g, UserId u, UserId v, const StrengthProvider& p) {
    check_pair(g, u, v);
    check_provider(g, p);
    return strength_unchecked(g, u, v, p);
}

std::vector<UserId> top_k_strongest(const SocialGraph& g, UserId u, std::size_t k,
                                    const StrengthProvider& p) {
    if (k == 0) throw std::invalid_argument("top_k_strongest: k must be >= 1");
    if (u >= g.node_count()) throw std::out_of_range("top_k_strongest: unknown user");
    check_provider(g, p);
    std::vector<std::pair<double, UserId>> ranked;
    for (UserId v : g.neighbors(u)) ranked.emplace_back(strength_unchecked(g, u, v, p), v);
    const std::size_t take = std::min(k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take),
                      ranked.end(), [](const auto& a, const auto& b) {
                          return a.first != b.first ? a.first > b.first : a.second < b.second;
                      });
    std::vector<UserId> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(ranked[i].second);
    return out;
}

StrengthTable::StrengthTable(const SocialGraph& g, std::vector<double> values)
    : offsets_(g.node_count() + 1), values_(std::move(values)) {
    for (UserId u = 0; u < g.node_count(); ++u) offsets_[u] = g.adjacency_offset(u);
    offsets_[g.node_count()] = 2 * g.edge_count();
    if (values_.size() != offsets_.back())
        throw std::invalid_argument("strength table size does not match adjacency");
}

StrengthTable build_strength_table(const SocialGraph& g, const StrengthProvider& p) {
    check_provider(g, p);
    std::vector<double> values(2 * g.edge_count());
    const auto n = static_cast<std::int64_t>(g.node_count());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto u = static_cast<UserId>(i);
        std::size_t slot = g.adjacency_offset(u);
        for (UserId v : g.neighbors(u)) values[slot++] = strength_unchecked(g, u, v, p);
    }
    return {g, std::move(values)};
}

namespace serial {

StrengthTable build_strength_table(const SocialGraph& g, const StrengthProvider& p) {
    check_provider(g, p);
    std::vector<double> values;
    values.reserve(2 * g.edge_count());
    for (UserId u = 0; u < g.node_count(); ++u)
        for (UserId v : g.neighbors(u)) values.push_back(strength(g, u, v, p));
    return {g, std::move(values)};
}

}  // namespace serial

std::vector<UserId> rank_friends(const SocialGraph& g, const StrengthTable& table, UserId u,
                                 std::size_t k) {
    const auto friends = g.neighbors(u);
    const auto s = table.of(u);
    std::vector<std::size_t> order(friends.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const std::size_t take = std::min(k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          return s[a] != s[b] ? s[a] > s[b] : friends[a] < friends[b];
                      });
    std::vector<UserId> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(friends[order[i]]);
    return out;
}

}  // namespace sdht
