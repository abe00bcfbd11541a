#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sdht {

using UserId = std::uint32_t;

/// Counters gathered while parsing an edge list.
struct LoadStats {
    std::size_t lines = 0;
    std::size_t comment_lines = 0;
    std::size_t arcs = 0;        // data lines read
    std::size_t self_loops = 0;
    std::size_t duplicates = 0;  // arcs that collapsed onto an existing undirected edge
    bool directed_input = false;
};

/// Immutable undirected simple graph in CSR form.
///
/// Users are dense ids 0..node_count-1; every adjacency list is sorted
/// ascending. The id each user carried in its source file is kept in
/// original_id() for reporting.
class SocialGraph {
public:
    SocialGraph() = default;

    /// Build from an arc list over dense ids. Self-loops and duplicates
    /// (in either direction) are dropped. Throws if an id is >= node_count.
    static SocialGraph from_edges(std::size_t node_count,
                                  std::span<const std::pair<UserId, UserId>> edges,
                                  std::vector<std::int64_t> original_ids = {},
                                  LoadStats* stats = nullptr);

    std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const { return neighbors_.size() / 2; }

    std::span<const UserId> neighbors(UserId u) const {
        return {neighbors_.data() + offsets_[u], neighbors_.data() + offsets_[u + 1]};
    }
    std::size_t degree(UserId u) const { return offsets_[u + 1] - offsets_[u]; }

    /// Position of the first adjacency entry of u in a flat per-entry array.
    std::size_t adjacency_offset(UserId u) const { return offsets_[u]; }

    bool has_edge(UserId u, UserId v) const;
    std::int64_t original_id(UserId u) const { return original_ids_[u]; }

    /// Undirected edges as (u, v) with u < v, ordered lexicographically.
    std::vector<std::pair<UserId, UserId>> edges() const;

    /// Subgraph induced by `users`; user i of the result is users[i].
    SocialGraph induced_subgraph(std::span<const UserId> users) const;

    friend bool operator==(const SocialGraph&, const SocialGraph&) = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<UserId> neighbors_;
    std::vector<std::int64_t> original_ids_;
};

/// Parse a SNAP-style edge list ('#' comments, one "src dst" pair per line).
/// Plain text or gzip (detected by magic bytes). Ids are remapped densely in
/// ascending order of their original value.
SocialGraph load_edge_list(const std::filesystem::path& path, bool directed_input,
                           LoadStats* stats = nullptr);

/// Write the graph as an edge list using original ids, one undirected edge per line.
void write_edge_list(const SocialGraph& g, const std::filesystem::path& path);

/// |N_u ∩ N_v| by sorted-list intersection.
std::size_t common_neighbor_count(const SocialGraph& g, UserId u, UserId v);

enum class StrengthMode { CommonNeighbors, IdDistance };

/// How tie strength between two users is measured.
struct StrengthProvider {
    StrengthMode mode = StrengthMode::CommonNeighbors;
    /// IdDistance only: one reference identifier in (0, 1] per user.
    std::vector<double> reference_ids;

    static StrengthProvider common_neighbors() { return {}; }
    static StrengthProvider id_distance(std::vector<double> ids) {
        return {StrengthMode::IdDistance, std::move(ids)};
    }
};

/// Tie strength of u towards v.
///
/// CommonNeighbors: |N_u ∩ N_v| / |N_u|, asymmetric, 0 when u has no friends.
/// IdDistance: 1 - circular distance between the reference ids.
double strength(const SocialGraph& g, UserId u, UserId v, const StrengthProvider& p);

/// Up to k friends of u, strongest first, ties by ascending id.
std::vector<UserId> top_k_strongest(const SocialGraph& g, UserId u, std::size_t k,
                                    const StrengthProvider& p);

/// strength(u, v) for every adjacency entry, laid out like the CSR arrays.
class StrengthTable {
public:
    StrengthTable() = default;
    StrengthTable(const SocialGraph& g, std::vector<double> values);

    std::span<const double> of(UserId u) const {
        return {values_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
    }
    std::span<const double> values() const { return values_; }

private:
    std::vector<std::size_t> offsets_;
    std::vector<double> values_;
};

/// OpenMP-parallel over users.
StrengthTable build_strength_table(const SocialGraph& g, const StrengthProvider& p);

namespace serial {
StrengthTable build_strength_table(const SocialGraph& g, const StrengthProvider& p);
}

/// Ranking of u's friends by the table, strongest first, ties by ascending id.
std::vector<UserId> rank_friends(const SocialGraph& g, const StrengthTable& table, UserId u,
                                 std::size_t k);

}  // namespace sdht
