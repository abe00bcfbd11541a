#pragma once

#include "sdht/social_graph.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace sdht {

using SlotIndex = std::uint32_t;

enum class IdMode { UniformRandom, EvenlySpaced };

/// Long-link draws that hit self or an existing target are retried this many
/// times before the link is left unfilled.
inline constexpr int kLongLinkRetryBudget = 32;

/// Clockwise harmonic distance n^(u-1) for a uniform u in [0, 1).
/// Always lies in [1/n, 1).
double harmonic_distance(double u, std::size_t n);

/// Fixed Symphony overlay: slot identifiers sorted on (0, 1], short links to
/// the ring neighbours, up to k long links per slot.
///
/// A Ring never changes after construction. Users move between slots through
/// a Placement; the finger tables stay with the slots.
class Ring {
public:
    Ring() = default;

    /// Assemble a ring from explicit parts. Validates every invariant.
    /// `long_link_points` holds the sampled point per long link when known
    /// (same layout as `long_links`), or is empty.
    static Ring from_parts(std::vector<double> slot_ids, std::size_t k,
                           std::vector<std::vector<SlotIndex>> long_links,
                           std::vector<std::vector<double>> long_link_points = {});

    std::size_t size() const { return ids_.size(); }
    std::size_t k() const { return k_; }
    double id(SlotIndex s) const { return ids_[s]; }
    std::span<const double> ids() const { return ids_; }

    SlotIndex successor(SlotIndex s) const { return s + 1 == size() ? 0 : s + 1; }
    SlotIndex predecessor(SlotIndex s) const {
        return s == 0 ? static_cast<SlotIndex>(size() - 1) : s - 1;
    }

    std::span<const SlotIndex> long_links(SlotIndex s) const {
        return {links_.data() + link_offsets_[s], links_.data() + link_offsets_[s + 1]};
    }
    /// Points in (0, 1] that produced each long link; empty if not recorded.
    std::span<const double> long_link_points(SlotIndex s) const {
        if (points_.empty()) return {};
        return {points_.data() + link_offsets_[s], points_.data() + link_offsets_[s + 1]};
    }
    bool has_link_points() const { return !points_.empty() || links_.empty(); }

    /// Finger table entries in a fixed order: successor, predecessor, long links.
    std::size_t finger_count(SlotIndex s) const { return 2 + long_links(s).size(); }
    template <class Fn>
    void for_each_finger(SlotIndex s, Fn&& fn) const {
        fn(successor(s));
        fn(predecessor(s));
        for (SlotIndex t : long_links(s)) fn(t);
    }
    SlotIndex finger(SlotIndex s, std::size_t i) const {
        if (i == 0) return successor(s);
        if (i == 1) return predecessor(s);
        return links_[link_offsets_[s] + i - 2];
    }

    std::size_t filled_long_links() const { return links_.size(); }

    /// Slot with the smallest id >= point, wrapping to slot 0.
    SlotIndex manager_of(double point) const;

    /// Number of slots strictly passed when walking clockwise from a to b.
    std::size_t clockwise_gap(SlotIndex a, SlotIndex b) const {
        return b >= a ? b - a : b + size() - a;
    }

    friend bool operator==(const Ring&, const Ring&) = default;

private:
    std::size_t k_ = 0;
    std::vector<double> ids_;
    std::vector<std::size_t> link_offsets_;
    std::vector<SlotIndex> links_;
    std::vector<double> points_;
};

Ring build_ring(std::size_t n, std::size_t k, std::uint64_t seed,
                IdMode id_mode = IdMode::UniformRandom);

/// Result of a greedy lookup: slots visited from source to destination.
struct RoutePath {
    std::size_t hop_count = 0;
    std::vector<SlotIndex> visited;
};

/// Unidirectional clockwise greedy routing over successor and long links.
/// Each hop takes the link that gets closest to dst without passing it.
RoutePath greedy_route(const Ring& ring, SlotIndex src, SlotIndex dst);

/// Same as greedy_route().hop_count without materializing the path.
std::size_t route_hops(const Ring& ring, SlotIndex src, SlotIndex dst);

/// Bijection between users and slots.
class Placement {
public:
    Placement() = default;
    /// user u occupies slot user_to_slot[u]. Throws unless it is a permutation.
    explicit Placement(std::vector<SlotIndex> user_to_slot);

    static Placement identity(std::size_t n);
    static Placement random(std::size_t n, std::uint64_t seed);

    std::size_t size() const { return user_to_slot_.size(); }
    SlotIndex slot_of(UserId u) const { return user_to_slot_[u]; }
    UserId user_at(SlotIndex s) const { return slot_to_user_[s]; }
    std::span<const SlotIndex> user_to_slot() const { return user_to_slot_; }
    std::span<const UserId> slot_to_user() const { return slot_to_user_; }

    /// Exchange the slots of two distinct users.
    void swap_users(UserId a, UserId b);

    /// Both arrays are mutually inverse permutations.
    bool is_consistent() const;

    friend bool operator==(const Placement&, const Placement&) = default;

private:
    std::vector<SlotIndex> user_to_slot_;
    std::vector<UserId> slot_to_user_;
};

/// Baseline from finger-rewiring: every long-link draw of a slot is re-aimed at
/// the occupant's friend whose slot id is circularly closest to the sampled
/// point. Occupants without friends keep the harmonic target.
Ring rewire_fingers_to_friends(const Ring& ring, const Placement& placement,
                               const SocialGraph& g, std::uint64_t seed);

/// Directed finger graph of the ring (successor, predecessor and long links),
/// symmetrized. User i of the result is slot i.
SocialGraph finger_graph(const Ring& ring);

// Checkpoint format, version 1:
//
//   sdht-overlay 1
//   slots <n> long_links <k>
//   <slot_id> <occupant> <long-link target slot>...     (one line per slot)
//
// Slot ids are written with 17 significant digits so they round-trip exactly.
void write_checkpoint(std::ostream& out, const Ring& ring, const Placement& placement);
void write_checkpoint(const std::filesystem::path& path, const Ring& ring,
                      const Placement& placement);

struct Checkpoint {
    Ring ring;
    Placement placement;
};
Checkpoint read_checkpoint(std::istream& in);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace sdht
