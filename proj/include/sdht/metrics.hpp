#pragma once

#include "sdht/overlay.hpp"
#include "sdht/social_graph.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace sdht {

/// How "within i hops in the overlay" is measured for reliability.
enum class HopMode {
    Greedy,  // hop count of the greedy lookup, same as the latency metric
    Bfs,     // shortest path over the directed finger graph
};

struct MetricsOptions {
    /// Directed friend pairs routed for the latency metric; above this the
    /// edges are sampled without replacement.
    std::size_t sample_cap = 200000;
    std::uint64_t seed = 0;
    std::size_t max_hops = 3;
    HopMode hop_mode = HopMode::Greedy;
};

/// Metric values for one (graph, ring, placement) snapshot.
struct SnapshotMetrics {
    std::optional<double> avg_latency;  // absent for an edgeless graph
    double reliability_finger = 0.0;
    std::vector<double> reliability_ihop;  // index i-1 holds the i-hop value
    // Secondary: per-user means weighted by degree.
    double reliability_finger_weighted = 0.0;
    std::vector<double> reliability_ihop_weighted;
};

/// One row of the per-iteration output. Iteration 0 is the initial placement.
struct IterationReport {
    std::size_t iteration = 0;
    std::uint64_t swaps = 0;
    std::uint64_t attempts = 0;
    std::uint64_t cumulative_swaps = 0;
    std::uint64_t cumulative_attempts = 0;
    std::uint64_t users_moved = 0;  // distinct users that swapped at least once so far
    std::size_t node_count = 0;
    std::optional<SnapshotMetrics> metrics;

    std::optional<double> per_iteration_fraction() const;
    std::optional<double> cumulative_fraction() const;
    double moved_fraction() const {
        return node_count == 0 ? 0.0 : static_cast<double>(users_moved) / static_cast<double>(node_count);
    }
};

/// cumulative swaps / cumulative attempts; absent when nothing was attempted.
std::optional<double> migration_cost(std::uint64_t swaps, std::uint64_t attempts);

// The functions below are OpenMP-parallel over users or edges. Per-item values
// are combined in a fixed order, so results do not depend on the thread count.

/// Mean greedy hop count over friend pairs, both directions of every edge.
std::optional<double> avg_friend_latency(const SocialGraph& g, const Ring& ring,
                                         const Placement& placement,
                                         std::size_t sample_cap = 200000, std::uint64_t seed = 0);

/// Mean over users with friends of (fingers held by friends) / (fingers).
double reliability_finger(const SocialGraph& g, const Ring& ring, const Placement& placement);

/// Mean over users with friends of the share of friends within i hops, i = 1..max_i.
std::vector<double> reliability_ihop(const SocialGraph& g, const Ring& ring,
                                     const Placement& placement, std::size_t max_i = 3,
                                     HopMode mode = HopMode::Greedy);

/// All metrics in one pass (one route per directed friend pair).
SnapshotMetrics evaluate_snapshot(const SocialGraph& g, const Ring& ring,
                                  const Placement& placement, const MetricsOptions& options = {});

/// Straightforward single-threaded versions, kept as the reference the
/// parallel kernels are tested against.
namespace serial {
std::optional<double> avg_friend_latency(const SocialGraph& g, const Ring& ring,
                                         const Placement& placement,
                                         std::size_t sample_cap = 200000, std::uint64_t seed = 0);
double reliability_finger(const SocialGraph& g, const Ring& ring, const Placement& placement);
std::vector<double> reliability_ihop(const SocialGraph& g, const Ring& ring,
                                     const Placement& placement, std::size_t max_i = 3,
                                     HopMode mode = HopMode::Greedy);
}  // namespace serial

// CSV schema, one row per iteration:
//   iteration,avg_latency,swaps,attempts,per_iter_fraction,cum_fraction,
//   rel_finger,rel_1hop,rel_2hop,rel_3hop,moved_fraction,rel_finger_degw,
//   rel_1hop_degw,rel_2hop_degw,rel_3hop_degw
// The first ten columns are the stable contract; the rest are secondary.
// Reliability values are ratios in [0, 1]. Absent values are empty fields.
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const IterationReport& report);

}  // namespace sdht
