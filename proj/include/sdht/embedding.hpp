#pragma once

#include "sdht/metrics.hpp"
#include "sdht/overlay.hpp"
#include "sdht/random.hpp"
#include "sdht/social_graph.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace sdht {

/// How an initiator finds a swap candidate.
enum class SelectionScheme {
    Random,  // any other user, uniformly (stands in for a peer-sampling service)
    Direct,  // a uniformly random friend m, then a finger of m
    Greedy,  // the strongest friend m, then a finger of m
    Smart,   // a uniformly random friend among the smart_width strongest, then a finger of m
};

enum class CostMetric { RingDistance, HopCount };

/// Order in which users initiate within a sweep.
enum class Ordering { RandomOrder, DescendingDegree, AscendingDegree };

/// What one iteration means: a full sweep (every user initiates once) or a
/// single gossip attempt.
enum class IterationUnit { Sweep, Attempt };

struct GossipConfig {
    SelectionScheme scheme = SelectionScheme::Direct;
    CostMetric metric = CostMetric::RingDistance;
    Ordering ordering = Ordering::RandomOrder;
    IterationUnit unit = IterationUnit::Sweep;
    std::size_t iterations = 500;
    std::uint64_t seed = 1;
    std::size_t smart_width = 5;
    StrengthMode strength_mode = StrengthMode::CommonNeighbors;
    /// Use |x_i - x_j| instead of the wrap-around ring distance.
    bool literal_abs = false;
    /// Evaluate the snapshot metrics every this many iterations (and always on
    /// the last one). 0 measures only the last iteration.
    std::size_t metrics_every = 1;
    MetricsOptions metrics;

    /// Throws std::invalid_argument when an invariant is violated.
    void validate() const;
};

struct SwapDecision {
    UserId initiator = 0;
    UserId candidate = 0;
    double cost_before = 0.0;
    double cost_after = 0.0;
    bool swapped = false;
};

/// Default number of long links, ceil(log2 n).
std::size_t default_long_links(std::size_t n);

/// The gossip refinement over a fixed ring: owns the graph, ring, placement,
/// RNG stream and counters. One sweep runs at a time; snapshot metrics are
/// read-only and may fan out internally.
class Engine {
public:
    Engine(SocialGraph graph, Ring ring, Placement placement, GossipConfig config,
           StrengthProvider strength = {});

    /// Random initialization: ring of node_count slots with k long links
    /// (seeded from config.seed) and a uniformly random placement.
    static Engine initialize(SocialGraph graph, std::size_t k, GossipConfig config,
                             IdMode id_mode = IdMode::UniformRandom, StrengthProvider strength = {});

    /// C_i with user i hypothetically at `at_slot`, every other user where it is.
    double node_cost(UserId i, SlotIndex at_slot) const;

    /// Swap candidate for initiator i, or nothing (no friends, or every finger
    /// of m is held by i).
    std::optional<UserId> select_peer(UserId i);

    /// Compare C_i + C_j before and after exchanging slots; swap on strict improvement.
    SwapDecision evaluate_swap(UserId i, UserId j);

    IterationReport run_iteration();
    /// Runs config().iterations iterations and returns their reports.
    std::vector<IterationReport> run();

    /// Iteration-0 row: current counters plus the snapshot metrics.
    IterationReport baseline_report() const;
    SnapshotMetrics snapshot() const;

    /// Called for every evaluated swap.
    void set_swap_observer(std::function<void(const SwapDecision&)> observer) {
        observer_ = std::move(observer);
    }

    const SocialGraph& graph() const { return graph_; }
    const Ring& ring() const { return ring_; }
    const Placement& placement() const { return placement_; }
    const GossipConfig& config() const { return config_; }
    const StrengthTable& strengths() const { return strengths_; }
    std::size_t iteration() const { return iteration_; }
    std::uint64_t total_swaps() const { return total_swaps_; }
    std::uint64_t total_attempts() const { return total_attempts_; }
    /// Greedy routes evaluated by the HopCount cost so far.
    std::uint64_t route_evaluations() const { return route_evaluations_; }

    /// Initiator order of the next sweep (fixed for degree orderings).
    std::vector<UserId> sweep_order();

private:
    double cost_with(UserId i, SlotIndex at_slot, UserId moved, SlotIndex moved_to) const;
    double distance(SlotIndex a, SlotIndex b) const;
    void attempt(UserId i, IterationReport& report);

    SocialGraph graph_;
    Ring ring_;
    Placement placement_;
    GossipConfig config_;
    StrengthTable strengths_;
    std::vector<std::vector<UserId>> ranked_friends_;  // Greedy / Smart only
    std::vector<UserId> fixed_order_;
    std::vector<UserId> current_order_;
    std::size_t cursor_ = 0;
    Rng rng_;
    std::vector<UserId> scratch_;
    std::vector<bool> moved_;
    std::uint64_t users_moved_ = 0;
    std::size_t iteration_ = 0;
    std::uint64_t total_swaps_ = 0;
    std::uint64_t total_attempts_ = 0;
    mutable std::uint64_t route_evaluations_ = 0;
    std::function<void(const SwapDecision&)> observer_;
};

}  // namespace sdht
