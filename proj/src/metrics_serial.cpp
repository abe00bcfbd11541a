// Reference implementations: one obvious loop each, no shared buffers.

#include "sdht/metrics.hpp"

#include "metrics_detail.hpp"

#include <queue>
#include <stdexcept>

namespace sdht::serial {

std::optional<double> avg_friend_latency(const SocialGraph& g, const Ring& ring,
                                         const Placement& placement, std::size_t sample_cap,
                                         std::uint64_t seed) {
    if (g.edge_count() == 0) return std::nullopt;
    const auto sample = detail::latency_sample(g, sample_cap, seed);
    const auto edges = sample ? *sample : g.edges();
    std::uint64_t total = 0;
    for (auto [u, v] : edges) {
        total += greedy_route(ring, placement.slot_of(u), placement.slot_of(v)).hop_count;
        total += greedy_route(ring, placement.slot_of(v), placement.slot_of(u)).hop_count;
    }
    return static_cast<double>(total) / static_cast<double>(2 * edges.size());
}

double reliability_finger(const SocialGraph& g, const Ring& ring, const Placement& placement) {
    double sum = 0.0;
    std::size_t users = 0;
    for (UserId u = 0; u < g.node_count(); ++u) {
        if (g.degree(u) == 0) continue;
        const SlotIndex s = placement.slot_of(u);
        std::size_t friends = 0;
        for (std::size_t f = 0; f < ring.finger_count(s); ++f)
            if (g.has_edge(u, placement.user_at(ring.finger(s, f)))) ++friends;
        sum += static_cast<double>(friends) / static_cast<double>(ring.finger_count(s));
        ++users;
    }
    return users == 0 ? 0.0 : sum / static_cast<double>(users);
}

namespace {

std::vector<std::size_t> bfs_distances(const Ring& ring, SlotIndex src) {
    std::vector<std::size_t> dist(ring.size(), SIZE_MAX);
    std::queue<SlotIndex> queue;
    dist[src] = 0;
    queue.push(src);
    while (!queue.empty()) {
        const SlotIndex s = queue.front();
        queue.pop();
        for (std::size_t f = 0; f < ring.finger_count(s); ++f) {
            const SlotIndex t = ring.finger(s, f);
            if (dist[t] != SIZE_MAX) continue;
            dist[t] = dist[s] + 1;
            queue.push(t);
        }
    }
    return dist;
}

}  // namespace

std::vector<double> reliability_ihop(const SocialGraph& g, const Ring& ring,
                                     const Placement& placement, std::size_t max_i, HopMode mode) {
    if (max_i == 0) throw std::invalid_argument("reliability_ihop: max_i must be >= 1");
    std::vector<double> sum(max_i, 0.0);
    std::size_t users = 0;
    for (UserId u = 0; u < g.node_count(); ++u) {
        if (g.degree(u) == 0) continue;
        const SlotIndex su = placement.slot_of(u);
        std::vector<std::size_t> bfs;
        if (mode == HopMode::Bfs) bfs = bfs_distances(ring, su);
        for (std::size_t i = 1; i <= max_i; ++i) {
            std::size_t reached = 0;
            for (UserId v : g.neighbors(u)) {
                const SlotIndex sv = placement.slot_of(v);
                const std::size_t h =
                    mode == HopMode::Bfs ? bfs[sv] : greedy_route(ring, su, sv).hop_count;
                if (h <= i) ++reached;
            }
            sum[i - 1] += static_cast<double>(reached) / static_cast<double>(g.degree(u));
        }
        ++users;
    }
    for (double& s : sum) s = users == 0 ? 0.0 : s / static_cast<double>(users);
    return sum;
}

}  // namespace sdht::serial
