#include "sdht/metrics.hpp"

#include "metrics_detail.hpp"

#include <cstdint>
#include <ostream>
#include <stdexcept>

namespace sdht {

std::optional<double> IterationReport::per_iteration_fraction() const {
    return migration_cost(swaps, attempts);
}

std::optional<double> IterationReport::cumulative_fraction() const {
    return migration_cost(cumulative_swaps, cumulative_attempts);
}

std::optional<double> migration_cost(std::uint64_t swaps, std::uint64_t attempts) {
    if (attempts == 0) return std::nullopt;
    return static_cast<double>(swaps) / static_cast<double>(attempts);
}

namespace {

void check_snapshot(const SocialGraph& g, const Ring& ring, const Placement& placement) {
    if (g.node_count() != ring.size() || placement.size() != ring.size())
        throw std::invalid_argument("metrics: graph, ring and placement sizes differ");
}

/// Depth-limited BFS over the directed finger graph. dist[t] holds the hop
/// count for slots stamped with `stamp`; others are farther than max_depth.
struct FingerBfs {
    std::vector<std::uint32_t> stamp_of;
    std::vector<std::uint8_t> dist;
    std::vector<SlotIndex> frontier, next;
    std::uint32_t stamp = 0;

    explicit FingerBfs(std::size_t n) : stamp_of(n, 0), dist(n, 0) {}

    void run(const Ring& ring, SlotIndex src, std::size_t max_depth) {
        ++stamp;
        stamp_of[src] = stamp;
        dist[src] = 0;
        frontier.assign(1, src);
        for (std::size_t depth = 1; depth <= max_depth && !frontier.empty(); ++depth) {
            next.clear();
            for (SlotIndex s : frontier)
                ring.for_each_finger(s, [&](SlotIndex t) {
                    if (stamp_of[t] == stamp) return;
                    stamp_of[t] = stamp;
                    dist[t] = static_cast<std::uint8_t>(depth);
                    next.push_back(t);
                });
            frontier.swap(next);
        }
    }
    bool within(SlotIndex t) const { return stamp_of[t] == stamp; }
};

std::size_t friend_fingers(const SocialGraph& g, const Ring& ring, const Placement& placement,
                           UserId u) {
    std::size_t hits = 0;
    ring.for_each_finger(placement.slot_of(u), [&](SlotIndex t) {
        if (g.has_edge(u, placement.user_at(t))) ++hits;
    });
    return hits;
}

/// Ordered mean of per-user values over users with friends, plain and degree-weighted.
std::pair<double, double> user_means(const SocialGraph& g, const std::vector<double>& value) {
    double sum = 0.0, weighted = 0.0;
    std::size_t users = 0, degree_total = 0;
    for (UserId u = 0; u < g.node_count(); ++u) {
        const std::size_t deg = g.degree(u);
        if (deg == 0) continue;
        sum += value[u];
        weighted += value[u] * static_cast<double>(deg);
        ++users;
        degree_total += deg;
    }
    if (users == 0) return {0.0, 0.0};
    return {sum / static_cast<double>(users), weighted / static_cast<double>(degree_total)};
}

}  // namespace

std::optional<double> avg_friend_latency(const SocialGraph& g, const Ring& ring,
                                         const Placement& placement, std::size_t sample_cap,
                                         std::uint64_t seed) {
    check_snapshot(g, ring, placement);
    if (g.edge_count() == 0) return std::nullopt;
    std::uint64_t total = 0;
    std::uint64_t pairs = 0;
    if (auto sample = detail::latency_sample(g, sample_cap, seed)) {
        const auto m = static_cast<std::int64_t>(sample->size());
#pragma omp parallel for reduction(+ : total) schedule(static)
        for (std::int64_t e = 0; e < m; ++e) {
            const auto [u, v] = (*sample)[static_cast<std::size_t>(e)];
            const SlotIndex su = placement.slot_of(u), sv = placement.slot_of(v);
            total += route_hops(ring, su, sv) + route_hops(ring, sv, su);
        }
        pairs = 2 * sample->size();
    } else {
        const auto n = static_cast<std::int64_t>(g.node_count());
#pragma omp parallel for reduction(+ : total) schedule(dynamic, 32)
        for (std::int64_t i = 0; i < n; ++i) {
            const auto u = static_cast<UserId>(i);
            const SlotIndex su = placement.slot_of(u);
            for (UserId v : g.neighbors(u)) total += route_hops(ring, su, placement.slot_of(v));
        }
        pairs = 2 * g.edge_count();
    }
    return static_cast<double>(total) / static_cast<double>(pairs);
}

double reliability_finger(const SocialGraph& g, const Ring& ring, const Placement& placement) {
    check_snapshot(g, ring, placement);
    std::vector<double> share(g.node_count(), 0.0);
    const auto n = static_cast<std::int64_t>(g.node_count());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto u = static_cast<UserId>(i);
        if (g.degree(u) == 0) continue;
        share[u] = static_cast<double>(friend_fingers(g, ring, placement, u)) /
                   static_cast<double>(ring.finger_count(placement.slot_of(u)));
    }
    return user_means(g, share).first;
}

std::vector<double> reliability_ihop(const SocialGraph& g, const Ring& ring,
                                     const Placement& placement, std::size_t max_i, HopMode mode) {
    MetricsOptions options;
    options.max_hops = max_i;
    options.hop_mode = mode;
    options.sample_cap = SIZE_MAX;
    return evaluate_snapshot(g, ring, placement, options).reliability_ihop;
}

SnapshotMetrics evaluate_snapshot(const SocialGraph& g, const Ring& ring,
                                  const Placement& placement, const MetricsOptions& options) {
    check_snapshot(g, ring, placement);
    if (options.max_hops == 0 || options.max_hops > 255)
        throw std::invalid_argument("metrics: max_hops must be in 1..255");
    const std::size_t n = g.node_count();
    const std::size_t max_i = options.max_hops;

    // Greedy hop count for every directed friend pair, in adjacency order.
    std::vector<std::uint32_t> hops(2 * g.edge_count());
    std::vector<double> finger_share(n, 0.0);
    std::vector<std::uint32_t> within(n * max_i, 0);  // friends of u within i hops

#pragma omp parallel
    {
        std::optional<FingerBfs> bfs;
        if (options.hop_mode == HopMode::Bfs) bfs.emplace(n);
#pragma omp for schedule(dynamic, 32)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
            const auto u = static_cast<UserId>(i);
            const auto friends = g.neighbors(u);
            if (friends.empty()) continue;
            const SlotIndex su = placement.slot_of(u);
            finger_share[u] = static_cast<double>(friend_fingers(g, ring, placement, u)) /
                              static_cast<double>(ring.finger_count(su));
            if (bfs) bfs->run(ring, su, max_i);
            std::size_t entry = g.adjacency_offset(u);
            for (UserId v : friends) {
                const SlotIndex sv = placement.slot_of(v);
                const auto h = static_cast<std::uint32_t>(route_hops(ring, su, sv));
                hops[entry++] = h;
                std::size_t reach = h;
                if (bfs) reach = bfs->within(sv) ? bfs->dist[sv] : max_i + 1;
                for (std::size_t level = reach; level <= max_i; ++level)
                    if (level >= 1) ++within[u * max_i + level - 1];
            }
        }
    }

    SnapshotMetrics out;
    if (g.edge_count() > 0) {
        std::uint64_t total = 0;
        std::uint64_t pairs = 0;
        if (auto sample = detail::latency_sample(g, options.sample_cap, options.seed)) {
            auto entry_of = [&](UserId a, UserId b) {
                const auto adj = g.neighbors(a);
                return g.adjacency_offset(a) +
                       static_cast<std::size_t>(std::lower_bound(adj.begin(), adj.end(), b) - adj.begin());
            };
            for (auto [u, v] : *sample) total += hops[entry_of(u, v)] + hops[entry_of(v, u)];
            pairs = 2 * sample->size();
        } else {
            for (std::uint32_t h : hops) total += h;
            pairs = hops.size();
        }
        out.avg_latency = static_cast<double>(total) / static_cast<double>(pairs);
    }

    std::tie(out.reliability_finger, out.reliability_finger_weighted) = user_means(g, finger_share);
    std::vector<double> share(n, 0.0);
    for (std::size_t level = 0; level < max_i; ++level) {
        for (UserId u = 0; u < n; ++u)
            if (g.degree(u) > 0)
                share[u] = static_cast<double>(within[u * max_i + level]) / static_cast<double>(g.degree(u));
        const auto [plain, weighted] = user_means(g, share);
        out.reliability_ihop.push_back(plain);
        out.reliability_ihop_weighted.push_back(weighted);
    }
    return out;
}

namespace {

void write_optional(std::ostream& out, const std::optional<double>& v) {
    out << ',';
    if (v) out << *v;
}

void write_level(std::ostream& out, const std::vector<double>& values, std::size_t i) {
    out << ',';
    if (i < values.size()) out << values[i];
}

}  // namespace

void write_csv_header(std::ostream& out) {
    out << "iteration,avg_latency,swaps,attempts,per_iter_fraction,cum_fraction,"
           "rel_finger,rel_1hop,rel_2hop,rel_3hop,moved_fraction,rel_finger_degw,"
           "rel_1hop_degw,rel_2hop_degw,rel_3hop_degw\n";
}

void write_csv_row(std::ostream& out, const IterationReport& r) {
    const auto old_precision = out.precision(10);
    out << r.iteration;
    write_optional(out, r.metrics ? r.metrics->avg_latency : std::nullopt);
    out << ',' << r.swaps << ',' << r.attempts;
    write_optional(out, r.per_iteration_fraction());
    write_optional(out, r.cumulative_fraction());
    if (r.metrics) {
        out << ',' << r.metrics->reliability_finger;
        for (std::size_t i = 0; i < 3; ++i) write_level(out, r.metrics->reliability_ihop, i);
    } else {
        out << ",,,,";
    }
    out << ',' << r.moved_fraction();
    if (r.metrics) {
        out << ',' << r.metrics->reliability_finger_weighted;
        for (std::size_t i = 0; i < 3; ++i) write_level(out, r.metrics->reliability_ihop_weighted, i);
    } else {
        out << ",,,,";
    }
    out << '\n';
    out.precision(old_precision);
}

}  // namespace sdht
