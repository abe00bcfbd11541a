#include "sdht/embedding.hpp"

#include "sdht/identifier.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace sdht {

void GossipConfig::validate() const {
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (smart_width < 1) throw std::invalid_argument("smart_width must be >= 1");
    if (metrics.max_hops < 1) throw std::invalid_argument("max_hops must be >= 1");
}

std::size_t default_long_links(std::size_t n) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

namespace {

constexpr UserId kNobody = UINT32_MAX;

}  // namespace

Engine::Engine(SocialGraph graph, Ring ring, Placement placement, GossipConfig config,
               StrengthProvider strength)
    : graph_(std::move(graph)),
      ring_(std::move(ring)),
      placement_(std::move(placement)),
      config_(config),
      rng_(derive_seed(config.seed, 10)) {
    config_.validate();
    const std::size_t n = graph_.node_count();
    if (ring_.size() != n || placement_.size() != n)
        throw std::invalid_argument("engine: graph, ring and placement sizes differ");
    if (strength.mode != config_.strength_mode)
        throw std::invalid_argument("engine: strength provider does not match config.strength_mode");
    strengths_ = build_strength_table(graph_, strength);

    if (config_.scheme == SelectionScheme::Greedy || config_.scheme == SelectionScheme::Smart) {
        const std::size_t width = config_.scheme == SelectionScheme::Greedy ? 1 : config_.smart_width;
        ranked_friends_.resize(n);
        for (UserId u = 0; u < n; ++u) ranked_friends_[u] = rank_friends(graph_, strengths_, u, width);
    }

    if (config_.ordering != Ordering::RandomOrder) {
        fixed_order_.resize(n);
        std::iota(fixed_order_.begin(), fixed_order_.end(), UserId{0});
        const bool descending = config_.ordering == Ordering::DescendingDegree;
        std::stable_sort(fixed_order_.begin(), fixed_order_.end(), [&](UserId a, UserId b) {
            return descending ? graph_.degree(a) > graph_.degree(b) : graph_.degree(a) < graph_.degree(b);
        });
    }
    moved_.assign(n, false);
}

Engine Engine::initialize(SocialGraph graph, std::size_t k, GossipConfig config, IdMode id_mode,
                          StrengthProvider strength) {
    const std::size_t n = graph.node_count();
    Ring ring = build_ring(n, k, config.seed, id_mode);
    Placement placement = Placement::random(n, config.seed);
    return Engine(std::move(graph), std::move(ring), std::move(placement), config, std::move(strength));
}

double Engine::distance(SlotIndex a, SlotIndex b) const {
    if (config_.metric == CostMetric::RingDistance)
        return circular_distance(ring_.id(a), ring_.id(b), config_.literal_abs);
    ++route_evaluations_;
    return static_cast<double>(route_hops(ring_, a, b));
}

double Engine::cost_with(UserId i, SlotIndex at_slot, UserId moved, SlotIndex moved_to) const {
    const auto friends = graph_.neighbors(i);
    const auto s = strengths_.of(i);
    double cost = 0.0;
    for (std::size_t idx = 0; idx < friends.size(); ++idx) {
        const UserId f = friends[idx];
        const SlotIndex fs = f == moved ? moved_to : placement_.slot_of(f);
        cost += s[idx] * distance(at_slot, fs);
    }
    return cost;
}

double Engine::node_cost(UserId i, SlotIndex at_slot) const {
    if (i >= graph_.node_count() || at_slot >= ring_.size())
        throw std::out_of_range("node_cost: unknown user or slot");
    return cost_with(i, at_slot, kNobody, 0);
}

std::optional<UserId> Engine::select_peer(UserId i) {
    const std::size_t n = graph_.node_count();
    if (i >= n) throw std::out_of_range("select_peer: unknown user");
    if (config_.scheme == SelectionScheme::Random) {
        const auto r = static_cast<UserId>(uniform_index(rng_, n - 1));
        return r < i ? r : r + 1;
    }

    UserId m = kNobody;
    const auto friends = graph_.neighbors(i);
    switch (config_.scheme) {
        case SelectionScheme::Direct:
            if (!friends.empty()) m = friends[uniform_index(rng_, friends.size())];
            break;
        case SelectionScheme::Greedy:
        case SelectionScheme::Smart: {
            const auto& ranked = ranked_friends_[i];
            if (!ranked.empty()) m = ranked[uniform_index(rng_, ranked.size())];
            break;
        }
        case SelectionScheme::Random:
            break;
    }
    if (m == kNobody) return std::nullopt;

    // A uniformly chosen finger of m's slot, skipping entries held by i.
    const SlotIndex ms = placement_.slot_of(m);
    scratch_.clear();
    ring_.for_each_finger(ms, [&](SlotIndex t) {
        const UserId occupant = placement_.user_at(t);
        if (occupant != i) scratch_.push_back(occupant);
    });
    if (scratch_.empty()) return std::nullopt;
    return scratch_[uniform_index(rng_, scratch_.size())];
}

SwapDecision Engine::evaluate_swap(UserId i, UserId j) {
    if (i == j) throw std::invalid_argument("evaluate_swap: initiator and candidate are the same user");
    if (i >= graph_.node_count() || j >= graph_.node_count())
        throw std::out_of_range("evaluate_swap: unknown user");
    const SlotIndex si = placement_.slot_of(i);
    const SlotIndex sj = placement_.slot_of(j);
    SwapDecision d;
    d.initiator = i;
    d.candidate = j;
    d.cost_before = cost_with(i, si, kNobody, 0) + cost_with(j, sj, kNobody, 0);
    // Everyone else stays put; if i and j are friends each sees the other moved.
    d.cost_after = cost_with(i, sj, j, si) + cost_with(j, si, i, sj);
    d.swapped = d.cost_before > d.cost_after;
    if (d.swapped) placement_.swap_users(i, j);
    if (observer_) observer_(d);
    return d;
}

std::vector<UserId> Engine::sweep_order() {
    if (config_.ordering != Ordering::RandomOrder) return fixed_order_;
    std::vector<UserId> order(graph_.node_count());
    std::iota(order.begin(), order.end(), UserId{0});
    shuffle(std::span<UserId>(order), rng_);
    return order;
}

void Engine::attempt(UserId i, IterationReport& report) {
    ++report.attempts;
    ++total_attempts_;
    const auto j = select_peer(i);
    if (!j) return;
    const SwapDecision d = evaluate_swap(i, *j);
    if (!d.swapped) return;
    ++report.swaps;
    ++total_swaps_;
    for (UserId u : {i, *j}) {
        if (!moved_[u]) {
            moved_[u] = true;
            ++users_moved_;
        }
    }
}

IterationReport Engine::run_iteration() {
    IterationReport report;
    report.iteration = ++iteration_;
    report.node_count = graph_.node_count();
    if (config_.unit == IterationUnit::Sweep) {
        for (UserId u : sweep_order()) attempt(u, report);
    } else {
        if (cursor_ == 0) current_order_ = sweep_order();
        attempt(current_order_[cursor_], report);
        cursor_ = (cursor_ + 1) % current_order_.size();
    }
    report.cumulative_swaps = total_swaps_;
    report.cumulative_attempts = total_attempts_;
    report.users_moved = users_moved_;
    const bool last = iteration_ == config_.iterations;
    const bool periodic = config_.metrics_every > 0 && iteration_ % config_.metrics_every == 0;
    if (last || periodic) report.metrics = snapshot();
    return report;
}

std::vector<IterationReport> Engine::run() {
    std::vector<IterationReport> reports;
    reports.reserve(config_.iterations);
    while (iteration_ < config_.iterations) reports.push_back(run_iteration());
    return reports;
}

SnapshotMetrics Engine::snapshot() const {
    return evaluate_snapshot(graph_, ring_, placement_, config_.metrics);
}

IterationReport Engine::baseline_report() const {
    IterationReport report;
    report.iteration = iteration_;
    report.node_count = graph_.node_count();
    report.cumulative_swaps = total_swaps_;
    report.cumulative_attempts = total_attempts_;
    report.users_moved = users_moved_;
    report.metrics = snapshot();
    return report;
}

}  // namespace sdht
