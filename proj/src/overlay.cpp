#include "sdht/overlay.hpp"

#include "sdht/identifier.hpp"
#include "sdht/random.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sdht {

double harmonic_distance(double u, std::size_t n) {
    return std::pow(static_cast<double>(n), u - 1.0);
}

Ring Ring::from_parts(std::vector<double> slot_ids, std::size_t k,
                      std::vector<std::vector<SlotIndex>> long_links,
                      std::vector<std::vector<double>> long_link_points) {
    const std::size_t n = slot_ids.size();
    if (n < 3) throw std::invalid_argument("a ring needs at least 3 slots");
    if (long_links.size() != n) throw std::invalid_argument("one long-link list per slot required");
    if (!long_link_points.empty() && long_link_points.size() != n)
        throw std::invalid_argument("one long-link point list per slot required");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(slot_ids[i] > 0.0 && slot_ids[i] <= 1.0))
            throw std::invalid_argument("slot id outside (0, 1]");
        if (i > 0 && !(slot_ids[i - 1] < slot_ids[i]))
            throw std::invalid_argument("slot ids must be strictly increasing");
    }

    Ring ring;
    ring.k_ = k;
    ring.ids_ = std::move(slot_ids);
    ring.link_offsets_.assign(n + 1, 0);
    for (std::size_t s = 0; s < n; ++s) {
        const auto& links = long_links[s];
        if (links.size() > k) throw std::invalid_argument("slot has more than k long links");
        for (std::size_t a = 0; a < links.size(); ++a) {
            if (links[a] >= n) throw std::invalid_argument("long link target out of range");
            if (links[a] == s) throw std::invalid_argument("long link to self");
            for (std::size_t b = 0; b < a; ++b)
                if (links[a] == links[b]) throw std::invalid_argument("duplicate long link");
        }
        if (!long_link_points.empty() && long_link_points[s].size() != links.size())
            throw std::invalid_argument("long-link point count mismatch");
        ring.link_offsets_[s + 1] = ring.link_offsets_[s] + links.size();
        ring.links_.insert(ring.links_.end(), links.begin(), links.end());
        if (!long_link_points.empty())
            ring.points_.insert(ring.points_.end(), long_link_points[s].begin(),
                                long_link_points[s].end());
    }
    return ring;
}

SlotIndex Ring::manager_of(double point) const {
    const auto it = std::lower_bound(ids_.begin(), ids_.end(), point);
    if (it == ids_.end()) return 0;
    return static_cast<SlotIndex>(it - ids_.begin());
}

namespace {

std::vector<double> draw_slot_ids(std::size_t n, Rng& rng, IdMode mode) {
    std::vector<double> ids;
    ids.reserve(n);
    if (mode == IdMode::EvenlySpaced) {
        for (std::size_t i = 1; i <= n; ++i)
            ids.push_back(static_cast<double>(i) / static_cast<double>(n));
        return ids;
    }
    // Collisions are measure-zero but still redrawn.
    while (ids.size() < n) {
        while (ids.size() < n) ids.push_back(1.0 - uniform01(rng));
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    }
    return ids;
}

bool contains(const std::vector<SlotIndex>& v, SlotIndex x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

Ring build_ring(std::size_t n, std::size_t k, std::uint64_t seed, IdMode id_mode) {
    if (n < 3) throw std::invalid_argument("build_ring: n must be >= 3");
    Rng id_rng(derive_seed(seed, 1));
    Rng link_rng(derive_seed(seed, 2));
    auto ids = draw_slot_ids(n, id_rng, id_mode);

    // manager_of needs the ids, so build a link-free ring first.
    const Ring bare = Ring::from_parts(ids, k, std::vector<std::vector<SlotIndex>>(n));
    std::vector<std::vector<SlotIndex>> links(n);
    std::vector<std::vector<double>> points(n);
    for (SlotIndex s = 0; s < n; ++s) {
        links[s].reserve(k);
        points[s].reserve(k);
        for (std::size_t link = 0; link < k; ++link) {
            for (int attempt = 0; attempt <= kLongLinkRetryBudget; ++attempt) {
                const double x = harmonic_distance(uniform01(link_rng), n);
                const double point = wrap_identifier(ids[s] + x);
                const SlotIndex target = bare.manager_of(point);
                if (target == s || contains(links[s], target)) continue;
                links[s].push_back(target);
                points[s].push_back(point);
                break;
            }
        }
    }
    return Ring::from_parts(std::move(ids), k, std::move(links), std::move(points));
}

namespace {

SlotIndex next_hop(const Ring& ring, SlotIndex current, SlotIndex dst) {
    const std::size_t remaining = ring.clockwise_gap(current, dst);
    SlotIndex best = ring.successor(current);
    std::size_t best_gap = 1;
    for (SlotIndex t : ring.long_links(current)) {
        const std::size_t gap = ring.clockwise_gap(current, t);
        if (gap <= remaining && gap > best_gap) {
            best = t;
            best_gap = gap;
        }
    }
    return best;
}

void check_slots(const Ring& ring, SlotIndex src, SlotIndex dst) {
    if (src >= ring.size() || dst >= ring.size()) throw std::out_of_range("route: unknown slot");
}

}  // namespace

RoutePath greedy_route(const Ring& ring, SlotIndex src, SlotIndex dst) {
    check_slots(ring, src, dst);
    RoutePath path;
    path.visited.push_back(src);
    SlotIndex current = src;
    while (current != dst) {
        const SlotIndex next = next_hop(ring, current, dst);
        if (ring.clockwise_gap(next, dst) >= ring.clockwise_gap(current, dst))
            throw std::logic_error("greedy_route made no progress");
        current = next;
        path.visited.push_back(current);
    }
    path.hop_count = path.visited.size() - 1;
    return path;
}

std::size_t route_hops(const Ring& ring, SlotIndex src, SlotIndex dst) {
    std::size_t hops = 0;
    while (src != dst) {
        src = next_hop(ring, src, dst);
        ++hops;
    }
    return hops;
}

Placement::Placement(std::vector<SlotIndex> user_to_slot)
    : user_to_slot_(std::move(user_to_slot)), slot_to_user_(user_to_slot_.size()) {
    std::vector<bool> seen(user_to_slot_.size(), false);
    for (UserId u = 0; u < user_to_slot_.size(); ++u) {
        const SlotIndex s = user_to_slot_[u];
        if (s >= user_to_slot_.size() || seen[s])
            throw std::invalid_argument("placement is not a permutation");
        seen[s] = true;
        slot_to_user_[s] = u;
    }
}

Placement Placement::identity(std::size_t n) {
    std::vector<SlotIndex> slots(n);
    for (std::size_t i = 0; i < n; ++i) slots[i] = static_cast<SlotIndex>(i);
    return Placement(std::move(slots));
}

Placement Placement::random(std::size_t n, std::uint64_t seed) {
    std::vector<SlotIndex> slots(n);
    for (std::size_t i = 0; i < n; ++i) slots[i] = static_cast<SlotIndex>(i);
    Rng rng(derive_seed(seed, 3));
    shuffle(std::span<SlotIndex>(slots), rng);
    return Placement(std::move(slots));
}

void Placement::swap_users(UserId a, UserId b) {
    if (a == b) throw std::invalid_argument("swap_users: a user cannot swap with itself");
    if (a >= size() || b >= size()) throw std::out_of_range("swap_users: unknown user");
    std::swap(user_to_slot_[a], user_to_slot_[b]);
    slot_to_user_[user_to_slot_[a]] = a;
    slot_to_user_[user_to_slot_[b]] = b;
}

bool Placement::is_consistent() const {
    if (user_to_slot_.size() != slot_to_user_.size()) return false;
    for (UserId u = 0; u < user_to_slot_.size(); ++u) {
        const SlotIndex s = user_to_slot_[u];
        if (s >= slot_to_user_.size() || slot_to_user_[s] != u) return false;
    }
    return true;
}

Ring rewire_fingers_to_friends(const Ring& ring, const Placement& placement,
                               const SocialGraph& g, std::uint64_t seed) {
    const std::size_t n = ring.size();
    if (placement.size() != n || g.node_count() != n)
        throw std::invalid_argument("rewire: ring, placement and graph sizes differ");
    if (!ring.has_link_points())
        throw std::invalid_argument("rewire: ring carries no sampled long-link points");
    Rng rng(derive_seed(seed, 4));

    std::vector<double> ids(ring.ids().begin(), ring.ids().end());
    std::vector<std::vector<SlotIndex>> links(n);
    std::vector<std::vector<double>> points(n);
    for (SlotIndex s = 0; s < n; ++s) {
        const UserId occupant = placement.user_at(s);
        const auto friends = g.neighbors(occupant);
        const auto original = ring.long_links(s);
        const auto sampled = ring.long_link_points(s);
        if (friends.empty()) {
            links[s].assign(original.begin(), original.end());
            points[s].assign(sampled.begin(), sampled.end());
            continue;
        }
        auto closest_friend_slot = [&](double point) {
            SlotIndex best = placement.slot_of(friends.front());
            double best_distance = circular_distance(ids[best], point);
            for (UserId f : friends.subspan(1)) {
                const SlotIndex fs = placement.slot_of(f);
                const double d = circular_distance(ids[fs], point);
                if (d < best_distance) {
                    best = fs;
                    best_distance = d;
                }
            }
            return best;
        };
        for (double point : sampled) {
            for (int attempt = 0; attempt <= kLongLinkRetryBudget; ++attempt) {
                if (attempt > 0)
                    point = wrap_identifier(ids[s] + harmonic_distance(uniform01(rng), n));
                const SlotIndex target = closest_friend_slot(point);
                if (contains(links[s], target)) continue;
                links[s].push_back(target);
                points[s].push_back(point);
                break;
            }
        }
    }
    return Ring::from_parts(std::move(ids), ring.k(), std::move(links), std::move(points));
}

SocialGraph finger_graph(const Ring& ring) {
    std::vector<std::pair<UserId, UserId>> arcs;
    arcs.reserve(ring.size() * 2 + ring.filled_long_links());
    for (SlotIndex s = 0; s < ring.size(); ++s)
        ring.for_each_finger(s, [&](SlotIndex t) { arcs.emplace_back(s, t); });
    return SocialGraph::from_edges(ring.size(), arcs);
}

void write_checkpoint(std::ostream& out, const Ring& ring, const Placement& placement) {
    if (placement.size() != ring.size())
        throw std::invalid_argument("checkpoint: placement and ring sizes differ");
    out << "sdht-overlay 1\n";
    out << "slots " << ring.size() << " long_links " << ring.k() << '\n';
    out << std::setprecision(17);
    for (SlotIndex s = 0; s < ring.size(); ++s) {
        out << ring.id(s) << ' ' << placement.user_at(s);
        for (SlotIndex t : ring.long_links(s)) out << ' ' << t;
        out << '\n';
    }
}

void write_checkpoint(const std::filesystem::path& path, const Ring& ring,
                      const Placement& placement) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path.string());
    write_checkpoint(out, ring, placement);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Checkpoint read_checkpoint(std::istream& in) {
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "sdht-overlay")
        throw std::runtime_error("checkpoint: bad header");
    if (version != 1) throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
    std::string slots_kw, links_kw;
    std::size_t n = 0, k = 0;
    if (!(in >> slots_kw >> n >> links_kw >> k) || slots_kw != "slots" || links_kw != "long_links")
        throw std::runtime_error("checkpoint: bad size line");

    std::vector<double> ids(n);
    std::vector<SlotIndex> occupant_slot(n);
    std::vector<std::vector<SlotIndex>> links(n);
    std::vector<bool> occupied(n, false);
    std::string line;
    std::getline(in, line);
    for (std::size_t s = 0; s < n; ++s) {
        if (!std::getline(in, line)) throw std::runtime_error("checkpoint: truncated at slot " + std::to_string(s));
        std::istringstream fields(line);
        std::size_t user = 0;
        if (!(fields >> ids[s] >> user)) throw std::runtime_error("checkpoint: bad slot line " + std::to_string(s));
        if (user >= n || occupied[user]) throw std::runtime_error("checkpoint: occupant is not a permutation");
        occupied[user] = true;
        occupant_slot[user] = static_cast<SlotIndex>(s);
        std::size_t target = 0;
        while (fields >> target) links[s].push_back(static_cast<SlotIndex>(target));
        if (!fields.eof()) throw std::runtime_error("checkpoint: bad link on slot " + std::to_string(s));
    }
    Checkpoint cp{Ring::from_parts(std::move(ids), k, std::move(links)),
                  Placement(std::move(occupant_slot))};
    return cp;
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());
    return read_checkpoint(in);
}

}  // namespace sdht
