#pragma once

#include "sdht/overlay.hpp"
#include "sdht/random.hpp"
#include "sdht/social_graph.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

namespace sdht::detail {

/// Undirected edges whose two directions are routed for the latency metric.
/// Every edge when 2|E| <= cap, otherwise floor(cap / 2) edges drawn without
/// replacement and returned in ascending edge order.
inline std::optional<std::vector<std::pair<UserId, UserId>>> latency_sample(
    const SocialGraph& g, std::size_t cap, std::uint64_t seed) {
    auto edges = g.edges();
    if (2 * edges.size() <= cap) return std::nullopt;
    const std::size_t take = cap / 2;
    std::vector<std::size_t> index(edges.size());
    std::iota(index.begin(), index.end(), std::size_t{0});
    Rng rng(derive_seed(seed, 5));
    for (std::size_t i = 0; i < take; ++i) {
        const auto j = i + static_cast<std::size_t>(uniform_index(rng, index.size() - i));
        std::swap(index[i], index[j]);
    }
    index.resize(take);
    std::sort(index.begin(), index.end());
    std::vector<std::pair<UserId, UserId>> out;
    out.reserve(take);
    for (std::size_t i : index) out.push_back(edges[i]);
    return out;
}

}  // namespace sdht::detail
