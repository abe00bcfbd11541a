#pragma once

#include "sdht/social_graph.hpp"

#include <cstdint>
#include <string>

namespace sdht {

/// Community-structured random graph: users are split into consecutive
/// communities whose sizes are drawn uniformly from [min_size, max_size];
/// each intra-community pair is linked with probability p_in, and
/// `bridges_per_user` random links per user (in expectation) join arbitrary users.
struct PlantedPartitionParams {
    std::size_t nodes = 1000;
    std::size_t min_size = 20;
    std::size_t max_size = 120;
    double p_in = 0.3;
    double bridges_per_user = 1.0;
    std::uint64_t seed = 1;
};

SocialGraph planted_partition(const PlantedPartitionParams& params);

/// Erdos-Renyi G(n, m): m distinct edges drawn uniformly.
SocialGraph random_graph(std::size_t nodes, std::size_t edges, std::uint64_t seed);

/// Build a graph from a generator spec string:
///   planted:<nodes>:<min_size>:<max_size>:<p_in>:<bridges_per_user>:<seed>
///   gnm:<nodes>:<edges>:<seed>
///   symphony:<nodes>:<k>:<seed>        (finger graph of a fresh ring)
/// Throws std::invalid_argument on an unknown or malformed spec.
SocialGraph generate_graph(const std::string& spec);

bool is_generator_spec(const std::string& source);

}  // namespace sdht
