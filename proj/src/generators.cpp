#include "sdht/generators.hpp"

#include "sdht/overlay.hpp"
#include "sdht/random.hpp"

#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace sdht {

SocialGraph planted_partition(const PlantedPartitionParams& params) {
    if (params.nodes < 2 || params.min_size < 1 || params.min_size > params.max_size)
        throw std::invalid_argument("planted_partition: bad sizes");
    if (params.p_in < 0.0 || params.p_in > 1.0) throw std::invalid_argument("planted_partition: p_in outside [0, 1]");
    Rng rng(derive_seed(params.seed, 20));
    std::vector<std::pair<UserId, UserId>> edges;
    std::size_t start = 0;
    while (start < params.nodes) {
        std::size_t size = params.min_size +
                           static_cast<std::size_t>(uniform_index(rng, params.max_size - params.min_size + 1));
        size = std::min(size, params.nodes - start);
        for (std::size_t a = start; a < start + size; ++a)
            for (std::size_t b = a + 1; b < start + size; ++b)
                if (uniform01(rng) < params.p_in)
                    edges.emplace_back(static_cast<UserId>(a), static_cast<UserId>(b));
        start += size;
    }
    const auto bridges = static_cast<std::size_t>(params.bridges_per_user * static_cast<double>(params.nodes) / 2.0);
    for (std::size_t e = 0; e < bridges; ++e) {
        const auto a = static_cast<UserId>(uniform_index(rng, params.nodes));
        const auto b = static_cast<UserId>(uniform_index(rng, params.nodes));
        edges.emplace_back(a, b);
    }
    return SocialGraph::from_edges(params.nodes, edges);
}

SocialGraph random_graph(std::size_t nodes, std::size_t edges, std::uint64_t seed) {
    if (nodes < 2 || edges > nodes * (nodes - 1) / 2) throw std::invalid_argument("random_graph: bad size");
    Rng rng(derive_seed(seed, 21));
    std::set<std::pair<UserId, UserId>> chosen;
    while (chosen.size() < edges) {
        auto a = static_cast<UserId>(uniform_index(rng, nodes));
        auto b = static_cast<UserId>(uniform_index(rng, nodes));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        chosen.emplace(a, b);
    }
    std::vector<std::pair<UserId, UserId>> list(chosen.begin(), chosen.end());
    return SocialGraph::from_edges(nodes, list);
}

bool is_generator_spec(const std::string& source) {
    return source.rfind("planted:", 0) == 0 || source.rfind("gnm:", 0) == 0 ||
           source.rfind("symphony:", 0) == 0;
}

namespace {

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, ':')) parts.push_back(part);
    return parts;
}

}  // namespace

SocialGraph generate_graph(const std::string& spec) {
    const auto parts = split(spec);
    try {
        if (parts.at(0) == "planted" && parts.size() == 7) {
            PlantedPartitionParams p;
            p.nodes = std::stoull(parts[1]);
            p.min_size = std::stoull(parts[2]);
            p.max_size = std::stoull(parts[3]);
            p.p_in = std::stod(parts[4]);
            p.bridges_per_user = std::stod(parts[5]);
            p.seed = std::stoull(parts[6]);
            return planted_partition(p);
        }
        if (parts.at(0) == "gnm" && parts.size() == 4)
            return random_graph(std::stoull(parts[1]), std::stoull(parts[2]), std::stoull(parts[3]));
        if (parts.at(0) == "symphony" && parts.size() == 4)
            return finger_graph(build_ring(std::stoull(parts[1]), std::stoull(parts[2]), std::stoull(parts[3])));
    } catch (const std::logic_error&) {
        throw std::invalid_argument("malformed generator spec: " + spec);
    }
    throw std::invalid_argument("unknown generator spec: " + spec);
}

}  // namespace sdht
