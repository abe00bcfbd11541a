#pragma once

#include "sdht/embedding.hpp"
#include "sdht/overlay.hpp"
#include "sdht/social_graph.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sdht {

/// Everything needed to reproduce one experiment.
struct ExperimentSpec {
    /// Edge-list path, or a generator spec (see generate_graph).
    std::string dataset;
    bool directed_input = false;
    GossipConfig gossip;
    /// Long links per slot; ceil(log2 n) when unset.
    std::optional<std::size_t> k;
    IdMode id_mode = IdMode::UniformRandom;
    std::size_t replicates = 5;
    /// Explicit replicate seeds; when empty, gossip.seed + r for r = 0..replicates-1.
    std::vector<std::uint64_t> seeds;
    std::filesystem::path output_dir = "out";
    /// Prefix of every output file.
    std::string name = "embed";
    bool write_checkpoints = true;
    bool log_progress = true;

    void validate() const;
    std::vector<std::uint64_t> replicate_seeds() const;
};

/// Reports of one replicate; reports[0] is the iteration-0 baseline.
struct ReplicateResult {
    std::uint64_t seed = 0;
    std::vector<IterationReport> reports;
    Ring final_ring;
    Placement final_placement;

    const IterationReport& baseline() const { return reports.front(); }
    const IterationReport& final_report() const { return reports.back(); }
    /// (baseline - final) / baseline of the average friend latency.
    std::optional<double> latency_gain() const;
};

struct ExperimentResult {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    std::size_t k = 0;
    std::vector<ReplicateResult> replicates;
    std::vector<std::filesystem::path> files;

    double mean_latency_gain() const;
};

/// Load or generate the spec's dataset; logs symmetrization counts.
SocialGraph load_dataset(const ExperimentSpec& spec);

/// One seeded replicate in memory: initialize, baseline row, run.
ReplicateResult run_replicate(const SocialGraph& g, const ExperimentSpec& spec, std::uint64_t seed,
                              const StrengthProvider& strength = {});

/// All replicates; writes <name>_seed<S>.csv per replicate, <name>_summary.json,
/// <name>_aggregate.csv (mean and stddev per column) and, optionally,
/// <name>_seed<S>.ckpt. Files written so far are removed if anything fails.
ExperimentResult run_experiment(const ExperimentSpec& spec);
ExperimentResult run_experiment(const SocialGraph& g, const ExperimentSpec& spec,
                                const StrengthProvider& strength = {});

/// Graph and strength used by one replicate.
struct ReplicateInput {
    SocialGraph graph;
    StrengthProvider strength;
};

/// As above, with the input chosen per replicate seed.
ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const std::function<ReplicateInput(std::uint64_t)>& input_for);

struct OrderingComparison {
    ExperimentResult descending;
    ExperimentResult random;
    ExperimentResult ascending;
};

/// The three initiator orderings on identical seeds (hence identical rings and
/// initial placements). Outputs are named <name>_<ordering>_*.
OrderingComparison run_ordering_comparison(const ExperimentSpec& spec);

/// Overlay self-relabeling: a Symphony ring's finger graph is re-embedded on
/// a fresh ring.
struct RelabelSpec {
    std::size_t n = 10000;
    std::optional<std::size_t> k;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    /// Strength modes to run; each gets its own outputs.
    std::vector<StrengthMode> strength_modes{StrengthMode::IdDistance, StrengthMode::CommonNeighbors};
    GossipConfig gossip;
    std::filesystem::path output_dir = "out";
    std::string name = "relabel";
    bool log_progress = true;
};

struct RelabelResult {
    StrengthMode mode = StrengthMode::IdDistance;
    ExperimentResult result;
    /// Every finger-graph edge is one hop in the step-1 overlay.
    double ideal_latency = 1.0;
};

std::vector<RelabelResult> run_relabel(const RelabelSpec& spec);

/// Step 1 of relabeling: finger graph of a ring built from `seed`, plus the
/// step-1 ids used as IdDistance reference.
struct RelabelInput {
    SocialGraph graph;
    std::vector<double> reference_ids;
};
RelabelInput relabel_input(std::size_t n, std::size_t k, std::uint64_t seed);

std::string to_string(SelectionScheme scheme);
std::string to_string(CostMetric metric);
std::string to_string(Ordering ordering);
std::string to_string(StrengthMode mode);

}  // namespace sdht
