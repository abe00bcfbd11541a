// sdht: command-line experiment runner.
//
//   sdht fetch [name...]        download SNAP datasets listed in the manifest
//   sdht embed ...              gossip embedding runs (latency, migration, reliability)
//   sdht orderings ...          descending / random / ascending initiator orders
//   sdht relabel ...            re-embed a Symphony overlay's own finger graph
//   sdht metrics ...            recompute snapshot metrics from a checkpoint
//
// `sdht --config run.ini embed ...` reads options from an INI/TOML file: one
// `key = value` per line under a [embed] / [orderings] / [relabel] section,
// keys being the long option names. Command-line flags win over the file.

#include "sdht/experiment.hpp"
#include "sdht/fetch.hpp"
#include "sdht/generators.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <map>

namespace {

using namespace sdht;

const std::map<std::string, SelectionScheme> kSchemes{{"random", SelectionScheme::Random},
                                                      {"direct", SelectionScheme::Direct},
                                                      {"greedy", SelectionScheme::Greedy},
                                                      {"smart", SelectionScheme::Smart}};
const std::map<std::string, CostMetric> kMetrics{{"ring", CostMetric::RingDistance},
                                                 {"hops", CostMetric::HopCount}};
const std::map<std::string, Ordering> kOrderings{{"random", Ordering::RandomOrder},
                                                 {"descending", Ordering::DescendingDegree},
                                                 {"ascending", Ordering::AscendingDegree}};
const std::map<std::string, IterationUnit> kUnits{{"sweep", IterationUnit::Sweep},
                                                  {"attempt", IterationUnit::Attempt}};
const std::map<std::string, IdMode> kIdModes{{"uniform", IdMode::UniformRandom},
                                             {"even", IdMode::EvenlySpaced}};
const std::map<std::string, HopMode> kHopModes{{"greedy", HopMode::Greedy}, {"bfs", HopMode::Bfs}};

struct KOption {
    std::size_t value = 0;  // 0: ceil(log2 n)
};

void add_gossip_options(CLI::App* cmd, GossipConfig& g) {
    cmd->add_option("--scheme", g.scheme, "Peer selection: random, direct, greedy, smart")
        ->transform(CLI::CheckedTransformer(kSchemes, CLI::ignore_case));
    cmd->add_option("--metric", g.metric, "Cost distance: ring (identifier distance) or hops")
        ->transform(CLI::CheckedTransformer(kMetrics, CLI::ignore_case));
    cmd->add_option("--ordering", g.ordering, "Initiator order: random, descending, ascending")
        ->transform(CLI::CheckedTransformer(kOrderings, CLI::ignore_case));
    cmd->add_option("--unit", g.unit, "Iteration unit: sweep or attempt")
        ->transform(CLI::CheckedTransformer(kUnits, CLI::ignore_case));
    cmd->add_option("--iterations", g.iterations, "Iterations to run")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", g.seed, "Base seed; replicate r uses seed + r");
    cmd->add_option("--smart-width", g.smart_width, "Top-k width of the smart scheme")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--literal-abs", g.literal_abs, "Use |x_i - x_j| instead of ring distance");
    cmd->add_option("--metrics-every", g.metrics_every,
                    "Snapshot metrics every N iterations (0: first and last only)");
    cmd->add_option("--sample-cap", g.metrics.sample_cap, "Directed friend pairs routed for latency");
    cmd->add_option("--hop-mode", g.metrics.hop_mode, "i-hop reliability via greedy routes or bfs")
        ->transform(CLI::CheckedTransformer(kHopModes, CLI::ignore_case));
}

void add_experiment_options(CLI::App* cmd, ExperimentSpec& spec, KOption& k) {
    cmd->add_option("--dataset", spec.dataset, "Edge-list file (.txt or .gz) or generator spec")->required();
    cmd->add_flag("--directed", spec.directed_input, "Input lists directed arcs (symmetrized)");
    cmd->add_option("--k", k.value, "Long links per slot (default ceil(log2 n))");
    cmd->add_option("--id-mode", spec.id_mode, "Slot identifiers: uniform or even")
        ->transform(CLI::CheckedTransformer(kIdModes, CLI::ignore_case));
    cmd->add_option("--replicates", spec.replicates, "Number of seeded replicates")->check(CLI::PositiveNumber);
    cmd->add_option("--seeds", spec.seeds, "Explicit replicate seeds (overrides --replicates)")->delimiter(',');
    cmd->add_option("--out", spec.output_dir, "Output directory");
    cmd->add_option("--name", spec.name, "Output file prefix");
    cmd->add_flag("--no-checkpoints", [&spec](std::int64_t) { spec.write_checkpoints = false; },
                  "Skip writing final-state checkpoints");
    cmd->add_flag("--quiet", [&spec](std::int64_t) { spec.log_progress = false; }, "No progress on stderr");
    add_gossip_options(cmd, spec.gossip);
}

void apply_k(ExperimentSpec& spec, const KOption& k) {
    if (k.value > 0) spec.k = k.value;
}

int run_fetch(const std::vector<std::string>& names, const std::filesystem::path& manifest,
              const std::filesystem::path& data_dir, const std::string& local) {
    const auto entries = read_manifest(manifest);
    if (!local.empty() && names.size() != 1)
        throw std::invalid_argument("--from needs exactly one dataset name");
    int fetched = 0;
    for (const auto& e : entries) {
        if (!names.empty() && std::find(names.begin(), names.end(), e.name) == names.end()) continue;
        std::clog << "[sdht] fetching " << e.name << " from " << (local.empty() ? e.url : local) << std::endl;
        std::optional<std::filesystem::path> source;
        if (!local.empty()) source = local;
        const auto r = fetch_dataset(e, data_dir, source);
        std::cout << e.name << ' ' << r.path.string() << " sha256=" << r.sha256
                  << (r.verified ? " verified" : " unpinned") << '\n';
        ++fetched;
    }
    if (fetched == 0) throw std::invalid_argument("no manifest entry matched");
    return 0;
}

int run_metrics(const std::filesystem::path& checkpoint, const std::string& dataset, bool directed,
                const MetricsOptions& options) {
    const auto cp = read_checkpoint(checkpoint);
    const SocialGraph g = is_generator_spec(dataset) ? generate_graph(dataset) : load_edge_list(dataset, directed);
    const auto m = evaluate_snapshot(g, cp.ring, cp.placement, options);
    nlohmann::json out{{"nodes", g.node_count()},
                       {"edges", g.edge_count()},
                       {"avg_latency", m.avg_latency ? nlohmann::json(*m.avg_latency) : nlohmann::json(nullptr)},
                       {"rel_finger", m.reliability_finger},
                       {"rel_ihop", m.reliability_ihop},
                       {"rel_finger_degw", m.reliability_finger_weighted},
                       {"rel_ihop_degw", m.reliability_ihop_weighted}};
    std::cout << out.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Socially-aware Symphony embedding via gossip-based identifier swaps"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI/TOML file; options go under a [subcommand] section");

    std::vector<std::string> fetch_names;
    std::filesystem::path manifest = "data/datasets.manifest";
    std::filesystem::path data_dir = "data";
    std::string fetch_from;
    auto* fetch = app.add_subcommand("fetch", "Download datasets listed in the manifest");
    fetch->add_option("names", fetch_names, "Dataset names (default: all)");
    fetch->add_option("--manifest", manifest, "Manifest file");
    fetch->add_option("--data-dir", data_dir, "Destination directory");
    fetch->add_option("--from", fetch_from, "Offline: take the dataset from this local file");

    ExperimentSpec embed_spec;
    KOption embed_k;
    auto* embed = app.add_subcommand("embed", "Run the gossip embedding and write per-iteration CSVs");
    add_experiment_options(embed, embed_spec, embed_k);

    ExperimentSpec order_spec;
    order_spec.name = "orderings";
    KOption order_k;
    auto* orderings = app.add_subcommand("orderings", "Compare descending, random and ascending initiator orders");
    add_experiment_options(orderings, order_spec, order_k);

    RelabelSpec relabel_spec;
    std::size_t relabel_k = 0;
    std::string strength = "both";
    auto* relabel = app.add_subcommand("relabel", "Re-embed the finger graph of a Symphony overlay");
    relabel->add_option("--n", relabel_spec.n, "Overlay size")->check(CLI::Range(100, 10000000));
    relabel->add_option("--k", relabel_k, "Long links per slot (default ceil(log2 n))");
    relabel->add_option("--seeds", relabel_spec.seeds, "Replicate seeds")->delimiter(',');
    relabel->add_option("--strength", strength, "Tie strength: iddistance, common or both")
        ->check(CLI::IsMember({"iddistance", "common", "both"}));
    relabel->add_option("--out", relabel_spec.output_dir, "Output directory");
    relabel->add_option("--name", relabel_spec.name, "Output file prefix");
    relabel->add_flag("--quiet", [&](std::int64_t) { relabel_spec.log_progress = false; }, "No progress on stderr");
    add_gossip_options(relabel, relabel_spec.gossip);

    std::filesystem::path checkpoint;
    std::string metrics_dataset;
    bool metrics_directed = false;
    MetricsOptions metrics_options;
    auto* metrics = app.add_subcommand("metrics", "Recompute snapshot metrics from a checkpoint (JSON on stdout)");
    metrics->add_option("--checkpoint", checkpoint, "Checkpoint written by embed")->required()->check(CLI::ExistingFile);
    metrics->add_option("--dataset", metrics_dataset, "Graph the checkpoint was produced from")->required();
    metrics->add_flag("--directed", metrics_directed, "Input lists directed arcs");
    metrics->add_option("--sample-cap", metrics_options.sample_cap, "Directed friend pairs routed for latency");
    metrics->add_option("--hop-mode", metrics_options.hop_mode, "greedy or bfs")
        ->transform(CLI::CheckedTransformer(kHopModes, CLI::ignore_case));

    CLI11_PARSE(app, argc, argv);

    try {
        if (fetch->parsed()) return run_fetch(fetch_names, manifest, data_dir, fetch_from);
        if (embed->parsed()) {
            apply_k(embed_spec, embed_k);
            run_experiment(embed_spec);
            return 0;
        }
        if (orderings->parsed()) {
            apply_k(order_spec, order_k);
            run_ordering_comparison(order_spec);
            return 0;
        }
        if (relabel->parsed()) {
            if (relabel_k > 0) relabel_spec.k = relabel_k;
            if (strength == "iddistance") relabel_spec.strength_modes = {StrengthMode::IdDistance};
            if (strength == "common") relabel_spec.strength_modes = {StrengthMode::CommonNeighbors};
            for (const auto& r : run_relabel(relabel_spec))
                std::cout << to_string(r.mode) << " mean_latency_gain " << r.result.mean_latency_gain() << '\n';
            return 0;
        }
        if (metrics->parsed()) return run_metrics(checkpoint, metrics_dataset, metrics_directed, metrics_options);
    } catch (const std::exception& e) {
        std::cerr << "sdht: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
