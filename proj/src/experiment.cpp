#include "sdht/experiment.hpp"

#include "sdht/generators.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace sdht {

using nlohmann::json;

std::string to_string(SelectionScheme scheme) {
    switch (scheme) {
        case SelectionScheme::Random: return "random";
        case SelectionScheme::Direct: return "direct";
        case SelectionScheme::Greedy: return "greedy";
        case SelectionScheme::Smart: return "smart";
    }
    return "?";
}

std::string to_string(CostMetric metric) {
    return metric == CostMetric::RingDistance ? "ring" : "hops";
}

std::string to_string(Ordering ordering) {
    switch (ordering) {
        case Ordering::RandomOrder: return "random";
        case Ordering::DescendingDegree: return "descending";
        case Ordering::AscendingDegree: return "ascending";
    }
    return "?";
}

std::string to_string(StrengthMode mode) {
    return mode == StrengthMode::CommonNeighbors ? "common" : "iddistance";
}

void ExperimentSpec::validate() const {
    gossip.validate();
    if (dataset.empty()) throw std::invalid_argument("no dataset given");
    if (replicates < 1 && seeds.empty()) throw std::invalid_argument("replicates must be >= 1");
    if (name.empty()) throw std::invalid_argument("output name must not be empty");
}

std::vector<std::uint64_t> ExperimentSpec::replicate_seeds() const {
    if (!seeds.empty()) return seeds;
    std::vector<std::uint64_t> out;
    for (std::size_t r = 0; r < replicates; ++r) out.push_back(gossip.seed + r);
    return out;
}

std::optional<double> ReplicateResult::latency_gain() const {
    if (reports.empty() || !baseline().metrics || !final_report().metrics) return std::nullopt;
    const auto& before = baseline().metrics->avg_latency;
    const auto& after = final_report().metrics->avg_latency;
    if (!before || !after || *before == 0.0) return std::nullopt;
    return (*before - *after) / *before;
}

double ExperimentResult::mean_latency_gain() const {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& r : replicates)
        if (auto gain = r.latency_gain()) {
            sum += *gain;
            ++count;
        }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

namespace {

void log(bool enabled, const std::string& line) {
    if (enabled) std::clog << "[sdht] " << line << std::endl;
}

/// Tracks files written by a run and deletes them unless committed.
class OutputSet {
public:
    explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }
    ~OutputSet() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& f : files_) std::filesystem::remove(f, ec);
    }
    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;

    template <class Fn>
    void write(const std::string& filename, Fn&& fill) {
        const auto path = dir_ / filename;
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + tmp.string());
            files_.push_back(tmp);
            fill(out);
            if (!out) throw std::runtime_error("write failed: " + tmp.string());
        }
        std::filesystem::rename(tmp, path);
        files_.back() = path;
    }

    std::vector<std::filesystem::path> commit() {
        committed_ = true;
        return files_;
    }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> files_;
    bool committed_ = false;
};

constexpr std::size_t kColumns = 10;
constexpr std::array<const char*, kColumns> kColumnNames{
    "avg_latency", "swaps", "attempts", "per_iter_fraction", "cum_fraction",
    "rel_finger", "rel_1hop", "rel_2hop", "rel_3hop", "moved_fraction"};

std::array<std::optional<double>, kColumns> row_values(const IterationReport& r) {
    std::array<std::optional<double>, kColumns> v;
    if (r.metrics) {
        v[0] = r.metrics->avg_latency;
        v[5] = r.metrics->reliability_finger;
        for (std::size_t i = 0; i < 3 && i < r.metrics->reliability_ihop.size(); ++i)
            v[6 + i] = r.metrics->reliability_ihop[i];
    }
    v[1] = static_cast<double>(r.swaps);
    v[2] = static_cast<double>(r.attempts);
    v[3] = r.per_iteration_fraction();
    v[4] = r.cumulative_fraction();
    v[9] = r.moved_fraction();
    return v;
}

void write_aggregate(std::ostream& out, const std::vector<ReplicateResult>& reps) {
    out << "iteration";
    for (const char* c : kColumnNames) out << ",mean_" << c << ",std_" << c;
    out << '\n';
    out.precision(10);
    const std::size_t rows = reps.front().reports.size();
    for (std::size_t t = 0; t < rows; ++t) {
        out << reps.front().reports[t].iteration;
        std::array<std::vector<double>, kColumns> samples;
        for (const auto& rep : reps) {
            const auto v = row_values(rep.reports[t]);
            for (std::size_t c = 0; c < kColumns; ++c)
                if (v[c]) samples[c].push_back(*v[c]);
        }
        for (std::size_t c = 0; c < kColumns; ++c) {
            const auto& s = samples[c];
            if (s.size() != reps.size()) {
                out << ",,";
                continue;
            }
            double mean = 0.0;
            for (double x : s) mean += x;
            mean /= static_cast<double>(s.size());
            double var = 0.0;
            for (double x : s) var += (x - mean) * (x - mean);
            const double sd = s.size() > 1 ? std::sqrt(var / static_cast<double>(s.size() - 1)) : 0.0;
            out << ',' << mean << ',' << sd;
        }
        out << '\n';
    }
}

json metrics_json(const IterationReport& r) {
    json j;
    j["iteration"] = r.iteration;
    if (r.metrics) {
        j["avg_latency"] = r.metrics->avg_latency ? json(*r.metrics->avg_latency) : json(nullptr);
        j["rel_finger"] = r.metrics->reliability_finger;
        j["rel_ihop"] = r.metrics->reliability_ihop;
        j["rel_finger_degw"] = r.metrics->reliability_finger_weighted;
        j["rel_ihop_degw"] = r.metrics->reliability_ihop_weighted;
    }
    j["cumulative_swaps"] = r.cumulative_swaps;
    j["cumulative_attempts"] = r.cumulative_attempts;
    const auto cum = r.cumulative_fraction();
    j["cum_fraction"] = cum ? json(*cum) : json(nullptr);
    j["moved_fraction"] = r.moved_fraction();
    return j;
}

json config_json(const ExperimentSpec& spec, std::size_t k) {
    const auto& g = spec.gossip;
    return json{{"dataset", spec.dataset},
                {"scheme", to_string(g.scheme)},
                {"metric", to_string(g.metric)},
                {"ordering", to_string(g.ordering)},
                {"unit", g.unit == IterationUnit::Sweep ? "sweep" : "attempt"},
                {"iterations", g.iterations},
                {"smart_width", g.smart_width},
                {"strength", to_string(g.strength_mode)},
                {"literal_abs", g.literal_abs},
                {"k", k},
                {"id_mode", spec.id_mode == IdMode::UniformRandom ? "uniform" : "even"},
                {"sample_cap", g.metrics.sample_cap},
                {"hop_mode", g.metrics.hop_mode == HopMode::Greedy ? "greedy" : "bfs"}};
}

json summary_json(const ExperimentSpec& spec, const ExperimentResult& result) {
    json reps = json::array();
    std::vector<double> gains;
    for (const auto& rep : result.replicates) {
        json r;
        r["seed"] = rep.seed;
        r["baseline"] = metrics_json(rep.baseline());
        r["final"] = metrics_json(rep.final_report());
        const auto gain = rep.latency_gain();
        r["latency_gain"] = gain ? json(*gain) : json(nullptr);
        if (gain) gains.push_back(*gain);
        if (rep.baseline().metrics && rep.final_report().metrics)
            r["rel_finger_gain"] = rep.final_report().metrics->reliability_finger -
                                   rep.baseline().metrics->reliability_finger;
        reps.push_back(std::move(r));
    }
    double mean = 0.0, sd = 0.0;
    for (double x : gains) mean += x;
    if (!gains.empty()) mean /= static_cast<double>(gains.size());
    for (double x : gains) sd += (x - mean) * (x - mean);
    if (gains.size() > 1) sd = std::sqrt(sd / static_cast<double>(gains.size() - 1));
    return json{{"config", config_json(spec, result.k)},
                {"nodes", result.node_count},
                {"edges", result.edge_count},
                {"replicates", reps},
                {"latency_gain_mean", mean},
                {"latency_gain_stddev", sd}};
}

}  // namespace

SocialGraph load_dataset(const ExperimentSpec& spec) {
    if (is_generator_spec(spec.dataset)) {
        auto g = generate_graph(spec.dataset);
        log(spec.log_progress, "generated " + spec.dataset + ": " + std::to_string(g.node_count()) +
                                   " nodes, " + std::to_string(g.edge_count()) + " edges");
        return g;
    }
    LoadStats stats;
    auto g = load_edge_list(spec.dataset, spec.directed_input, &stats);
    log(spec.log_progress,
        "loaded " + spec.dataset + ": " + std::to_string(g.node_count()) + " nodes, " +
            std::to_string(g.edge_count()) + " undirected edges from " + std::to_string(stats.arcs) +
            " lines (" + std::to_string(stats.duplicates) + " duplicate/reciprocal, " +
            std::to_string(stats.self_loops) + " self-loops dropped" +
            (spec.directed_input ? ", directed input symmetrized)" : ")"));
    return g;
}

ReplicateResult run_replicate(const SocialGraph& g, const ExperimentSpec& spec, std::uint64_t seed,
                              const StrengthProvider& strength) {
    GossipConfig config = spec.gossip;
    config.seed = seed;
    const std::size_t k = spec.k.value_or(default_long_links(g.node_count()));
    Engine engine = Engine::initialize(g, k, config, spec.id_mode, strength);
    ReplicateResult result;
    result.seed = seed;
    result.reports.reserve(config.iterations + 1);
    result.reports.push_back(engine.baseline_report());
    for (std::size_t t = 0; t < config.iterations; ++t) {
        result.reports.push_back(engine.run_iteration());
        const auto& last = result.reports.back();
        if (spec.log_progress && (last.iteration % 100 == 0 || last.iteration == config.iterations)) {
            std::string line = spec.name + " seed " + std::to_string(seed) + " iteration " +
                               std::to_string(last.iteration) + " swaps " + std::to_string(last.swaps);
            if (last.metrics && last.metrics->avg_latency)
                line += " latency " + std::to_string(*last.metrics->avg_latency);
            log(true, line);
        }
    }
    if (config.metric == CostMetric::HopCount)
        log(spec.log_progress, "seed " + std::to_string(seed) + ": " +
                                   std::to_string(engine.route_evaluations()) + " routes evaluated for costs");
    result.final_ring = engine.ring();
    result.final_placement = engine.placement();
    return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const SocialGraph g = load_dataset(spec);
    return run_experiment(g, spec);
}

ExperimentResult run_experiment(const SocialGraph& g, const ExperimentSpec& spec,
                                const StrengthProvider& strength) {
    return run_experiment(spec, [&](std::uint64_t) { return ReplicateInput{g, strength}; });
}

ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const std::function<ReplicateInput(std::uint64_t)>& input_for) {
    spec.validate();
    ExperimentResult result;
    OutputSet outputs(spec.output_dir);
    for (std::uint64_t seed : spec.replicate_seeds()) {
        const ReplicateInput input = input_for(seed);
        result.node_count = input.graph.node_count();
        result.edge_count = input.graph.edge_count();
        result.k = spec.k.value_or(default_long_links(input.graph.node_count()));
        auto rep = run_replicate(input.graph, spec, seed, input.strength);
        const std::string stem = spec.name + "_seed" + std::to_string(seed);
        outputs.write(stem + ".csv", [&](std::ostream& out) {
            write_csv_header(out);
            for (const auto& r : rep.reports) write_csv_row(out, r);
        });
        if (spec.write_checkpoints)
            outputs.write(stem + ".ckpt", [&](std::ostream& out) {
                write_checkpoint(out, rep.final_ring, rep.final_placement);
            });
        result.replicates.push_back(std::move(rep));
    }
    outputs.write(spec.name + "_aggregate.csv",
                  [&](std::ostream& out) { write_aggregate(out, result.replicates); });
    outputs.write(spec.name + "_summary.json",
                  [&](std::ostream& out) { out << summary_json(spec, result).dump(2) << '\n'; });
    result.files = outputs.commit();
    log(spec.log_progress, spec.name + ": mean latency gain " + std::to_string(result.mean_latency_gain()));
    return result;
}

OrderingComparison run_ordering_comparison(const ExperimentSpec& spec) {
    spec.validate();
    const SocialGraph g = load_dataset(spec);
    auto with = [&](Ordering ordering) {
        ExperimentSpec s = spec;
        s.gossip.ordering = ordering;
        s.name = spec.name + "_" + to_string(ordering);
        return run_experiment(g, s);
    };
    OrderingComparison out;
    out.descending = with(Ordering::DescendingDegree);
    out.random = with(Ordering::RandomOrder);
    out.ascending = with(Ordering::AscendingDegree);
    return out;
}

RelabelInput relabel_input(std::size_t n, std::size_t k, std::uint64_t seed) {
    const Ring step1 = build_ring(n, k, seed);
    return {finger_graph(step1), std::vector<double>(step1.ids().begin(), step1.ids().end())};
}

std::vector<RelabelResult> run_relabel(const RelabelSpec& spec) {
    if (spec.n < 100) throw std::invalid_argument("relabel: n must be >= 100");
    if (spec.seeds.empty()) throw std::invalid_argument("relabel: at least one seed required");
    const std::size_t k = spec.k.value_or(default_long_links(spec.n));
    std::vector<RelabelResult> out;
    for (StrengthMode mode : spec.strength_modes) {
        ExperimentSpec es;
        es.dataset = "symphony:" + std::to_string(spec.n) + ":" + std::to_string(k);
        es.gossip = spec.gossip;
        es.gossip.strength_mode = mode;
        es.k = k;
        es.seeds = spec.seeds;
        es.output_dir = spec.output_dir;
        es.name = spec.name + "_" + to_string(mode);
        es.write_checkpoints = false;
        es.log_progress = spec.log_progress;

        // Step 1 uses a seed derived from the replicate seed, so the step-2
        // ring (built from the replicate seed itself) is a fresh one.
        auto input_for = [&](std::uint64_t seed) {
            auto input = relabel_input(spec.n, k, derive_seed(seed, 100));
            StrengthProvider strength = mode == StrengthMode::IdDistance
                                            ? StrengthProvider::id_distance(std::move(input.reference_ids))
                                            : StrengthProvider::common_neighbors();
            return ReplicateInput{std::move(input.graph), std::move(strength)};
        };
        RelabelResult rr;
        rr.mode = mode;
        rr.result = run_experiment(es, input_for);
        out.push_back(std::move(rr));
    }

    json summary = json::object();
    summary["n"] = spec.n;
    summary["k"] = k;
    summary["ideal_latency"] = 1.0;
    for (const auto& rr : out) {
        json m;
        m["replicates"] = json::array();
        for (const auto& rep : rr.result.replicates) {
            const auto gain = rep.latency_gain();
            m["replicates"].push_back(json{{"seed", rep.seed},
                                           {"baseline_latency", *rep.baseline().metrics->avg_latency},
                                           {"final_latency", *rep.final_report().metrics->avg_latency},
                                           {"latency_gain", gain ? json(*gain) : json(nullptr)}});
        }
        m["latency_gain_mean"] = rr.result.mean_latency_gain();
        summary[to_string(rr.mode)] = m;
    }
    std::ofstream summary_out(spec.output_dir / (spec.name + "_summary.json"));
    summary_out << summary.dump(2) << '\n';
    if (!summary_out) throw std::runtime_error("cannot write relabel summary");
    return out;
}

}  // namespace sdht
