#include "platoon/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include <json.hpp>

#include "platoon/culling.hpp"
#include "platoon/exact_match.hpp"
#include "platoon/features.hpp"
#include "platoon/scenario.hpp"

namespace platoon {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string format_km(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

struct LoadedScenario {
    RoadNetwork net;
    std::vector<TransportAssignment> assignments;
    double v_max_kmh = 80.0;
    double l_min_km = 0.0;
    std::uint64_t seed = 0;
    std::string network_summary;
    bool generated = false;
};

std::string summarize_network(const NetworkSpec& spec, const RoadNetwork& net) {
    std::ostringstream out;
    if (const auto* g = std::get_if<GridSpec>(&spec)) {
        out << "grid " << g->rows << "x" << g->cols << " spacing " << g->spacing_km << " km";
    } else if (const auto* r = std::get_if<RandomGeometricSpec>(&spec)) {
        out << "random_geometric n=" << r->nodes << " radius " << r->radius_km << " km";
    } else {
        out << "file " << std::get<NetworkFileSpec>(spec).path;
    }
    out << ", " << net.node_count() << " nodes, " << net.edge_count() << " edges";
    return out.str();
}

template <typename Options>
LoadedScenario load_inputs(const Options& options) {
    if (!options.scenario_path.empty()) {
        ScenarioConfig cfg = load_scenario_config(options.scenario_path);
        if (options.seed) {
            cfg.seed = *options.seed;
        }
        if (options.assignment_count) {
            cfg.assignment_count = *options.assignment_count;
        }
        RoadNetwork net = generate_network(cfg.network, cfg.seed);
        auto assignments = generate_assignments(net, cfg);
        std::string summary = summarize_network(cfg.network, net);
        double l_min = options.l_min_km.value_or(cfg.l_min_km);
        return {std::move(net), std::move(assignments), cfg.v_max_kmh,
                l_min,          cfg.seed,               std::move(summary),
                true};
    }
    if (options.network_path.empty() || options.assignments_path.empty()) {
        throw std::runtime_error("need either --scenario or both --network and --assignments");
    }
    RoadNetwork net = RoadNetwork::load(options.network_path);
    AssignmentFile file = load_assignments(net, options.assignments_path);
    if (options.assignment_count && *options.assignment_count < file.assignments.size()) {
        file.assignments.resize(*options.assignment_count);
    }
    std::ostringstream summary;
    summary << "file " << options.network_path << ", " << net.node_count() << " nodes, "
            << net.edge_count() << " edges";
    return {std::move(net),
            std::move(file.assignments),
            file.v_max_kmh,
            options.l_min_km.value_or(0.0),
            options.seed.value_or(0),
            summary.str(),
            false};
}

FeatureConfig feature_config_for(const std::string& features_path, const LoadedScenario& s) {
    if (features_path.empty()) {
        return experiment_config(s.v_max_kmh, s.net.mode(), s.l_min_km);
    }
    return load_feature_config(features_path, s.v_max_kmh, s.net.mode());
}

std::ofstream open_output(const std::string& out_dir, const std::string& name) {
    std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write output file: " + (dir / name).string());
    }
    return out;
}

void write_stage_log_csv(const std::string& out_dir, const std::vector<StageRecord>& log) {
    auto out = open_output(out_dir, "stage_log.csv");
    out << "stage,label,survivors\n";
    for (std::size_t i = 0; i < log.size(); ++i) {
        out << i << ',' << log[i].label << ',' << log[i].survivors << '\n';
    }
}

void write_counts_csv(const std::string& out_dir,
                      const std::vector<std::pair<std::string, std::size_t>>& counts) {
    auto out = open_output(out_dir, "classifier_counts.csv");
    out << "label,positives\n";
    for (const auto& [label, count] : counts) {
        out << label << ',' << count << '\n';
    }
}

void write_candidates_csv(const std::string& out_dir, const std::vector<PairVerdict>& verdicts) {
    auto out = open_output(out_dir, "candidates.csv");
    out << "i,j,lambda,overlap_km\n";
    for (const auto& v : verdicts) {
        out << v.i << ',' << v.j << ',' << (v.lambda ? 1 : 0) << ',' << format_km(v.overlap_km)
            << '\n';
    }
}

void write_truth_csv(const std::string& out_dir, const std::vector<PairVerdict>& verdicts) {
    auto out = open_output(out_dir, "truth.csv");
    out << "i,j,overlap_km\n";
    for (const auto& v : verdicts) {
        out << v.i << ',' << v.j << ',' << format_km(v.overlap_km) << '\n';
    }
}

void write_report_json(const std::string& out_dir, const RunReport& report) {
    nlohmann::json j;
    j["seed"] = report.seed;
    j["assignments"] = report.assignment_count;
    j["feasible"] = report.feasible_count;
    j["network"] = report.network_summary;
    j["l_min_km"] = report.l_min_km;
    j["plan"] = report.plan;
    j["all_pairs"] = report.all_pairs;
    auto counts = nlohmann::json::array();
    for (const auto& [label, count] : report.classifier_positives) {
        counts.push_back({{"label", label}, {"positives", count}});
    }
    j["classifier_positives"] = std::move(counts);
    auto stages = nlohmann::json::array();
    for (const auto& s : report.stage_log) {
        stages.push_back({{"label", s.label}, {"survivors", s.survivors}});
    }
    j["stage_log"] = std::move(stages);
    j["final_candidates"] = report.final_candidates;
    j["true_positives"] = report.true_positives;
    j["false_positives"] = report.false_positives;
    j["verified"] = report.verified;
    auto out = open_output(out_dir, "report.json");
    out << j.dump(2) << '\n';
}

// Uniform sample of feasible pairs outside the survivor set; these must all
// be exact negatives or the pipeline lost a platooning opportunity.
void verify_sampled_negatives(const RoadNetwork& net, const std::vector<BoundedRoute>& bounds,
                              const std::vector<FeatureVector>& features,
                              const CandidateSet& survivors, double l_min_km,
                              std::size_t sample_size, std::uint64_t seed) {
    std::vector<std::uint32_t> feasible;
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (features[i].feasible) {
            feasible.push_back(static_cast<std::uint32_t>(i));
        }
    }
    if (feasible.size() < 2) {
        return;
    }
    const std::size_t total = feasible.size() * (feasible.size() - 1) / 2;
    if (total <= survivors.size()) {
        return;  // nothing was culled
    }
    std::mt19937_64 rng(seed ^ 0xc2b2ae3d27d4eb4fULL);
    std::vector<IndexPair> culled;
    culled.reserve(sample_size);
    std::size_t attempts = 0;
    while (culled.size() < sample_size && attempts < sample_size * 20) {
        ++attempts;
        const auto a = feasible[rng() % feasible.size()];
        const auto b = feasible[rng() % feasible.size()];
        if (a == b) {
            continue;
        }
        IndexPair p{std::min(a, b), std::max(a, b)};
        if (!std::binary_search(survivors.pairs.begin(), survivors.pairs.end(), p)) {
            culled.push_back(p);
        }
    }
    auto verdicts = evaluate_pairs(net, bounds, culled, l_min_km);
    for (const auto& v : verdicts) {
        if (v.lambda) {
            throw std::runtime_error("soundness violation: culled pair (" + std::to_string(v.i) +
                                     ", " + std::to_string(v.j) +
                                     ") is an exact positive (overlap " + format_km(v.overlap_km) +
                                     " km)");
        }
    }
}

}  // namespace

RunReport cmd_run(const RunOptions& options) {
    RunReport report;
    auto time_phase = [&](const std::string& name, auto&& fn) {
        const auto t0 = Clock::now();
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            const double ms = ms_since(t0);
            report.timings.push_back({name, 1, ms, ms});
        } else {
            auto result = fn();
            const double ms = ms_since(t0);
            report.timings.push_back({name, 1, ms, ms});
            return result;
        }
    };

    LoadedScenario scenario = time_phase("load_or_generate", [&] { return load_inputs(options); });
    report.seed = scenario.seed;
    report.assignment_count = scenario.assignments.size();
    report.network_summary = scenario.network_summary;
    report.l_min_km = scenario.l_min_km;

    auto bounds = time_phase("bounds", [&] {
        return compute_all_bounds(scenario.net, scenario.assignments, scenario.v_max_kmh);
    });

    FeatureConfig config = feature_config_for(options.features_path, scenario);
    auto features =
        time_phase("features", [&] { return extract_all(scenario.net, bounds, config); });
    report.feasible_count = static_cast<std::size_t>(
        std::count_if(features.begin(), features.end(), [](const auto& f) { return f.feasible; }));

    const auto classifiers = build_classifiers(config);
    CandidateSet start = all_feasible_pairs(features);
    report.all_pairs = start.size();
    report.classifier_positives.emplace_back("none", start.size());

    std::vector<CandidateSet> positives(classifiers.size());
    time_phase("classifier_positives", [&] {
        for (std::size_t i = 0; i < classifiers.size(); ++i) {
            positives[i] = classifier_positives(classifiers[i], features);
            report.classifier_positives.emplace_back(classifiers[i].label, positives[i].size());
        }
    });

    StagePlan plan;
    if (options.plan == "greedy") {
        plan = time_phase("greedy_order", [&] {
            return greedy_order_from_positives(classifiers, positives, start);
        });
    } else {
        plan = load_stage_plan(options.plan);
    }
    report.plan = plan.labels;

    CandidateSet survivors =
        time_phase("culling", [&] { return run_pipeline(plan, classifiers, features); });
    report.stage_log = survivors.stage_log;
    report.final_candidates = survivors.size();

    auto verdicts = time_phase("exact_survivors", [&] {
        return evaluate_pairs(scenario.net, bounds, survivors.pairs, scenario.l_min_km);
    });
    report.true_positives = static_cast<std::size_t>(
        std::count_if(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.lambda; }));
    report.false_positives = report.final_candidates - report.true_positives;

    if (options.verify == VerifyMode::Sample) {
        time_phase("verify_sample", [&] {
            verify_sampled_negatives(scenario.net, bounds, features, survivors, scenario.l_min_km,
                                     options.verify_sample, scenario.seed);
        });
        report.verified = true;
    } else if (options.verify == VerifyMode::Full) {
        auto truth = time_phase("verify_full", [&] {
            return ground_truth_verdicts(scenario.net, bounds, scenario.l_min_km);
        });
        CandidateSet truth_set;
        for (const auto& v : truth) {
            truth_set.pairs.emplace_back(v.i, v.j);
        }
        if (!survivors.contains_all(truth_set)) {
            throw std::runtime_error("soundness violation: pipeline culled " +
                                     std::to_string(truth.size() -
                                                    intersect(survivors, truth_set).size()) +
                                     " exact positives");
        }
        if (truth.size() != report.true_positives) {
            throw std::runtime_error("verification mismatch: narrow phase found " +
                                     std::to_string(report.true_positives) +
                                     " positives, full ground truth " +
                                     std::to_string(truth.size()));
        }
        write_truth_csv(options.out_dir, truth);
        report.verified = true;
    }

    if (scenario.generated) {
        const std::filesystem::path dir = options.out_dir.empty() ? "." : options.out_dir;
        std::filesystem::create_directories(dir);
        scenario.net.save((dir / "network.json").string());
        AssignmentFile file{scenario.v_max_kmh, scenario.assignments};
        save_assignments(file, (dir / "assignments.json").string());
    }
    write_report_json(options.out_dir, report);
    write_counts_csv(options.out_dir, report.classifier_positives);
    write_stage_log_csv(options.out_dir, report.stage_log);
    write_candidates_csv(options.out_dir, verdicts);
    return report;
}

std::size_t cmd_truth(const TruthOptions& options) {
    LoadedScenario scenario = load_inputs(options);
    auto bounds = compute_all_bounds(scenario.net, scenario.assignments, scenario.v_max_kmh);
    auto truth = ground_truth_verdicts(scenario.net, bounds, scenario.l_min_km);
    write_truth_csv(options.out_dir, truth);
    return truth.size();
}

std::vector<PhaseTiming> cmd_bench(const BenchOptions& options) {
    if (options.reps < 1) {
        throw std::runtime_error("bench: reps must be >= 1");
    }
    LoadedScenario scenario = load_inputs(options);
    FeatureConfig config = feature_config_for(options.features_path, scenario);
    const auto classifiers = build_classifiers(config);
    StagePlan plan;
    for (const auto& c : classifiers) {
        plan.labels.push_back(c.label);
    }

    auto bounds = compute_all_bounds(scenario.net, scenario.assignments, scenario.v_max_kmh);
    auto features = extract_all(scenario.net, bounds, config);
    auto survivors = run_pipeline(plan, classifiers, features);

    std::vector<PhaseTiming> timings;
    auto bench_phase = [&](const std::string& name, auto&& fn) {
        std::vector<double> samples;
        samples.reserve(static_cast<std::size_t>(options.reps));
        for (int r = 0; r < options.reps; ++r) {
            const auto t0 = Clock::now();
            fn();
            samples.push_back(ms_since(t0));
        }
        std::sort(samples.begin(), samples.end());
        const double median = samples.size() % 2 == 1
                                  ? samples[samples.size() / 2]
                                  : 0.5 * (samples[samples.size() / 2 - 1] +
                                           samples[samples.size() / 2]);
        timings.push_back({name, options.reps, median, samples.front()});
    };

    CullingOptions serial_opts;
    serial_opts.serial = true;

    bench_phase("bounds", [&] {
        compute_all_bounds(scenario.net, scenario.assignments, scenario.v_max_kmh);
    });
    bench_phase("features", [&] { extract_all(scenario.net, bounds, config); });
    bench_phase("features_serial", [&] { extract_all_serial(scenario.net, bounds, config); });
    bench_phase("culling", [&] { run_pipeline(plan, classifiers, features); });
    bench_phase("culling_serial",
                [&] { run_pipeline(plan, classifiers, features, serial_opts); });
    bench_phase("exact_survivors", [&] {
        evaluate_pairs(scenario.net, bounds, survivors.pairs, scenario.l_min_km);
    });
    bench_phase("exact_all_pairs",
                [&] { ground_truth_verdicts(scenario.net, bounds, scenario.l_min_km); });
    bench_phase("exact_all_pairs_serial",
                [&] { ground_truth_verdicts_serial(scenario.net, bounds, scenario.l_min_km); });

    auto out = open_output(options.out_dir, "bench.csv");
    out << "phase,reps,median_ms,min_ms\n";
    for (const auto& t : timings) {
        char row[256];
        std::snprintf(row, sizeof row, "%s,%d,%.6f,%.6f\n", t.phase.c_str(), t.reps, t.median_ms,
                      t.min_ms);
        out << row;
    }
    return timings;
}

void cmd_gen(const GenOptions& options) {
    ScenarioConfig cfg = load_scenario_config(options.scenario_path);
    if (options.seed) {
        cfg.seed = *options.seed;
    }
    if (options.assignment_count) {
        cfg.assignment_count = *options.assignment_count;
    }
    RoadNetwork net = generate_network(cfg.network, cfg.seed);
    auto assignments = generate_assignments(net, cfg);
    const std::filesystem::path dir = options.out_dir.empty() ? "." : options.out_dir;
    std::filesystem::create_directories(dir);
    net.save((dir / "network.json").string());
    save_assignments({cfg.v_max_kmh, std::move(assignments)}, (dir / "assignments.json").string());
}

}  // namespace platoon
