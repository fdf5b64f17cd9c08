#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "platoon/report.hpp"

namespace {

struct CommonArgs {
    std::string scenario;
    std::string network;
    std::string assignments;
    std::string features;
    double l_min_km = -1.0;
    std::int64_t seed = -1;
    std::int64_t k = -1;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_features = true) {
    cmd->add_option("--scenario", args.scenario, "Scenario config JSON (generates the instance)");
    cmd->add_option("--network", args.network, "Network JSON (with --assignments)");
    cmd->add_option("--assignments", args.assignments, "Assignments JSON (with --network)");
    if (with_features) {
        cmd->add_option("--features", args.features,
                        "Feature config JSON; default is the built-in classifier family");
    }
    cmd->add_option("--l-min-km", args.l_min_km, "Minimum shared distance for a platoon pair");
    cmd->add_option("--seed", args.seed, "Override the scenario seed");
    cmd->add_option("--K", args.k, "Override the assignment count");
    cmd->add_option("--out-dir", args.out_dir, "Directory for output files");
}

template <typename Options>
void apply_common(const CommonArgs& args, Options& options) {
    options.scenario_path = args.scenario;
    options.network_path = args.network;
    options.assignments_path = args.assignments;
    if (args.l_min_km >= 0.0) {
        options.l_min_km = args.l_min_km;
    }
    if (args.seed >= 0) {
        options.seed = static_cast<std::uint64_t>(args.seed);
    }
    if (args.k >= 0) {
        options.assignment_count = static_cast<std::size_t>(args.k);
    }
    options.out_dir = args.out_dir;
}

void print_report(const platoon::RunReport& report) {
    std::printf("network: %s\n", report.network_summary.c_str());
    std::printf("assignments: %zu (%zu feasible), l_min %.1f km\n", report.assignment_count,
                report.feasible_count, report.l_min_km);
    std::printf("all pairs: %zu\n", report.all_pairs);
    std::printf("%-24s %12s\n", "classifier", "positives");
    for (const auto& [label, count] : report.classifier_positives) {
        std::printf("%-24s %12zu\n", label.c_str(), count);
    }
    std::printf("pipeline:\n");
    for (std::size_t i = 0; i < report.stage_log.size(); ++i) {
        std::printf("  stage %zu %-20s %12zu\n", i, report.stage_log[i].label.c_str(),
                    report.stage_log[i].survivors);
    }
    std::printf("final candidates: %zu, exact positives: %zu, false positives: %zu\n",
                report.final_candidates, report.true_positives, report.false_positives);
    for (const auto& t : report.timings) {
        std::printf("  %-24s %10.3f ms\n", t.phase.c_str(), t.median_ms);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Platoon-pair culling and exact coordination matching"};
    app.require_subcommand(1);

    CommonArgs run_args, truth_args, bench_args;
    std::string run_plan = "greedy";
    std::string verify_mode;
    int bench_reps = 5;
    std::string gen_scenario, gen_out = ".";
    std::int64_t gen_seed = -1, gen_k = -1;

    auto* run = app.add_subcommand("run", "Cull pairs, verify survivors exactly, write a report");
    add_common(run, run_args);
    run->add_option("--plan", run_plan, "'greedy' or a stage-plan JSON file");
    run->add_option("--verify", verify_mode,
                    "'sample' re-checks culled pairs, 'full' compares against brute force")
        ->expected(0, 1)
        ->default_str("")
        ->check(CLI::IsMember({"", "sample", "full"}));

    auto* truth = app.add_subcommand("truth", "Write the exact all-pairs ground truth as CSV");
    add_common(truth, truth_args, false);

    auto* bench = app.add_subcommand("bench", "Time every phase against its serial reference");
    add_common(bench, bench_args);
    bench->add_option("--reps", bench_reps, "Repetitions per phase");

    auto* gen = app.add_subcommand("gen", "Materialize a scenario as network/assignment files");
    gen->add_option("--scenario", gen_scenario, "Scenario config JSON")->required();
    gen->add_option("--seed", gen_seed, "Override the scenario seed");
    gen->add_option("--K", gen_k, "Override the assignment count");
    gen->add_option("--out-dir", gen_out, "Directory for output files");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            platoon::RunOptions options;
            apply_common(run_args, options);
            options.features_path = run_args.features;
            options.plan = run_plan;
            if (run->count("--verify") > 0) {
                options.verify = verify_mode == "full" ? platoon::VerifyMode::Full
                                                       : platoon::VerifyMode::Sample;
            }
            print_report(platoon::cmd_run(options));
        } else if (truth->parsed()) {
            platoon::TruthOptions options;
            apply_common(truth_args, options);
            const std::size_t positives = platoon::cmd_truth(options);
            std::printf("ground truth: %zu platoonable pairs\n", positives);
        } else if (bench->parsed()) {
            platoon::BenchOptions options;
            apply_common(bench_args, options);
            options.features_path = bench_args.features;
            options.reps = bench_reps;
            for (const auto& t : platoon::cmd_bench(options)) {
                std::printf("%-24s reps %d median %10.3f ms min %10.3f ms\n", t.phase.c_str(),
                            t.reps, t.median_ms, t.min_ms);
            }
        } else if (gen->parsed()) {
            platoon::GenOptions options;
            options.scenario_path = gen_scenario;
            if (gen_seed >= 0) {
                options.seed = static_cast<std::uint64_t>(gen_seed);
            }
            if (gen_k >= 0) {
                options.assignment_count = static_cast<std::size_t>(gen_k);
            }
            options.out_dir = gen_out;
            platoon::cmd_gen(options);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
