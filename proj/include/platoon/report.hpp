#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "platoon/candidate_set.hpp"

namespace platoon {

enum class VerifyMode { None, Sample, Full };

struct PhaseTiming {
    std::string phase;
    int reps = 0;
    double median_ms = 0.0;
    double min_ms = 0.0;
};

/// Everything one `run` invocation produces. Timings are reported on stdout
/// and via `bench`; they are kept out of the serialized report so that result
/// files are byte-reproducible for a fixed (seed, config).
struct RunReport {
    std::uint64_t seed = 0;
    std::size_t assignment_count = 0;
    std::size_t feasible_count = 0;
    std::string network_summary;
    double l_min_km = 0.0;
    std::vector<std::string> plan;
    std::size_t all_pairs = 0;
    std::vector<std::pair<std::string, std::size_t>> classifier_positives;
    std::vector<StageRecord> stage_log;
    std::size_t final_candidates = 0;
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    bool verified = false;
    std::vector<PhaseTiming> timings;
};

struct RunOptions {
    std::string scenario_path;
    std::string network_path;
    std::string assignments_path;
    std::string features_path;
    std::string plan = "greedy";  // "greedy" or a plan-file path
    std::optional<double> l_min_km;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> assignment_count;
    VerifyMode verify = VerifyMode::None;
    std::size_t verify_sample = 10000;
    std::string out_dir;
};

struct TruthOptions {
    std::string scenario_path;
    std::string network_path;
    std::string assignments_path;
    std::optional<double> l_min_km;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> assignment_count;
    std::string out_dir;
};

struct BenchOptions {
    std::string scenario_path;
    std::string network_path;
    std::string assignments_path;
    std::string features_path;
    std::optional<double> l_min_km;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> assignment_count;
    int reps = 5;
    std::string out_dir;
};

struct GenOptions {
    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> assignment_count;
    std::string out_dir;
};

/// Generate/load -> bounds -> features -> pipeline -> exact narrow phase ->
/// report files. Throws on soundness violations found by verification.
RunReport cmd_run(const RunOptions& options);

/// Writes the exact all-pairs positive set as truth.csv (i,j,overlap_km).
std::size_t cmd_truth(const TruthOptions& options);

/// Times each phase over `reps` repetitions, parallel kernels next to their
/// serial references, and writes bench.csv (phase,reps,median_ms,min_ms).
std::vector<PhaseTiming> cmd_bench(const BenchOptions& options);

/// Materializes a scenario as network.json + assignments.json.
void cmd_gen(const GenOptions& options);

}  // namespace platoon
