#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "platoon/candidate_set.hpp"
#include "platoon/features.hpp"

namespace platoon {

/// A pairwise predicate over extracted features whose negative verdict proves
/// the pair cannot platoon. Interval classifiers compare one projection
/// interval per assignment; Orientation compares retained cell signatures;
/// CellMatch is the single-cell binary feature (positive iff both signatures
/// retain the cell); AnyOf is the OR-composition of its members.
struct Classifier {
    enum class Kind { Interval, Orientation, CellMatch, AnyOf };

    Kind kind = Kind::Interval;
    std::string label;
    int feature_index = -1;            // Interval: index into FeatureVector::intervals
    int cell = -1;                     // CellMatch
    std::vector<Classifier> members;   // AnyOf
};

struct StagePlan {
    std::vector<std::string> labels;
};

struct CullingOptions {
    // Survivor count below which a stage re-evaluates the classifier pair by
    // pair instead of computing its full positive set and intersecting; 0
    // means always pairwise, which benchmarks faster at every survivor count.
    std::size_t pairwise_threshold = 0;
    bool serial = false;
};

/// One classifier per entry of the feature config, labelled as configured;
/// the orientation classifier (when configured) comes last.
std::vector<Classifier> build_classifiers(const FeatureConfig& config);

bool pair_positive(const Classifier& c, const FeatureVector& a, const FeatureVector& b);

/// All pairs (i, j), i < j, of feasible assignments.
CandidateSet all_feasible_pairs(const std::vector<FeatureVector>& features);

/// All feasible pairs whose closed intervals at feature_index overlap.
/// Sorts intervals by lower endpoint and scans forward in parallel.
CandidateSet interval_positives(const std::vector<FeatureVector>& features, int feature_index);

/// Serial reference: sorts the 2K endpoints (lower before upper at equal
/// values, so touching intervals are reported) and sweeps an active list.
CandidateSet interval_positives_serial(const std::vector<FeatureVector>& features,
                                       int feature_index);

/// Pairs whose retained orientation-cell sets intersect, via an inverted
/// index cell -> assignments. Throws if signatures disagree on cell count or
/// l_min, or any feasible assignment lacks a signature.
CandidateSet signature_positives(const std::vector<FeatureVector>& features);

/// Full positive set of any classifier kind.
CandidateSet classifier_positives(const Classifier& c, const std::vector<FeatureVector>& features,
                                  const CullingOptions& options = {});

/// Intersects `current` with the classifier's positives and appends to the
/// stage log. The result is still a superset of the ground truth whenever the
/// inputs were.
CandidateSet apply_stage(const CandidateSet& current, const Classifier& c,
                         const std::vector<FeatureVector>& features,
                         const CullingOptions& options = {});

/// OR-composition of a required set of classifiers. Throws on an empty list.
Classifier or_compose(std::vector<Classifier> members, std::string label = "");

/// Applies the planned stages in order, starting from all feasible pairs.
/// The stage log opens with a "none" record holding the all-pairs count.
CandidateSet run_pipeline(const StagePlan& plan, const std::vector<Classifier>& classifiers,
                          const std::vector<FeatureVector>& features,
                          const CullingOptions& options = {});

/// Offline stage ordering: repeatedly picks the unused classifier that leaves
/// the fewest surviving pairs, breaking ties by label. Positive sets are
/// computed once up front and intersected.
StagePlan greedy_order(const std::vector<Classifier>& classifiers,
                       const std::vector<FeatureVector>& features,
                       const CullingOptions& options = {});

/// greedy_order over already-computed positive sets (one per classifier,
/// same order), starting from `start`.
StagePlan greedy_order_from_positives(const std::vector<Classifier>& classifiers,
                                      const std::vector<CandidateSet>& positives,
                                      const CandidateSet& start);

StagePlan parse_stage_plan(const nlohmann::json& j, const std::string& context);
StagePlan load_stage_plan(const std::string& path);

}  // namespace platoon
