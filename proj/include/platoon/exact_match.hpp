#pragma once

#include <cstdint>
#include <vector>

#include "platoon/assignments.hpp"
#include "platoon/candidate_set.hpp"
#include "platoon/road_network.hpp"

namespace platoon {

/// Outcome of the exact coordination test for one pair. overlap_km is the
/// total edge length of all matched index pairs (shared directed edges whose
/// time windows overlap at both endpoints).
struct PairVerdict {
    std::uint32_t i = 0;
    std::uint32_t j = 0;
    bool lambda = false;
    double overlap_km = 0.0;
};

/// Exact test: the pair can platoon iff the routes share at least one directed
/// edge with overlapping (closed) arrival windows at both edge endpoints.
/// Shared edges are located by hashing directed edges of one route.
/// Throws if either route is not a path on the network.
PairVerdict coordination(const RoadNetwork& net, const BoundedRoute& bi,
                         const BoundedRoute& bj);

/// Minimum-distance variant: positive only when matched edges total at least
/// l_min_km (boundary inclusive). l_min_km = 0 reduces to coordination().
PairVerdict coordination_min_distance(const RoadNetwork& net, const BoundedRoute& bi,
                                      const BoundedRoute& bj, double l_min_km);

/// Reference evaluation scanning every (a, b) index pair of the two routes.
/// Kept independent of the hash-join path for testing.
PairVerdict coordination_naive(const RoadNetwork& net, const BoundedRoute& bi,
                               const BoundedRoute& bj, double l_min_km);

/// Exact verdicts for an explicit pair list (the narrow phase over culling
/// survivors). Route edge indexes are built once per assignment; output is
/// aligned with the input order.
std::vector<PairVerdict> evaluate_pairs(const RoadNetwork& net,
                                        const std::vector<BoundedRoute>& routes,
                                        const std::vector<IndexPair>& pairs, double l_min_km);

/// Exhaustive exact evaluation over all feasible pairs; returns the positive
/// verdicts sorted by (i, j). Parallel across rows with a deterministic merge.
std::vector<PairVerdict> ground_truth_verdicts(const RoadNetwork& net,
                                               const std::vector<BoundedRoute>& routes,
                                               double l_min_km);

/// Serial reference for ground_truth_verdicts built on coordination_naive.
std::vector<PairVerdict> ground_truth_verdicts_serial(const RoadNetwork& net,
                                                      const std::vector<BoundedRoute>& routes,
                                                      double l_min_km);

/// The set C of all platoonable pairs, used as oracle by the culling tests.
CandidateSet ground_truth(const RoadNetwork& net, const std::vector<BoundedRoute>& routes,
                          double l_min_km);

}  // namespace platoon
