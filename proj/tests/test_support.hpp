#pragma once

#include <random>
#include <vector>

#include "platoon/assignments.hpp"
#include "platoon/culling.hpp"
#include "platoon/features.hpp"
#include "platoon/road_network.hpp"
#include "platoon/scenario.hpp"

namespace platoon::test {

// Path A(0,0) -- B(40,0) -- C(80,30), both directions; edge lengths 40 and 50.
inline RoadNetwork path_network() {
    return RoadNetwork(CoordinateMode::PlanarKm, {{0, 0}, {40, 0}, {80, 30}},
                       {{0, 1}, {1, 0}, {1, 2}, {2, 1}});
}

inline TransportAssignment path_assignment(std::uint32_t id = 0, double t_start = 0.0,
                                           double t_deadline = 2.0) {
    return {id, {0, 1, 2}, t_start, t_deadline};
}

inline FeatureVector interval_only(double lo, double hi) {
    FeatureVector fv;
    fv.feasible = true;
    fv.intervals.push_back({lo, hi});
    return fv;
}

inline std::vector<FeatureVector> interval_features(
    const std::vector<std::pair<double, double>>& intervals) {
    std::vector<FeatureVector> out;
    out.reserve(intervals.size());
    for (const auto& [lo, hi] : intervals) {
        out.push_back(interval_only(lo, hi));
    }
    return out;
}

inline FeatureVector signature_only(std::vector<int> cells, int cell_count = 100,
                                    double l_min = 0.0) {
    FeatureVector fv;
    fv.feasible = true;
    OrientationSignature sig;
    sig.cell_count = cell_count;
    sig.l_min_km = l_min;
    for (int c : cells) {
        sig.cells.emplace_back(c, 1.0);
    }
    fv.signature = std::move(sig);
    return fv;
}

struct TestScenario {
    RoadNetwork net;
    std::vector<TransportAssignment> assignments;
    std::vector<BoundedRoute> bounds;
    double v_max_kmh;
    double l_min_km;
};

// Seeded scenario small enough for brute-force oracles but with enough route
// overlap to produce true positives.
inline TestScenario make_scenario(std::uint64_t seed, std::size_t k, bool grid = true,
                                  double l_min_km = 20.0, double window_h = 0.5) {
    ScenarioConfig cfg;
    cfg.seed = seed;
    cfg.assignment_count = k;
    if (grid) {
        cfg.network = GridSpec{8, 8, 25.0, 0.3};
    } else {
        cfg.network = RandomGeometricSpec{120, 40.0, 250.0};
    }
    cfg.v_max_kmh = 80.0;
    cfg.window_h = window_h;
    cfg.start_fraction_at_zero = 0.5;
    cfg.horizon_h = 6.0;
    cfg.max_route_km = 400.0;
    cfg.l_min_km = l_min_km;

    RoadNetwork net = generate_network(cfg.network, cfg.seed);
    auto assignments = generate_assignments(net, cfg);
    auto bounds = compute_all_bounds(net, assignments, cfg.v_max_kmh);
    return {std::move(net), std::move(assignments), std::move(bounds), cfg.v_max_kmh, l_min_km};
}

}  // namespace platoon::test
