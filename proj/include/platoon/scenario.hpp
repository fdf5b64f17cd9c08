#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "platoon/assignments.hpp"
#include "platoon/road_network.hpp"

namespace platoon {

struct GridSpec {
    int rows = 0;
    int cols = 0;
    double spacing_km = 0.0;
    double diagonal_fraction = 0.0;
};

struct RandomGeometricSpec {
    int nodes = 0;
    double radius_km = 0.0;
    double extent_km = 0.0;
};

struct NetworkFileSpec {
    std::string path;
};

using NetworkSpec = std::variant<GridSpec, RandomGeometricSpec, NetworkFileSpec>;

struct ScenarioConfig {
    std::uint64_t seed = 0;
    std::size_t assignment_count = 0;
    NetworkSpec network = GridSpec{};
    double v_max_kmh = 80.0;
    double window_h = 0.5;
    double start_fraction_at_zero = 0.5;
    double horizon_h = 24.0;
    double max_route_km = 400.0;
    double l_min_km = 20.0;
};

ScenarioConfig parse_scenario_config(const nlohmann::json& j, const std::string& context);
ScenarioConfig load_scenario_config(const std::string& path);

/// Builds a connected directed network (both directions per road segment)
/// with distinct node positions; deterministic for a fixed seed. A random
/// geometric draw that comes out disconnected is retried from the same stream
/// up to a bound, then rejected.
RoadNetwork generate_network(const NetworkSpec& spec, std::uint64_t seed);

/// Samples start/destination pairs, routes them by shortest path over edge
/// lengths, truncates routes beyond max_route_km to a random whole-edge
/// subsection, and sets deadlines so every node window equals window_h.
/// floor(K * start_fraction_at_zero) assignments start at t = 0, the rest
/// uniformly in [0, horizon_h]. Every generated assignment is feasible.
std::vector<TransportAssignment> generate_assignments(const RoadNetwork& net,
                                                      const ScenarioConfig& cfg);

}  // namespace platoon
