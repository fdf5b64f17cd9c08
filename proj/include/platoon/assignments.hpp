#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "platoon/road_network.hpp"

namespace platoon {

/// A task for one truck: travel its fixed route, departing no earlier than
/// t_start and arriving no later than t_deadline (hours).
struct TransportAssignment {
    std::uint32_t id = 0;
    std::vector<NodeId> route;
    double t_start = 0.0;
    double t_deadline = 0.0;

    NodeId start_node() const { return route.front(); }
    NodeId dest_node() const { return route.back(); }
};

/// A route annotated with per-node arrival-time bounds. lower[a] is the
/// earliest possible arrival at route[a] (start plus travel at v_max), upper[a]
/// the latest (deadline minus remaining travel at v_max).
struct BoundedRoute {
    std::uint32_t id = 0;
    std::vector<NodeId> route;
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t size() const { return route.size(); }
};

struct Trajectory {
    std::vector<NodeId> route;
    std::vector<double> times;
};

/// Throws if the assignment violates its invariants on this network
/// (route not a path, fewer than 2 nodes, deadline before start).
void validate_assignment(const RoadNetwork& net, const TransportAssignment& a);

BoundedRoute compute_bounds(const RoadNetwork& net, const TransportAssignment& a,
                            double v_max_kmh);

std::vector<BoundedRoute> compute_all_bounds(const RoadNetwork& net,
                                             const std::vector<TransportAssignment>& assignments,
                                             double v_max_kmh);

/// True iff lower[a] <= upper[a] at every node. Infeasible assignments are
/// kept but skipped by culling and exact matching.
bool is_feasible(const BoundedRoute& b);

/// True iff the trajectory is a network path obeying the max-speed constraint
/// on every hop and matches the assignment's endpoints and time window.
bool implements(const RoadNetwork& net, const Trajectory& traj,
                const TransportAssignment& a, double v_max_kmh);

/// upper[a] - lower[a]; constant across a for any fixed assignment. Index is
/// 0-based; throws std::out_of_range outside [0, size).
double window_width(const BoundedRoute& b, std::size_t node_index);

struct AssignmentFile {
    double v_max_kmh = 0.0;
    std::vector<TransportAssignment> assignments;
};

AssignmentFile load_assignments(const RoadNetwork& net, const std::string& path);
AssignmentFile assignments_from_json(const RoadNetwork& net, const nlohmann::json& j,
                                     const std::string& context);
nlohmann::json assignments_to_json(const AssignmentFile& file);
void save_assignments(const AssignmentFile& file, const std::string& path);

}  // namespace platoon
