#include "platoon/assignments.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace platoon {

void validate_assignment(const RoadNetwork& net, const TransportAssignment& a) {
    if (a.route.size() < 2) {
        throw std::runtime_error("assignment " + std::to_string(a.id) +
                                 ": route needs at least 2 nodes");
    }
    if (a.t_start > a.t_deadline) {
        throw std::runtime_error("assignment " + std::to_string(a.id) +
                                 ": deadline precedes start time");
    }
    for (NodeId n : a.route) {
        if (n >= net.node_count()) {
            throw std::runtime_error("assignment " + std::to_string(a.id) + ": unknown node id " +
                                     std::to_string(n));
        }
    }
    for (std::size_t i = 0; i + 1 < a.route.size(); ++i) {
        if (!net.has_edge(a.route[i], a.route[i + 1])) {
            throw std::runtime_error("assignment " + std::to_string(a.id) + ": route hop (" +
                                     std::to_string(a.route[i]) + ", " +
                                     std::to_string(a.route[i + 1]) + ") is not a network edge");
        }
    }
}

BoundedRoute compute_bounds(const RoadNetwork& net, const TransportAssignment& a,
                            double v_max_kmh) {
    const std::size_t n = a.route.size();
    BoundedRoute b;
    b.id = a.id;
    b.route = a.route;
    b.lower.resize(n);
    b.upper.resize(n);

    // Cumulative travel time at v_max up to each node.
    std::vector<double> prefix(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        prefix[i + 1] = prefix[i] + net.node_distance(a.route[i], a.route[i + 1]) / v_max_kmh;
    }
    const double total = prefix[n - 1];
    for (std::size_t i = 0; i < n; ++i) {
        b.lower[i] = a.t_start + prefix[i];
        b.upper[i] = a.t_deadline - (total - prefix[i]);
    }
    return b;
}

std::vector<BoundedRoute> compute_all_bounds(const RoadNetwork& net,
                                             const std::vector<TransportAssignment>& assignments,
                                             double v_max_kmh) {
    std::vector<BoundedRoute> out(assignments.size());
    const std::int64_t n = static_cast<std::int64_t>(assignments.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        out[i] = compute_bounds(net, assignments[i], v_max_kmh);
    }
    return out;
}

bool is_feasible(const BoundedRoute& b) {
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b.lower[i] > b.upper[i]) {
            return false;
        }
    }
    return true;
}

bool implements(const RoadNetwork& net, const Trajectory& traj, const TransportAssignment& a,
                double v_max_kmh) {
    // Tolerance (hours) against rounding when trajectories are built from the
    // bound sequences themselves.
    constexpr double eps = 1e-9;
    const std::size_t n = traj.route.size();
    if (n < 2 || traj.times.size() != n) {
        return false;
    }
    if (traj.route.front() != a.start_node() || traj.route.back() != a.dest_node()) {
        return false;
    }
    if (traj.times.front() < a.t_start - eps || traj.times.back() > a.t_deadline + eps) {
        return false;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!net.has_edge(traj.route[i], traj.route[i + 1])) {
            return false;
        }
        const double hop = net.node_distance(traj.route[i], traj.route[i + 1]) / v_max_kmh;
        if (traj.times[i + 1] - traj.times[i] < hop - eps) {
            return false;
        }
    }
    return true;
}

double window_width(const BoundedRoute& b, std::size_t node_index) {
    if (node_index >= b.size()) {
        throw std::out_of_range("window_width: node index " + std::to_string(node_index) +
                                " out of range");
    }
    return b.upper[node_index] - b.lower[node_index];
}

AssignmentFile assignments_from_json(const RoadNetwork& net, const nlohmann::json& j,
                                     const std::string& context) {
    try {
        AssignmentFile file;
        file.v_max_kmh = j.at("v_max_kmh").get<double>();
        if (!(file.v_max_kmh > 0.0)) {
            throw std::runtime_error("v_max_kmh must be positive");
        }
        for (const auto& entry : j.at("assignments")) {
            TransportAssignment a;
            a.id = entry.at("id").get<std::uint32_t>();
            a.route = entry.at("route").get<std::vector<NodeId>>();
            a.t_start = entry.at("t_start").get<double>();
            a.t_deadline = entry.at("t_deadline").get<double>();
            validate_assignment(net, a);
            file.assignments.push_back(std::move(a));
        }
        return file;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(context + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(context + ": " + e.what());
    }
}

AssignmentFile load_assignments(const RoadNetwork& net, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open assignments file: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return assignments_from_json(net, j, path);
}

nlohmann::json assignments_to_json(const AssignmentFile& file) {
    nlohmann::json j;
    j["v_max_kmh"] = file.v_max_kmh;
    auto arr = nlohmann::json::array();
    for (const auto& a : file.assignments) {
        arr.push_back({{"id", a.id},
                       {"route", a.route},
                       {"t_start", a.t_start},
                       {"t_deadline", a.t_deadline}});
    }
    j["assignments"] = std::move(arr);
    return j;
}

void save_assignments(const AssignmentFile& file, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write assignments file: " + path);
    }
    out << assignments_to_json(file).dump(2) << '\n';
}

}  // namespace platoon
