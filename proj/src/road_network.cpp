#include "platoon/road_network.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace platoon {

namespace {

std::uint64_t edge_key(NodeId tail, NodeId head) {
    return (static_cast<std::uint64_t>(tail) << 32) | head;
}

std::uint64_t position_key(const Vec2& p) {
    // Exact bit equality, with -0.0 folded onto +0.0.
    double x = p.x == 0.0 ? 0.0 : p.x;
    double y = p.y == 0.0 ? 0.0 : p.y;
    std::uint64_t bx = 0, by = 0;
    std::memcpy(&bx, &x, sizeof bx);
    std::memcpy(&by, &y, sizeof by);
    return bx ^ (by * 0x9e3779b97f4a7c15ULL + (by >> 31));
}

}  // namespace

RoadNetwork::RoadNetwork(CoordinateMode mode, std::vector<Vec2> nodes,
                         std::vector<DirectedEdge> edges,
                         std::vector<double> node_weights)
    : mode_(mode),
      nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      node_weights_(std::move(node_weights)) {
    std::unordered_set<std::uint64_t> seen_positions;
    seen_positions.reserve(nodes_.size() * 2);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!seen_positions.insert(position_key(nodes_[i])).second) {
            // Hash collisions are possible; confirm with a scan before failing.
            for (std::size_t k = 0; k < i; ++k) {
                if (same_position(nodes_[k], nodes_[i])) {
                    throw std::runtime_error("road network: nodes " + std::to_string(k) + " and " +
                                             std::to_string(i) + " share the same position");
                }
            }
        }
    }
    if (!node_weights_.empty() && node_weights_.size() != nodes_.size()) {
        throw std::runtime_error("road network: node_weights length does not match node count");
    }

    lengths_.reserve(edges_.size());
    orientations_.reserve(edges_.size());
    out_.assign(nodes_.size(), {});
    edge_lookup_.reserve(edges_.size() * 2);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto& [tail, head] = edges_[e];
        if (tail >= nodes_.size() || head >= nodes_.size()) {
            throw std::runtime_error("road network: edge " + std::to_string(e) +
                                     " references a node id out of range");
        }
        if (tail == head) {
            throw std::runtime_error("road network: edge " + std::to_string(e) + " is a self-loop");
        }
        if (!edge_lookup_.emplace(edge_key(tail, head), static_cast<EdgeId>(e)).second) {
            throw std::runtime_error("road network: duplicate directed edge (" +
                                     std::to_string(tail) + ", " + std::to_string(head) + ")");
        }
        const double len = point_distance(mode_, nodes_[tail], nodes_[head]);
        if (!(len > 0.0)) {
            throw std::runtime_error("road network: edge " + std::to_string(e) +
                                     " has non-positive length");
        }
        lengths_.push_back(len);
        orientations_.push_back(point_orientation(mode_, nodes_[tail], nodes_[head]));
        out_[tail].push_back(static_cast<EdgeId>(e));
    }
}

RoadNetwork RoadNetwork::from_json(const nlohmann::json& j, const std::string& context) {
    try {
        const std::string mode_str = j.at("coordinate_mode").get<std::string>();
        CoordinateMode mode;
        if (mode_str == "planar_km") {
            mode = CoordinateMode::PlanarKm;
        } else if (mode_str == "geodetic_deg") {
            mode = CoordinateMode::GeodeticDeg;
        } else {
            throw std::runtime_error("unknown coordinate_mode '" + mode_str + "'");
        }

        std::vector<Vec2> nodes;
        for (const auto& n : j.at("nodes")) {
            if (!n.is_array() || n.size() != 2) {
                throw std::runtime_error("each node must be a [x, y] pair");
            }
            nodes.push_back({n[0].get<double>(), n[1].get<double>()});
        }

        std::vector<DirectedEdge> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) {
                throw std::runtime_error("each edge must be a [tail, head] pair");
            }
            edges.push_back({e[0].get<NodeId>(), e[1].get<NodeId>()});
        }

        std::vector<double> weights;
        if (j.contains("node_weights")) {
            weights = j.at("node_weights").get<std::vector<double>>();
        }
        return RoadNetwork(mode, std::move(nodes), std::move(edges), std::move(weights));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(context + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(context + ": " + e.what());
    }
}

RoadNetwork RoadNetwork::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open network file: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return from_json(j, path);
}

nlohmann::json RoadNetwork::to_json() const {
    nlohmann::json j;
    j["coordinate_mode"] = mode_ == CoordinateMode::PlanarKm ? "planar_km" : "geodetic_deg";
    auto nodes = nlohmann::json::array();
    for (const auto& n : nodes_) {
        nodes.push_back({n.x, n.y});
    }
    j["nodes"] = std::move(nodes);
    auto edges = nlohmann::json::array();
    for (const auto& e : edges_) {
        edges.push_back({e.tail, e.head});
    }
    j["edges"] = std::move(edges);
    if (!node_weights_.empty()) {
        j["node_weights"] = node_weights_;
    }
    return j;
}

void RoadNetwork::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write network file: " + path);
    }
    out << to_json().dump(2) << '\n';
}

void RoadNetwork::check_node(NodeId n) const {
    if (n >= nodes_.size()) {
        throw std::out_of_range("node id " + std::to_string(n) + " out of range");
    }
}

void RoadNetwork::check_edge(EdgeId e) const {
    if (e >= edges_.size()) {
        throw std::out_of_range("edge id " + std::to_string(e) + " out of range");
    }
}

const Vec2& RoadNetwork::position(NodeId n) const {
    check_node(n);
    return nodes_[n];
}

const DirectedEdge& RoadNetwork::edge(EdgeId e) const {
    check_edge(e);
    return edges_[e];
}

double RoadNetwork::edge_length(EdgeId e) const {
    check_edge(e);
    return lengths_[e];
}

double RoadNetwork::edge_orientation(EdgeId e) const {
    check_edge(e);
    return orientations_[e];
}

EdgeId RoadNetwork::find_edge(NodeId tail, NodeId head) const {
    auto it = edge_lookup_.find(edge_key(tail, head));
    return it == edge_lookup_.end() ? kInvalidEdge : it->second;
}

double RoadNetwork::node_distance(NodeId a, NodeId b) const {
    check_node(a);
    check_node(b);
    return point_distance(mode_, nodes_[a], nodes_[b]);
}

const std::vector<EdgeId>& RoadNetwork::out_edges(NodeId n) const {
    check_node(n);
    return out_[n];
}

}  // namespace platoon
