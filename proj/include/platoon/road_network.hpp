#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "platoon/geometry.hpp"

namespace platoon {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr EdgeId kInvalidEdge = std::numeric_limits<EdgeId>::max();

struct DirectedEdge {
    NodeId tail = 0;
    NodeId head = 0;
};

/// Immutable directed road graph. Node positions are pairwise distinct, so
/// position equality reduces to NodeId equality. Edge lengths and orientations
/// are precomputed at construction; instances are safe for shared concurrent
/// reads.
class RoadNetwork {
public:
    RoadNetwork(CoordinateMode mode, std::vector<Vec2> nodes,
                std::vector<DirectedEdge> edges,
                std::vector<double> node_weights = {});

    static RoadNetwork from_json(const nlohmann::json& j, const std::string& context = "network");
    static RoadNetwork load(const std::string& path);

    nlohmann::json to_json() const;
    void save(const std::string& path) const;

    CoordinateMode mode() const { return mode_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const Vec2& position(NodeId n) const;
    const DirectedEdge& edge(EdgeId e) const;
    double edge_length(EdgeId e) const;
    double edge_orientation(EdgeId e) const;

    /// kInvalidEdge when (tail, head) is not a directed edge of the network.
    EdgeId find_edge(NodeId tail, NodeId head) const;
    bool has_edge(NodeId tail, NodeId head) const { return find_edge(tail, head) != kInvalidEdge; }

    /// Straight-line distance between two node positions in km, independent of
    /// any edge existing between them.
    double node_distance(NodeId a, NodeId b) const;

    const std::vector<EdgeId>& out_edges(NodeId n) const;

    /// Per-node sampling weights from the network file; empty means uniform.
    const std::vector<double>& node_weights() const { return node_weights_; }

private:
    void check_node(NodeId n) const;
    void check_edge(EdgeId e) const;

    CoordinateMode mode_;
    std::vector<Vec2> nodes_;
    std::vector<DirectedEdge> edges_;
    std::vector<double> lengths_;
    std::vector<double> orientations_;
    std::vector<std::vector<EdgeId>> out_;
    std::unordered_map<std::uint64_t, EdgeId> edge_lookup_;
    std::vector<double> node_weights_;
};

}  // namespace platoon
