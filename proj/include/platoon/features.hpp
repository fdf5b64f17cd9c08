#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "platoon/assignments.hpp"
#include "platoon/road_network.hpp"

namespace platoon {

/// Fixed direction in (position-x, position-y, time) space that bounded routes
/// are projected onto. In geodetic mode the position components weight
/// latitude and longitude degrees.
struct ProjectionVector {
    std::string label;
    std::array<double, 3> p{0.0, 0.0, 0.0};
};

struct IntervalFeature {
    double lo = 0.0;
    double hi = 0.0;

    bool overlaps(const IntervalFeature& o) const {
        return lo <= o.hi && o.lo <= hi;  // closed intervals; touching counts
    }
};

/// Cells of an M-cell equal partition of [0, 2*pi) hit by a route's edges,
/// after greedily excluding low-load cells totalling strictly less than
/// l_min/2 of route length.
struct OrientationSignature {
    int cell_count = 0;
    double l_min_km = 0.0;
    std::vector<std::pair<int, double>> cells;  // (cell index, accumulated km), sorted by cell

    bool has_cell(int c) const;
    bool intersects(const OrientationSignature& o) const;
};

struct FeatureVector {
    bool feasible = false;
    std::vector<IntervalFeature> intervals;  // one per configured projection, in order
    std::optional<OrientationSignature> signature;
};

struct OrientationConfig {
    int cell_count = 100;
    double l_min_km = 0.0;
};

struct FeatureConfig {
    std::vector<ProjectionVector> projections;
    std::optional<OrientationConfig> orientation;
};

/// Projection of the 2N vertex set {(P(n[a]), lower[a]), (P(n[a]), upper[a])}
/// onto p: the interval [min p.v, max p.v].
IntervalFeature project_interval(const RoadNetwork& net, const BoundedRoute& b,
                                 const ProjectionVector& p);

/// Projection vector approximately orthogonal to a max-speed trajectory with
/// heading alpha. Geodetic mode: (-cos a, -sin a / cos(0.278*pi),
/// v_max * 180 / (6371*pi)) on (lat deg, lon deg, hours). Planar mode drops
/// the degree scaling: (-cos a, -sin a, v_max).
ProjectionVector alpha_vector(double alpha, double v_max_kmh, CoordinateMode mode,
                              std::string label = "");

OrientationSignature orientation_signature(const RoadNetwork& net, const BoundedRoute& b,
                                           int cell_count, double l_min_km);

std::vector<FeatureVector> extract_all(const RoadNetwork& net,
                                       const std::vector<BoundedRoute>& routes,
                                       const FeatureConfig& config);

/// Serial reference for extract_all, kept for testing and benchmarks.
std::vector<FeatureVector> extract_all_serial(const RoadNetwork& net,
                                              const std::vector<BoundedRoute>& routes,
                                              const FeatureConfig& config);

/// The classifier family used by the simulation experiment: projections onto
/// the axis vectors (1,0,0), (0,1,0), (0,0,1), (1,1,0), (-1,1,0), eight
/// heading vectors alpha = 0, pi/4, ..., 7*pi/4, and a 100-cell orientation
/// signature with minimum-distance exclusion.
FeatureConfig experiment_config(double v_max_kmh, CoordinateMode mode, double l_min_km,
                                int cell_count = 100);

FeatureConfig parse_feature_config(const nlohmann::json& j, double v_max_kmh,
                                   CoordinateMode mode, const std::string& context);
FeatureConfig load_feature_config(const std::string& path, double v_max_kmh,
                                  CoordinateMode mode);

}  // namespace platoon
