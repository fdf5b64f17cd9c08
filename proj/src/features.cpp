#include "platoon/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace platoon {

bool OrientationSignature::has_cell(int c) const {
    auto it = std::lower_bound(cells.begin(), cells.end(), c,
                               [](const std::pair<int, double>& e, int v) { return e.first < v; });
    return it != cells.end() && it->first == c;
}

bool OrientationSignature::intersects(const OrientationSignature& o) const {
    auto a = cells.begin();
    auto b = o.cells.begin();
    while (a != cells.end() && b != o.cells.end()) {
        if (a->first == b->first) {
            return true;
        }
        if (a->first < b->first) {
            ++a;
        } else {
            ++b;
        }
    }
    return false;
}

IntervalFeature project_interval(const RoadNetwork& net, const BoundedRoute& b,
                                 const ProjectionVector& p) {
    if (b.route.empty()) {
        throw std::runtime_error("project_interval: empty route");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < b.size(); ++a) {
        const Vec2& pos = net.position(b.route[a]);
        const double spatial = p.p[0] * pos.x + p.p[1] * pos.y;
        const double v_lower = spatial + p.p[2] * b.lower[a];
        const double v_upper = spatial + p.p[2] * b.upper[a];
        lo = std::min(lo, std::min(v_lower, v_upper));
        hi = std::max(hi, std::max(v_lower, v_upper));
    }
    return {lo, hi};
}

ProjectionVector alpha_vector(double alpha, double v_max_kmh, CoordinateMode mode,
                              std::string label) {
    if (!(v_max_kmh > 0.0)) {
        throw std::runtime_error("alpha_vector: v_max must be positive");
    }
    ProjectionVector v;
    v.label = std::move(label);
    if (mode == CoordinateMode::GeodeticDeg) {
        // Positions in degrees: longitude shrunk to latitude-equivalent
        // degrees at latitude 0.278*pi rad, time in degree-equivalents at
        // v_max (1 deg of latitude = 6371*pi/180 km).
        v.p = {-std::cos(alpha), -std::sin(alpha) / std::cos(0.278 * std::numbers::pi),
               v_max_kmh * 180.0 / (kEarthRadiusKm * std::numbers::pi)};
    } else {
        v.p = {-std::cos(alpha), -std::sin(alpha), v_max_kmh};
    }
    return v;
}

OrientationSignature orientation_signature(const RoadNetwork& net, const BoundedRoute& b,
                                           int cell_count, double l_min_km) {
    if (cell_count < 1) {
        throw std::runtime_error("orientation_signature: cell count must be >= 1");
    }
    if (l_min_km < 0.0) {
        throw std::runtime_error("orientation_signature: l_min must be >= 0");
    }

    std::map<int, double> load;  // cell -> accumulated route km
    for (std::size_t a = 0; a + 1 < b.size(); ++a) {
        const EdgeId e = net.find_edge(b.route[a], b.route[a + 1]);
        if (e == kInvalidEdge) {
            throw std::runtime_error("orientation_signature: route of assignment " +
                                     std::to_string(b.id) + " is not on the network");
        }
        int cell = static_cast<int>(std::floor(net.edge_orientation(e) * cell_count / kTwoPi));
        if (cell >= cell_count) {
            cell = 0;  // angle at exactly 2*pi wraps to the first cell
        }
        load[cell] += net.edge_length(e);
    }

    // Greedy exclusion: drop cells in ascending load order (ties by lower
    // cell index) while the dropped total stays strictly below l_min/2.
    std::vector<std::pair<int, double>> by_load(load.begin(), load.end());
    std::stable_sort(by_load.begin(), by_load.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
    const double budget = l_min_km / 2.0;
    double dropped = 0.0;
    std::size_t first_kept = 0;
    while (first_kept < by_load.size() && dropped + by_load[first_kept].second < budget) {
        dropped += by_load[first_kept].second;
        ++first_kept;
    }

    OrientationSignature sig;
    sig.cell_count = cell_count;
    sig.l_min_km = l_min_km;
    sig.cells.assign(by_load.begin() + static_cast<std::ptrdiff_t>(first_kept), by_load.end());
    std::sort(sig.cells.begin(), sig.cells.end());
    return sig;
}

namespace {

FeatureVector extract_one(const RoadNetwork& net, const BoundedRoute& b,
                          const FeatureConfig& config) {
    FeatureVector fv;
    fv.feasible = is_feasible(b);
    if (!fv.feasible) {
        return fv;  // infeasible assignments get no features
    }
    fv.intervals.reserve(config.projections.size());
    for (const auto& p : config.projections) {
        fv.intervals.push_back(project_interval(net, b, p));
    }
    if (config.orientation) {
        fv.signature = orientation_signature(net, b, config.orientation->cell_count,
                                             config.orientation->l_min_km);
    }
    return fv;
}

}  // namespace

std::vector<FeatureVector> extract_all(const RoadNetwork& net,
                                       const std::vector<BoundedRoute>& routes,
                                       const FeatureConfig& config) {
    std::vector<FeatureVector> out(routes.size());
    const std::int64_t n = static_cast<std::int64_t>(routes.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
        out[i] = extract_one(net, routes[i], config);
    }
    return out;
}

std::vector<FeatureVector> extract_all_serial(const RoadNetwork& net,
                                              const std::vector<BoundedRoute>& routes,
                                              const FeatureConfig& config) {
    std::vector<FeatureVector> out;
    out.reserve(routes.size());
    for (const auto& b : routes) {
        out.push_back(extract_one(net, b, config));
    }
    return out;
}

FeatureConfig experiment_config(double v_max_kmh, CoordinateMode mode, double l_min_km,
                                int cell_count) {
    FeatureConfig cfg;
    cfg.projections = {
        {"c_100", {1.0, 0.0, 0.0}},
        {"c_010", {0.0, 1.0, 0.0}},
        {"c_001", {0.0, 0.0, 1.0}},
        {"c_110", {1.0, 1.0, 0.0}},
        {"c_-110", {-1.0, 1.0, 0.0}},
    };
    for (int k = 0; k < 8; ++k) {
        cfg.projections.push_back(alpha_vector(k * std::numbers::pi / 4.0, v_max_kmh, mode,
                                               "c_a" + std::to_string(k)));
    }
    cfg.orientation = OrientationConfig{cell_count, l_min_km};
    return cfg;
}

FeatureConfig parse_feature_config(const nlohmann::json& j, double v_max_kmh,
                                   CoordinateMode mode, const std::string& context) {
    try {
        FeatureConfig cfg;
        int alpha_count = 0;
        for (const auto& entry : j.at("projections")) {
            if (entry.contains("alpha")) {
                std::string label = entry.contains("label")
                                        ? entry.at("label").get<std::string>()
                                        : "c_a" + std::to_string(alpha_count);
                cfg.projections.push_back(
                    alpha_vector(entry.at("alpha").get<double>(), v_max_kmh, mode, label));
                ++alpha_count;
            } else {
                ProjectionVector p;
                p.label = entry.at("label").get<std::string>();
                auto arr = entry.at("p").get<std::vector<double>>();
                if (arr.size() != 3) {
                    throw std::runtime_error("projection vector must have 3 components");
                }
                p.p = {arr[0], arr[1], arr[2]};
                if (p.p[0] == 0.0 && p.p[1] == 0.0 && p.p[2] == 0.0) {
                    throw std::runtime_error("projection vector must not be zero");
                }
                cfg.projections.push_back(std::move(p));
            }
        }
        if (j.contains("orientation")) {
            OrientationConfig oc;
            oc.cell_count = j.at("orientation").at("cells").get<int>();
            oc.l_min_km = j.at("orientation").at("l_min_km").get<double>();
            cfg.orientation = oc;
        }
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(context + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(context + ": " + e.what());
    }
}

FeatureConfig load_feature_config(const std::string& path, double v_max_kmh,
                                  CoordinateMode mode) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open feature config: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return parse_feature_config(j, v_max_kmh, mode, path);
}

}  // namespace platoon
