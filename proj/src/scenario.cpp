#include "platoon/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <random>
#include <stdexcept>

namespace platoon {

namespace {

// Distribution helpers on top of mt19937_64, kept free of std::*_distribution
// so that identical seeds reproduce identical scenarios across standard
// library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_below(std::uint64_t n) {
        // Rejection sampling over the largest multiple of n.
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t draw;
        do {
            draw = engine_();
        } while (draw >= limit);
        return draw % n;
    }

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::size_t weighted_index(const std::vector<double>& cumulative) {
        const double u = uniform01() * cumulative.back();
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                     cumulative.size() - 1);
    }

private:
    std::mt19937_64 engine_;
};

bool connected(std::size_t node_count, const std::vector<DirectedEdge>& edges) {
    if (node_count == 0) {
        return true;
    }
    std::vector<std::vector<std::uint32_t>> adj(node_count);
    for (const auto& e : edges) {
        adj[e.tail].push_back(e.head);
        adj[e.head].push_back(e.tail);
    }
    std::vector<char> seen(node_count, 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::size_t visited = 1;
    while (!stack.empty()) {
        const std::uint32_t n = stack.back();
        stack.pop_back();
        for (std::uint32_t m : adj[n]) {
            if (!seen[m]) {
                seen[m] = 1;
                ++visited;
                stack.push_back(m);
            }
        }
    }
    return visited == node_count;
}

RoadNetwork generate_grid(const GridSpec& spec, Rng& rng) {
    if (spec.rows < 1 || spec.cols < 1 || !(spec.spacing_km > 0.0)) {
        throw std::runtime_error("grid spec: rows, cols and spacing must be positive");
    }
    std::vector<Vec2> nodes;
    nodes.reserve(static_cast<std::size_t>(spec.rows) * spec.cols);
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            nodes.push_back({c * spec.spacing_km, r * spec.spacing_km});
        }
    }
    auto id = [&](int r, int c) { return static_cast<NodeId>(r * spec.cols + c); };

    std::vector<DirectedEdge> edges;
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            if (c + 1 < spec.cols) {
                edges.push_back({id(r, c), id(r, c + 1)});
                edges.push_back({id(r, c + 1), id(r, c)});
            }
            if (r + 1 < spec.rows) {
                edges.push_back({id(r, c), id(r + 1, c)});
                edges.push_back({id(r + 1, c), id(r, c)});
            }
        }
    }
    for (int r = 0; r + 1 < spec.rows; ++r) {
        for (int c = 0; c + 1 < spec.cols; ++c) {
            if (rng.uniform01() < spec.diagonal_fraction) {
                if (rng.uniform01() < 0.5) {
                    edges.push_back({id(r, c), id(r + 1, c + 1)});
                    edges.push_back({id(r + 1, c + 1), id(r, c)});
                } else {
                    edges.push_back({id(r, c + 1), id(r + 1, c)});
                    edges.push_back({id(r + 1, c), id(r, c + 1)});
                }
            }
        }
    }
    return RoadNetwork(CoordinateMode::PlanarKm, std::move(nodes), std::move(edges));
}

RoadNetwork generate_random_geometric(const RandomGeometricSpec& spec, Rng& rng) {
    if (spec.nodes < 1 || !(spec.radius_km > 0.0) || !(spec.extent_km > 0.0)) {
        throw std::runtime_error("random geometric spec: nodes, radius and extent must be positive");
    }
    constexpr int kMaxAttempts = 32;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::vector<Vec2> nodes;
        nodes.reserve(static_cast<std::size_t>(spec.nodes));
        for (int i = 0; i < spec.nodes; ++i) {
            nodes.push_back({rng.uniform(0.0, spec.extent_km), rng.uniform(0.0, spec.extent_km)});
        }
        std::vector<DirectedEdge> edges;
        for (std::size_t a = 0; a < nodes.size(); ++a) {
            for (std::size_t b = a + 1; b < nodes.size(); ++b) {
                if (std::hypot(nodes[b].x - nodes[a].x, nodes[b].y - nodes[a].y) <=
                    spec.radius_km) {
                    edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b)});
                    edges.push_back({static_cast<NodeId>(b), static_cast<NodeId>(a)});
                }
            }
        }
        if (connected(nodes.size(), edges)) {
            return RoadNetwork(CoordinateMode::PlanarKm, std::move(nodes), std::move(edges));
        }
    }
    throw std::runtime_error("random geometric network: still disconnected after " +
                             std::to_string(kMaxAttempts) + " attempts; increase radius");
}

// Label-setting shortest path over edge lengths; returns the node sequence or
// an empty vector when dest is unreachable.
std::vector<NodeId> shortest_path(const RoadNetwork& net, NodeId src, NodeId dst) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(net.node_count(), inf);
    std::vector<NodeId> parent(net.node_count(), src);
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[src] = 0.0;
    queue.push({0.0, src});
    while (!queue.empty()) {
        const auto [d, n] = queue.top();
        queue.pop();
        if (n == dst) {
            break;
        }
        if (d > dist[n]) {
            continue;
        }
        for (EdgeId e : net.out_edges(n)) {
            const NodeId m = net.edge(e).head;
            const double nd = d + net.edge_length(e);
            if (nd < dist[m]) {
                dist[m] = nd;
                parent[m] = n;
                queue.push({nd, m});
            }
        }
    }
    if (dist[dst] == inf) {
        return {};
    }
    std::vector<NodeId> path;
    for (NodeId n = dst; n != src; n = parent[n]) {
        path.push_back(n);
    }
    path.push_back(src);
    std::reverse(path.begin(), path.end());
    return path;
}

double route_length(const RoadNetwork& net, const std::vector<NodeId>& route) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < route.size(); ++i) {
        total += net.node_distance(route[i], route[i + 1]);
    }
    return total;
}

// Whole-edge subsection of at most max_km, start offset uniform over the
// offsets whose window is capped by max_km rather than by the route's end.
std::vector<NodeId> truncate_route(const RoadNetwork& net, const std::vector<NodeId>& route,
                                   double max_km, Rng& rng) {
    const std::size_t n = route.size();
    std::vector<double> prefix(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        prefix[i + 1] = prefix[i] + net.node_distance(route[i], route[i + 1]);
    }
    // The maximal window end is non-decreasing in the start offset, so one
    // forward pass enumerates every candidate (start, end).
    std::vector<std::pair<std::size_t, std::size_t>> windows;
    std::size_t end = 0;
    for (std::size_t s = 0; s + 1 < n; ++s) {
        if (end < s) {
            end = s;
        }
        while (end + 1 < n && prefix[end + 1] - prefix[s] <= max_km) {
            ++end;
        }
        if (end + 1 == n) {
            break;  // window reaches the route's end: not capped by max_km
        }
        if (end > s) {
            windows.emplace_back(s, end);
        }
    }
    if (windows.empty()) {
        return {};
    }
    const auto [s, e] = windows[rng.next_below(windows.size())];
    return std::vector<NodeId>(route.begin() + static_cast<std::ptrdiff_t>(s),
                               route.begin() + static_cast<std::ptrdiff_t>(e) + 1);
}

}  // namespace

ScenarioConfig parse_scenario_config(const nlohmann::json& j, const std::string& context) {
    try {
        ScenarioConfig cfg;
        cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.assignment_count = j.at("K").get<std::size_t>();
        cfg.v_max_kmh = j.value("v_max_kmh", 80.0);
        cfg.window_h = j.value("window_h", 0.5);
        cfg.start_fraction_at_zero = j.value("start_fraction_at_zero", 0.5);
        cfg.horizon_h = j.value("horizon_h", 24.0);
        cfg.max_route_km = j.value("max_route_km", 400.0);
        cfg.l_min_km = j.value("l_min_km", 20.0);
        if (!(cfg.v_max_kmh > 0.0) || cfg.window_h < 0.0 || cfg.horizon_h < 0.0 ||
            !(cfg.max_route_km > 0.0) || cfg.l_min_km < 0.0 ||
            cfg.start_fraction_at_zero < 0.0 || cfg.start_fraction_at_zero > 1.0) {
            throw std::runtime_error("invalid scenario parameters");
        }

        const auto& net = j.at("network");
        const std::string type = net.at("type").get<std::string>();
        if (type == "grid") {
            GridSpec g;
            g.rows = net.at("rows").get<int>();
            g.cols = net.at("cols").get<int>();
            g.spacing_km = net.at("spacing_km").get<double>();
            g.diagonal_fraction = net.value("diagonal_fraction", 0.0);
            cfg.network = g;
        } else if (type == "random_geometric") {
            RandomGeometricSpec r;
            r.nodes = net.at("nodes").get<int>();
            r.radius_km = net.at("radius_km").get<double>();
            r.extent_km = net.at("extent_km").get<double>();
            cfg.network = r;
        } else if (type == "file") {
            cfg.network = NetworkFileSpec{net.at("path").get<std::string>()};
        } else {
            throw std::runtime_error("unknown network type '" + type + "'");
        }
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(context + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(context + ": " + e.what());
    }
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open scenario file: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return parse_scenario_config(j, path);
}

RoadNetwork generate_network(const NetworkSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    if (const auto* grid = std::get_if<GridSpec>(&spec)) {
        return generate_grid(*grid, rng);
    }
    if (const auto* rgg = std::get_if<RandomGeometricSpec>(&spec)) {
        return generate_random_geometric(*rgg, rng);
    }
    return RoadNetwork::load(std::get<NetworkFileSpec>(spec).path);
}

std::vector<TransportAssignment> generate_assignments(const RoadNetwork& net,
                                                      const ScenarioConfig& cfg) {
    if (cfg.assignment_count == 0) {
        return {};
    }
    if (net.node_count() < 2) {
        throw std::runtime_error("generate_assignments: network needs at least 2 nodes");
    }
    // Mixed into the network seed so network and assignment draws stay
    // independent streams.
    Rng rng(cfg.seed * 0x9e3779b97f4a7c15ULL + 1);

    std::vector<double> cumulative_weights;
    if (!net.node_weights().empty()) {
        cumulative_weights.resize(net.node_count());
        double acc = 0.0;
        for (std::size_t i = 0; i < net.node_count(); ++i) {
            const double w = net.node_weights()[i];
            if (w < 0.0) {
                throw std::runtime_error("generate_assignments: negative node weight");
            }
            acc += w;
            cumulative_weights[i] = acc;
        }
        if (!(acc > 0.0)) {
            throw std::runtime_error("generate_assignments: node weights sum to zero");
        }
    }
    auto sample_node = [&]() -> NodeId {
        if (cumulative_weights.empty()) {
            return static_cast<NodeId>(rng.next_below(net.node_count()));
        }
        return static_cast<NodeId>(rng.weighted_index(cumulative_weights));
    };

    const std::size_t zero_start_count = static_cast<std::size_t>(
        std::floor(static_cast<double>(cfg.assignment_count) * cfg.start_fraction_at_zero));

    std::vector<TransportAssignment> out;
    out.reserve(cfg.assignment_count);
    constexpr int kMaxRetries = 100;
    for (std::size_t k = 0; k < cfg.assignment_count; ++k) {
        std::vector<NodeId> route;
        for (int attempt = 0;; ++attempt) {
            if (attempt >= kMaxRetries) {
                throw std::runtime_error("generate_assignments: no usable start/destination pair after " +
                                         std::to_string(kMaxRetries) + " retries");
            }
            const NodeId start = sample_node();
            const NodeId dest = sample_node();
            if (start == dest) {
                continue;
            }
            route = shortest_path(net, start, dest);
            if (route.empty()) {
                continue;  // unreachable destination
            }
            if (route_length(net, route) > cfg.max_route_km) {
                route = truncate_route(net, route, cfg.max_route_km, rng);
                if (route.empty()) {
                    continue;
                }
            }
            break;
        }

        TransportAssignment a;
        a.id = static_cast<std::uint32_t>(k);
        a.route = std::move(route);
        a.t_start = k < zero_start_count ? 0.0 : rng.uniform(0.0, cfg.horizon_h);
        a.t_deadline = a.t_start + route_length(net, a.route) / cfg.v_max_kmh + cfg.window_h;
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace platoon
