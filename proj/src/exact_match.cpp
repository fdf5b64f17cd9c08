#include "platoon/exact_match.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace platoon {

namespace {

std::uint64_t directed_key(NodeId tail, NodeId head) {
    return (static_cast<std::uint64_t>(tail) << 32) | head;
}

bool windows_overlap(const BoundedRoute& bi, std::size_t a, const BoundedRoute& bj,
                     std::size_t b) {
    return bi.lower[a] <= bj.upper[b] && bj.lower[b] <= bi.upper[a];
}

// Positions of each directed edge of a route, plus the validated edge lengths.
struct RouteEdgeIndex {
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> positions;
    std::vector<double> edge_lengths;

    explicit RouteEdgeIndex(const RoadNetwork& net, const BoundedRoute& b) {
        const std::size_t n = b.size();
        if (n < 2) {
            throw std::runtime_error("coordination: route of assignment " + std::to_string(b.id) +
                                     " has fewer than 2 nodes");
        }
        positions.reserve(n);
        edge_lengths.resize(n - 1);
        for (std::size_t a = 0; a + 1 < n; ++a) {
            const EdgeId e = net.find_edge(b.route[a], b.route[a + 1]);
            if (e == kInvalidEdge) {
                throw std::runtime_error("coordination: route of assignment " +
                                         std::to_string(b.id) + " is not on the network");
            }
            edge_lengths[a] = net.edge_length(e);
            positions[directed_key(b.route[a], b.route[a + 1])].push_back(
                static_cast<std::uint32_t>(a));
        }
    }
};

void validate_route_on_network(const RoadNetwork& net, const BoundedRoute& b) {
    if (b.size() < 2) {
        throw std::runtime_error("coordination: route of assignment " + std::to_string(b.id) +
                                 " has fewer than 2 nodes");
    }
    for (std::size_t a = 0; a + 1 < b.size(); ++a) {
        if (!net.has_edge(b.route[a], b.route[a + 1])) {
            throw std::runtime_error("coordination: route of assignment " + std::to_string(b.id) +
                                     " is not on the network");
        }
    }
}

// Scans route bj against the prebuilt edge index of bi. Every matched index
// pair contributes its edge length once, per the min-distance definition.
PairVerdict evaluate_pair(const RouteEdgeIndex& index_i, const BoundedRoute& bi,
                          const BoundedRoute& bj, double l_min_km) {
    PairVerdict v;
    v.i = std::min(bi.id, bj.id);
    v.j = std::max(bi.id, bj.id);
    bool any = false;
    double matched_km = 0.0;
    for (std::size_t b = 0; b + 1 < bj.size(); ++b) {
        auto it = index_i.positions.find(directed_key(bj.route[b], bj.route[b + 1]));
        if (it == index_i.positions.end()) {
            continue;
        }
        for (std::uint32_t a : it->second) {
            if (windows_overlap(bi, a, bj, b) && windows_overlap(bi, a + 1, bj, b + 1)) {
                any = true;
                matched_km += index_i.edge_lengths[a];
            }
        }
    }
    v.overlap_km = matched_km;
    v.lambda = any && matched_km >= l_min_km;
    return v;
}

}  // namespace

PairVerdict coordination(const RoadNetwork& net, const BoundedRoute& bi, const BoundedRoute& bj) {
    return coordination_min_distance(net, bi, bj, 0.0);
}

PairVerdict coordination_min_distance(const RoadNetwork& net, const BoundedRoute& bi,
                                      const BoundedRoute& bj, double l_min_km) {
    RouteEdgeIndex index(net, bi);
    validate_route_on_network(net, bj);
    return evaluate_pair(index, bi, bj, l_min_km);
}

PairVerdict coordination_naive(const RoadNetwork& net, const BoundedRoute& bi,
                               const BoundedRoute& bj, double l_min_km) {
    validate_route_on_network(net, bi);
    validate_route_on_network(net, bj);
    PairVerdict v;
    v.i = std::min(bi.id, bj.id);
    v.j = std::max(bi.id, bj.id);
    bool any = false;
    double matched_km = 0.0;
    for (std::size_t a = 0; a + 1 < bi.size(); ++a) {
        for (std::size_t b = 0; b + 1 < bj.size(); ++b) {
            if (bi.route[a] != bj.route[b] || bi.route[a + 1] != bj.route[b + 1]) {
                continue;
            }
            if (windows_overlap(bi, a, bj, b) && windows_overlap(bi, a + 1, bj, b + 1)) {
                any = true;
                matched_km += net.node_distance(bi.route[a], bi.route[a + 1]);
            }
        }
    }
    v.overlap_km = matched_km;
    v.lambda = any && matched_km >= l_min_km;
    return v;
}

std::vector<PairVerdict> evaluate_pairs(const RoadNetwork& net,
                                        const std::vector<BoundedRoute>& routes,
                                        const std::vector<IndexPair>& pairs, double l_min_km) {
    std::vector<std::unique_ptr<RouteEdgeIndex>> indexes(routes.size());
    for (const auto& [i, j] : pairs) {
        if (i >= routes.size() || j >= routes.size()) {
            throw std::runtime_error("evaluate_pairs: pair index out of range");
        }
        if (!indexes[i]) {
            indexes[i] = std::make_unique<RouteEdgeIndex>(net, routes[i]);
        }
    }
    std::vector<PairVerdict> out(pairs.size());
    const std::int64_t n = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 256)
    for (std::int64_t p = 0; p < n; ++p) {
        const auto [i, j] = pairs[p];
        out[p] = evaluate_pair(*indexes[i], routes[i], routes[j], l_min_km);
        out[p].i = i;
        out[p].j = j;
    }
    return out;
}

std::vector<PairVerdict> ground_truth_verdicts(const RoadNetwork& net,
                                               const std::vector<BoundedRoute>& routes,
                                               double l_min_km) {
    const std::size_t k = routes.size();
    std::vector<char> feasible(k, 0);
    std::vector<std::unique_ptr<RouteEdgeIndex>> indexes(k);
    const std::int64_t kn = static_cast<std::int64_t>(k);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < kn; ++i) {
        feasible[i] = is_feasible(routes[i]) ? 1 : 0;
        if (feasible[i]) {
            indexes[i] = std::make_unique<RouteEdgeIndex>(net, routes[i]);
        }
    }

    std::vector<std::vector<PairVerdict>> buckets;
#ifdef _OPENMP
    buckets.resize(omp_get_max_threads());
#else
    buckets.resize(1);
#endif

#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < kn; ++i) {
        if (!feasible[i]) {
            continue;
        }
#ifdef _OPENMP
        auto& bucket = buckets[omp_get_thread_num()];
#else
        auto& bucket = buckets[0];
#endif
        for (std::size_t j = static_cast<std::size_t>(i) + 1; j < k; ++j) {
            if (!feasible[j]) {
                continue;
            }
            PairVerdict v = evaluate_pair(*indexes[i], routes[i], routes[j], l_min_km);
            v.i = static_cast<std::uint32_t>(i);
            v.j = static_cast<std::uint32_t>(j);
            if (v.lambda) {
                bucket.push_back(v);
            }
        }
    }

    std::vector<PairVerdict> out;
    for (auto& bucket : buckets) {
        out.insert(out.end(), bucket.begin(), bucket.end());
    }
    std::sort(out.begin(), out.end(), [](const PairVerdict& a, const PairVerdict& b) {
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });
    return out;
}

std::vector<PairVerdict> ground_truth_verdicts_serial(const RoadNetwork& net,
                                                      const std::vector<BoundedRoute>& routes,
                                                      double l_min_km) {
    std::vector<PairVerdict> out;
    for (std::size_t i = 0; i < routes.size(); ++i) {
        if (!is_feasible(routes[i])) {
            continue;
        }
        for (std::size_t j = i + 1; j < routes.size(); ++j) {
            if (!is_feasible(routes[j])) {
                continue;
            }
            PairVerdict v = coordination_naive(net, routes[i], routes[j], l_min_km);
            v.i = static_cast<std::uint32_t>(i);
            v.j = static_cast<std::uint32_t>(j);
            if (v.lambda) {
                out.push_back(v);
            }
        }
    }
    return out;
}

CandidateSet ground_truth(const RoadNetwork& net, const std::vector<BoundedRoute>& routes,
                          double l_min_km) {
    CandidateSet set;
    auto verdicts = ground_truth_verdicts(net, routes, l_min_km);
    set.pairs.reserve(verdicts.size());
    for (const auto& v : verdicts) {
        set.pairs.emplace_back(v.i, v.j);
    }
    set.stage_log.push_back({"exact", set.pairs.size()});
    return set;
}

}  // namespace platoon
