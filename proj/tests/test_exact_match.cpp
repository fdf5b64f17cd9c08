#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "platoon/exact_match.hpp"
#include "test_support.hpp"

using namespace platoon;

namespace {

BoundedRoute make_bounded(std::uint32_t id, std::vector<NodeId> route, std::vector<double> lower,
                          std::vector<double> upper) {
    return {id, std::move(route), std::move(lower), std::move(upper)};
}

}  // namespace

TEST_CASE("identical assignments coordinate over the whole route") {
    auto net = test::path_network();
    auto b0 = compute_bounds(net, test::path_assignment(0), 80.0);
    auto b1 = compute_bounds(net, test::path_assignment(1), 80.0);
    auto v = coordination(net, b0, b1);
    CHECK(v.lambda);
    CHECK(v.overlap_km == doctest::Approx(90.0));
}

TEST_CASE("a shared edge with overlapping windows at both ends is a match") {
    auto net = test::path_network();
    auto bi = make_bounded(0, {1, 2}, {0.5, 1.125}, {1.375, 2.0});
    auto bj = make_bounded(1, {1, 2}, {0.6, 1.225}, {1.5, 2.125});
    auto v = coordination(net, bi, bj);
    CHECK(v.lambda);
    CHECK(v.overlap_km == doctest::Approx(50.0));
}

TEST_CASE("node-disjoint routes never coordinate") {
    RoadNetwork net(CoordinateMode::PlanarKm, {{0, 0}, {10, 0}, {0, 5}, {10, 5}},
                    {{0, 1}, {2, 3}});
    auto bi = make_bounded(0, {0, 1}, {0.0, 0.125}, {1.0, 1.125});
    auto bj = make_bounded(1, {2, 3}, {0.0, 0.125}, {1.0, 1.125});
    auto v = coordination(net, bi, bj);
    CHECK_FALSE(v.lambda);
    CHECK(v.overlap_km == 0.0);
}

TEST_CASE("a shared edge with disjoint windows is not a match") {
    auto net = test::path_network();
    auto bi = make_bounded(0, {1, 2}, {0.0, 0.625}, {0.2, 0.825});
    auto bj = make_bounded(1, {1, 2}, {0.3, 0.925}, {0.5, 1.125});
    CHECK_FALSE(coordination(net, bi, bj).lambda);
}

TEST_CASE("touching windows count as overlap") {
    auto net = test::path_network();
    auto bi = make_bounded(0, {1, 2}, {0.0, 0.625}, {1.0, 1.625});
    auto bj = make_bounded(1, {1, 2}, {1.0, 1.625}, {2.0, 2.625});
    CHECK(coordination(net, bi, bj).lambda);
}

TEST_CASE("coordination rejects routes that are not on the network") {
    auto net = test::path_network();
    auto good = compute_bounds(net, test::path_assignment(), 80.0);
    auto bad = make_bounded(1, {0, 2}, {0.0, 1.0}, {1.0, 2.0});
    CHECK_THROWS_AS(coordination(net, good, bad), std::runtime_error);
    CHECK_THROWS_AS(coordination(net, bad, good), std::runtime_error);
}

TEST_CASE("minimum distance thresholds the matched length") {
    RoadNetwork net15(CoordinateMode::PlanarKm, {{0, 0}, {15, 0}}, {{0, 1}});
    auto a = make_bounded(0, {0, 1}, {0.0, 0.1875}, {0.5, 0.6875});
    auto b = make_bounded(1, {0, 1}, {0.0, 0.1875}, {0.5, 0.6875});
    auto v15 = coordination_min_distance(net15, a, b, 20.0);
    CHECK_FALSE(v15.lambda);
    CHECK(v15.overlap_km == doctest::Approx(15.0));

    RoadNetwork net20(CoordinateMode::PlanarKm, {{0, 0}, {20, 0}}, {{0, 1}});
    auto c = make_bounded(0, {0, 1}, {0.0, 0.25}, {0.5, 0.75});
    auto d = make_bounded(1, {0, 1}, {0.0, 0.25}, {0.5, 0.75});
    CHECK(coordination_min_distance(net20, c, d, 20.0).lambda);  // boundary inclusive
}

TEST_CASE("l_min = 0 reduces the min-distance variant to plain coordination") {
    auto scenario = test::make_scenario(23, 30);
    for (std::size_t i = 0; i + 1 < scenario.bounds.size(); i += 2) {
        auto base = coordination(scenario.net, scenario.bounds[i], scenario.bounds[i + 1]);
        auto zero =
            coordination_min_distance(scenario.net, scenario.bounds[i], scenario.bounds[i + 1], 0.0);
        CHECK(base.lambda == zero.lambda);
        CHECK(base.overlap_km == zero.overlap_km);
    }
}

TEST_CASE("verdicts are symmetric") {
    auto scenario = test::make_scenario(31, 40);
    for (std::size_t i = 0; i + 1 < scenario.bounds.size(); i += 2) {
        auto ab = coordination_min_distance(scenario.net, scenario.bounds[i],
                                            scenario.bounds[i + 1], scenario.l_min_km);
        auto ba = coordination_min_distance(scenario.net, scenario.bounds[i + 1],
                                            scenario.bounds[i], scenario.l_min_km);
        CHECK(ab.lambda == ba.lambda);
        CHECK(ab.overlap_km == doctest::Approx(ba.overlap_km).epsilon(1e-12));
    }
}

TEST_CASE("hash-join evaluation equals the naive double loop on random pairs") {
    auto scenario = test::make_scenario(5, 60);
    std::mt19937_64 rng(12345);
    int checked = 0;
    while (checked < 100) {
        const auto i = rng() % scenario.bounds.size();
        const auto j = rng() % scenario.bounds.size();
        if (i == j) {
            continue;
        }
        ++checked;
        for (double l_min : {0.0, scenario.l_min_km}) {
            auto fast =
                coordination_min_distance(scenario.net, scenario.bounds[i], scenario.bounds[j], l_min);
            auto naive = coordination_naive(scenario.net, scenario.bounds[i], scenario.bounds[j], l_min);
            CHECK(fast.lambda == naive.lambda);
            CHECK(fast.overlap_km == doctest::Approx(naive.overlap_km).epsilon(1e-12));
            if (fast.lambda) {
                CHECK(fast.overlap_km > 0.0);
                CHECK(fast.overlap_km >= l_min);
            }
        }
    }
}

TEST_CASE("raising l_min can only turn positives into negatives") {
    auto scenario = test::make_scenario(41, 50);
    for (std::size_t i = 0; i + 1 < scenario.bounds.size(); i += 2) {
        bool prev = true;
        for (double l_min : {0.0, 10.0, 30.0, 80.0}) {
            const bool lambda = coordination_min_distance(scenario.net, scenario.bounds[i],
                                                          scenario.bounds[i + 1], l_min)
                                    .lambda;
            if (!prev) {
                CHECK_FALSE(lambda);
            }
            prev = lambda;
        }
    }
}

TEST_CASE("widening the time window never destroys a match") {
    auto scenario = test::make_scenario(43, 40);
    for (std::size_t i = 0; i + 1 < scenario.assignments.size(); i += 2) {
        const auto base = coordination_min_distance(scenario.net, scenario.bounds[i],
                                                    scenario.bounds[i + 1], scenario.l_min_km);
        auto widened = scenario.assignments[i];
        widened.t_start -= 0.75;
        widened.t_deadline += 0.75;
        auto wb = compute_bounds(scenario.net, widened, scenario.v_max_kmh);
        const auto after = coordination_min_distance(scenario.net, wb, scenario.bounds[i + 1],
                                                     scenario.l_min_km);
        if (base.lambda) {
            CHECK(after.lambda);
        }
    }
}

TEST_CASE("overlap length never exceeds either route length") {
    auto scenario = test::make_scenario(47, 40, /*grid=*/false);
    auto route_km = [&](const BoundedRoute& b) {
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < b.size(); ++i) {
            total += scenario.net.node_distance(b.route[i], b.route[i + 1]);
        }
        return total;
    };
    for (std::size_t i = 0; i + 1 < scenario.bounds.size(); i += 2) {
        auto v = coordination(scenario.net, scenario.bounds[i], scenario.bounds[i + 1]);
        CHECK(v.overlap_km <=
              std::min(route_km(scenario.bounds[i]), route_km(scenario.bounds[i + 1])) + 1e-9);
    }
}

TEST_CASE("ground truth: trivial cases") {
    auto net = test::path_network();
    std::vector<BoundedRoute> two = {compute_bounds(net, test::path_assignment(0), 80.0),
                                     compute_bounds(net, test::path_assignment(1), 80.0)};
    auto truth = ground_truth(net, two, 0.0);
    REQUIRE(truth.size() == 1);
    CHECK(truth.pairs[0] == IndexPair{0, 1});

    RoadNetwork disjoint(CoordinateMode::PlanarKm, {{0, 0}, {10, 0}, {0, 5}, {10, 5}},
                         {{0, 1}, {2, 3}});
    std::vector<BoundedRoute> routes = {
        compute_bounds(disjoint, {0, {0, 1}, 0.0, 1.0}, 80.0),
        compute_bounds(disjoint, {1, {2, 3}, 0.0, 1.0}, 80.0),
    };
    CHECK(ground_truth(disjoint, routes, 0.0).empty());
}

TEST_CASE("parallel ground truth equals the serial naive reference") {
    for (auto seed : {61u, 62u}) {
        auto scenario = test::make_scenario(seed, 60, seed % 2 == 0);
        auto fast = ground_truth_verdicts(scenario.net, scenario.bounds, scenario.l_min_km);
        auto slow = ground_truth_verdicts_serial(scenario.net, scenario.bounds, scenario.l_min_km);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t p = 0; p < fast.size(); ++p) {
            CHECK(fast[p].i == slow[p].i);
            CHECK(fast[p].j == slow[p].j);
            CHECK(fast[p].overlap_km == doctest::Approx(slow[p].overlap_km).epsilon(1e-12));
        }
    }
}

TEST_CASE("infeasible assignments join no ground-truth pairs") {
    auto net = test::path_network();
    std::vector<BoundedRoute> routes = {
        compute_bounds(net, test::path_assignment(0, 0.0, 2.0), 80.0),
        compute_bounds(net, test::path_assignment(1, 0.0, 1.0), 80.0),  // infeasible
        compute_bounds(net, test::path_assignment(2, 0.0, 2.0), 80.0),
    };
    CHECK_FALSE(is_feasible(routes[1]));
    auto truth = ground_truth(net, routes, 0.0);
    REQUIRE(truth.size() == 1);
    CHECK(truth.pairs[0] == IndexPair{0, 2});
}
