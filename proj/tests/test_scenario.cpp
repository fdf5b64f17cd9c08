#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "platoon/scenario.hpp"
#include "test_support.hpp"

using namespace platoon;

namespace {

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "platoon_scenario_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

double route_km(const RoadNetwork& net, const std::vector<NodeId>& route) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < route.size(); ++i) {
        total += net.node_distance(route[i], route[i + 1]);
    }
    return total;
}

}  // namespace

TEST_CASE("2x2 grid has 4 nodes and 8 directed edges of equal length") {
    auto net = generate_network(GridSpec{2, 2, 10.0, 0.0}, 1);
    CHECK(net.node_count() == 4);
    CHECK(net.edge_count() == 8);
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
        CHECK(net.edge_length(e) == doctest::Approx(10.0));
    }
}

TEST_CASE("1x2 grid is the smallest usable network") {
    auto net = generate_network(GridSpec{1, 2, 10.0, 0.0}, 1);
    CHECK(net.node_count() == 2);
    CHECK(net.edge_count() == 2);
}

TEST_CASE("network generation is deterministic in the seed") {
    auto a = generate_network(GridSpec{5, 5, 20.0, 0.5}, 42);
    auto b = generate_network(GridSpec{5, 5, 20.0, 0.5}, 42);
    CHECK(a.to_json() == b.to_json());

    auto r1 = generate_network(RandomGeometricSpec{80, 45.0, 200.0}, 7);
    auto r2 = generate_network(RandomGeometricSpec{80, 45.0, 200.0}, 7);
    CHECK(r1.to_json() == r2.to_json());
    CHECK(r1.node_count() == 80);
}

TEST_CASE("unreachable radius fails after bounded retries") {
    CHECK_THROWS_AS(generate_network(RandomGeometricSpec{50, 1.0, 1000.0}, 3),
                    std::runtime_error);
}

TEST_CASE("generated assignments respect the deadline rule") {
    ScenarioConfig cfg;
    cfg.seed = 9;
    cfg.assignment_count = 1000;
    cfg.network = GridSpec{10, 10, 30.0, 0.2};
    cfg.window_h = 0.5;
    cfg.start_fraction_at_zero = 0.5;
    cfg.horizon_h = 24.0;
    cfg.max_route_km = 400.0;

    auto net = generate_network(cfg.network, cfg.seed);
    auto assignments = generate_assignments(net, cfg);
    REQUIRE(assignments.size() == 1000);

    std::size_t zero_starts = 0;
    for (const auto& a : assignments) {
        validate_assignment(net, a);
        if (a.t_start == 0.0) {
            ++zero_starts;
        }
        auto b = compute_bounds(net, a, cfg.v_max_kmh);
        CHECK(is_feasible(b));
        for (std::size_t i = 0; i < b.size(); ++i) {
            CHECK(window_width(b, i) == doctest::Approx(0.5).epsilon(1e-9));
        }
    }
    CHECK(zero_starts == 500);
}

TEST_CASE("K = 0 yields an empty assignment list") {
    ScenarioConfig cfg;
    cfg.seed = 1;
    cfg.assignment_count = 0;
    cfg.network = GridSpec{3, 3, 10.0, 0.0};
    auto net = generate_network(cfg.network, cfg.seed);
    CHECK(generate_assignments(net, cfg).empty());
}

TEST_CASE("routes beyond the cap are truncated to whole-edge subsections") {
    ScenarioConfig cfg;
    cfg.seed = 13;
    cfg.assignment_count = 200;
    cfg.network = GridSpec{12, 12, 30.0, 0.0};  // up to ~660 km shortest paths
    cfg.max_route_km = 150.0;

    auto net = generate_network(cfg.network, cfg.seed);
    auto assignments = generate_assignments(net, cfg);
    std::size_t near_cap = 0;
    for (const auto& a : assignments) {
        const double km = route_km(net, a.route);
        CHECK(km <= cfg.max_route_km + 1e-9);
        if (km > cfg.max_route_km - 30.0) {
            ++near_cap;
        }
    }
    // Sampling endpoints uniformly on a 330x330 km grid, most demands exceed
    // 150 km, so truncated routes close to the cap must dominate.
    CHECK(near_cap > assignments.size() / 2);
}

TEST_CASE("assignment generation is deterministic in the seed") {
    ScenarioConfig cfg;
    cfg.seed = 21;
    cfg.assignment_count = 50;
    cfg.network = GridSpec{6, 6, 25.0, 0.3};
    auto net = generate_network(cfg.network, cfg.seed);
    auto a = generate_assignments(net, cfg);
    auto b = generate_assignments(net, cfg);
    CHECK(assignments_to_json({cfg.v_max_kmh, a}) == assignments_to_json({cfg.v_max_kmh, b}));
}

TEST_CASE("weighted node sampling skews start locations") {
    // All weight on nodes 0 and 1 confines every endpoint to those nodes.
    auto base = generate_network(GridSpec{2, 2, 10.0, 0.0}, 1);
    std::vector<double> weights(base.node_count(), 0.0);
    weights[0] = 1.0;
    weights[1] = 1.0;
    std::vector<Vec2> nodes;
    std::vector<DirectedEdge> edges;
    for (NodeId n = 0; n < base.node_count(); ++n) {
        nodes.push_back(base.position(n));
    }
    for (EdgeId e = 0; e < base.edge_count(); ++e) {
        edges.push_back(base.edge(e));
    }
    RoadNetwork weighted(CoordinateMode::PlanarKm, nodes, edges, weights);

    ScenarioConfig cfg;
    cfg.seed = 5;
    cfg.assignment_count = 30;
    cfg.network = GridSpec{2, 2, 10.0, 0.0};
    for (const auto& a : generate_assignments(weighted, cfg)) {
        CHECK(a.start_node() <= 1);
        CHECK(a.dest_node() <= 1);
    }
}

TEST_CASE("assignments load from files and bind to the network") {
    const auto dir = temp_dir();
    auto net = test::path_network();

    write_text(dir / "ok.json", R"({
      "v_max_kmh": 80.0,
      "assignments": [
        {"id": 0, "route": [0, 1, 2], "t_start": 0.0, "t_deadline": 2.0},
        {"id": 1, "route": [2, 1], "t_start": 0.5, "t_deadline": 2.0}
      ]
    })");
    auto file = load_assignments(net, (dir / "ok.json").string());
    CHECK(file.v_max_kmh == 80.0);
    REQUIRE(file.assignments.size() == 2);
    CHECK(file.assignments[1].route == std::vector<NodeId>{2, 1});

    write_text(dir / "bad_node.json", R"({
      "v_max_kmh": 80.0,
      "assignments": [{"id": 0, "route": [0, 99], "t_start": 0.0, "t_deadline": 2.0}]
    })");
    CHECK_THROWS_WITH_AS(load_assignments(net, (dir / "bad_node.json").string()),
                         doctest::Contains("bad_node.json"), std::runtime_error);

    write_text(dir / "not_a_path.json", R"({
      "v_max_kmh": 80.0,
      "assignments": [{"id": 0, "route": [0, 2], "t_start": 0.0, "t_deadline": 2.0}]
    })");
    CHECK_THROWS_AS(load_assignments(net, (dir / "not_a_path.json").string()),
                    std::runtime_error);
}

TEST_CASE("generate, save and reload gives identical assignments") {
    ScenarioConfig cfg;
    cfg.seed = 33;
    cfg.assignment_count = 25;
    cfg.network = GridSpec{5, 5, 20.0, 0.2};
    auto net = generate_network(cfg.network, cfg.seed);
    auto assignments = generate_assignments(net, cfg);

    const auto dir = temp_dir();
    const auto path = dir / "roundtrip.json";
    save_assignments({cfg.v_max_kmh, assignments}, path.string());
    auto restored = load_assignments(net, path.string());
    CHECK(assignments_to_json(restored) == assignments_to_json({cfg.v_max_kmh, assignments}));
}

TEST_CASE("scenario config json parses all generator kinds") {
    auto grid = parse_scenario_config(nlohmann::json{{"seed", 3},
                                                     {"K", 10},
                                                     {"network",
                                                      {{"type", "grid"},
                                                       {"rows", 4},
                                                       {"cols", 5},
                                                       {"spacing_km", 12.5}}}},
                                      "t");
    CHECK(std::get<GridSpec>(grid.network).cols == 5);
    CHECK(grid.v_max_kmh == 80.0);  // defaults

    auto rgg = parse_scenario_config(
        nlohmann::json{{"seed", 3},
                       {"K", 10},
                       {"l_min_km", 5.0},
                       {"network",
                        {{"type", "random_geometric"}, {"nodes", 30}, {"radius_km", 50.0},
                         {"extent_km", 150.0}}}},
        "t");
    CHECK(std::get<RandomGeometricSpec>(rgg.network).nodes == 30);
    CHECK(rgg.l_min_km == 5.0);

    CHECK_THROWS_AS(
        parse_scenario_config(
            nlohmann::json{{"seed", 3}, {"K", 10}, {"network", {{"type", "moebius"}}}}, "t"),
        std::runtime_error);
}
