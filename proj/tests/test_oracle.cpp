#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "graphhj/oracle.hpp"
#include "test_util.hpp"

using namespace graphhj;
using graphhj::testing::random_network;
using graphhj::testing::single_edge;
using graphhj::testing::tripod;

namespace {

GridFunction sampled(GridPtr grid, const std::vector<EdgeField>& fields) {
    GridFunction f(grid);
    const Network& net = grid->net();
    for (int j = 0; j < net.edge_count(); ++j)
        for (int k = 0; k <= grid->intervals(j); ++k)
            f.at_node(j, k) = fields[j](grid->node_y(j, k));
    return f;
}

GridFunction constant_density(GridPtr grid, double value) {
    return GridFunction(grid, value);
}

}  // namespace

TEST_CASE("edge weights integrate the density by trapezoids", "[oracle]") {
    SECTION("constant density is integrated exactly") {
        const auto grid = build_grid(validate_network(single_edge()), 0.25);
        const auto table = edge_weights(constant_density(grid, 1.0));
        REQUIRE(table.total[0] == Catch::Approx(1.0));
        const std::vector<double> want = {0.0, 0.25, 0.5, 0.75, 1.0};
        for (int k = 0; k <= 4; ++k)
            REQUIRE(table.cumulative[0][k] == Catch::Approx(want[k]));
    }
    SECTION("affine density f = 2y is exact too") {
        const auto grid = build_grid(validate_network(single_edge()), 0.001);
        GridFunction f(grid);
        for (int k = 0; k <= grid->intervals(0); ++k)
            f.at_node(0, k) = 2.0 * grid->node_y(0, k);
        // f touches 0 at y = 0; relax the positivity floor for this case.
        const auto table = edge_weights(f, 0.0);
        REQUIRE(table.total[0] == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(table.cumulative[0][500] == Catch::Approx(0.25).margin(1e-12));
    }
    SECTION("density scaling scales the weights") {
        const auto grid = build_grid(validate_network(single_edge(0.7)), 0.05);
        const auto ones = edge_weights(constant_density(grid, 1.0));
        const auto twos = edge_weights(constant_density(grid, 2.0));
        REQUIRE(ones.total[0] == Catch::Approx(0.7));
        REQUIRE(twos.total[0] == Catch::Approx(2.0 * 0.7));
    }
    SECTION("nonpositive density is rejected") {
        const auto grid = build_grid(validate_network(single_edge()), 0.25);
        REQUIRE_THROWS_AS(edge_weights(constant_density(grid, 0.0)), Error);
    }
}

TEST_CASE("distance on a single edge is min(y, 1-y)", "[oracle]") {
    const auto grid = build_grid(validate_network(single_edge()), 0.01);
    const auto field = weighted_boundary_distance(constant_density(grid, 1.0));
    for (int k = 0; k <= 100; ++k) {
        const double y = grid->node_y(0, k);
        REQUIRE(field.u.at_node(0, k) == Catch::Approx(std::min(y, 1.0 - y)).margin(1e-14));
    }
    REQUIRE(sample(field.u, 0, 0.5) == Catch::Approx(0.5));
}

TEST_CASE("tripod distance reaches 1 at the center", "[oracle]") {
    const Network net = validate_network(tripod());
    const auto grid = build_grid(net, 0.01);
    const auto field = weighted_boundary_distance(constant_density(grid, 1.0));
    REQUIRE(field.u.at_vertex(net.vertex_index("center")) == Catch::Approx(1.0));
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k <= grid->intervals(j); ++k)
            REQUIRE(field.u.at_node(j, k) ==
                    Catch::Approx(1.0 - grid->node_y(j, k)).margin(1e-14));
}

TEST_CASE("quadratic branch beats the long way round for f = 2y", "[oracle]") {
    const auto grid = build_grid(validate_network(single_edge()), 0.001);
    GridFunction f(grid);
    for (int k = 0; k <= grid->intervals(0); ++k)
        f.at_node(0, k) = 2.0 * grid->node_y(0, k);
    const auto field = weighted_boundary_distance(f, std::vector<double>{0.0, 0.0}, 0.0);
    // Left candidate integrates to y^2, right to 1 - y^2.
    REQUIRE(sample(field.u, 0, 0.5) == Catch::Approx(0.25).margin(1e-12));
    REQUIRE(sample(field.u, 0, 0.9) == Catch::Approx(1.0 - 0.81).margin(1e-6));
}

TEST_CASE("Dijkstra equals brute force on random networks", "[oracle]") {
    std::mt19937_64 rng(424242);
    int done = 0;
    while (done < 100) {
        const Network net = validate_network(random_network(rng, 6));
        if (net.edge_count() > 6) continue;
        const auto grid = build_grid(net, 0.05);
        const auto f = sampled(grid, graphhj::testing::random_affine_fields(rng, net, 0.5, 2.0));
        const auto fast = weighted_boundary_distance(f);
        const auto slow = brute_force_distance(f);
        REQUIRE(sup_distance(fast.u, slow.u) <= 1e-12);
        ++done;
    }
}

TEST_CASE("path graph distance is the smaller cumulative length", "[oracle]") {
    const Network net = validate_network(graphhj::testing::path_network(2, 1.0));
    const auto grid = build_grid(net, 0.1);
    const auto f = constant_density(grid, 1.0);
    const auto field = brute_force_distance(f);
    REQUIRE(field.u.at_vertex(net.vertex_index("v1")) == Catch::Approx(1.0));
    const auto fast = weighted_boundary_distance(f);
    REQUIRE(sup_distance(fast.u, field.u) <= 1e-14);
}

TEST_CASE("boundary consistency and the weighted Lipschitz bound", "[oracle]") {
    std::mt19937_64 rng(9001);
    for (int trial = 0; trial < 40; ++trial) {
        const Network net = validate_network(random_network(rng, 6));
        const auto grid = build_grid(net, 0.05);
        const auto f = sampled(grid, graphhj::testing::random_affine_fields(rng, net, 0.5, 2.0));
        const auto field = weighted_boundary_distance(f);
        const auto table = edge_weights(f);
        for (int i = 0; i < net.vertex_count(); ++i)
            if (net.is_boundary(i)) REQUIRE(field.u.at_vertex(i) == net.vertex(i).g);
        for (int j = 0; j < net.edge_count(); ++j) {
            for (int k = 0; k < grid->intervals(j); ++k) {
                const double du =
                    std::abs(field.u.at_node(j, k + 1) - field.u.at_node(j, k));
                const double between =
                    table.cumulative[j][k + 1] - table.cumulative[j][k];
                REQUIRE(du <= between + 1e-12);
            }
        }
    }
}

TEST_CASE("distance scales exactly with the density", "[oracle]") {
    std::mt19937_64 rng(3333);
    for (int trial = 0; trial < 25; ++trial) {
        const Network net = validate_network(random_network(rng, 6));
        const auto grid = build_grid(net, 0.05);
        const auto f = sampled(grid, graphhj::testing::random_affine_fields(rng, net, 0.5, 2.0));
        GridFunction cf(grid);
        const double c = 3.75;
        for (std::size_t i = 0; i < f.values().size(); ++i) cf.values()[i] = c * f.values()[i];
        const auto base = weighted_boundary_distance(f);
        const auto scaled = weighted_boundary_distance(cf);
        for (std::size_t i = 0; i < base.u.values().size(); ++i) {
            const double want = c * base.u.values()[i];
            REQUIRE(scaled.u.values()[i] ==
                    Catch::Approx(want).margin(1e-12 * std::max(1.0, std::abs(want))));
        }
    }
}

TEST_CASE("brute force refuses oversized networks", "[oracle]") {
    const Network net = validate_network(graphhj::testing::path_network(13));
    const auto grid = build_grid(net, 0.5);
    REQUIRE_THROWS_AS(brute_force_distance(constant_density(grid, 1.0)), Error);
}

TEST_CASE("eikonal residual vanishes away from kinks", "[oracle]") {
    SECTION("unit density, one kink at the midpoint") {
        const auto grid = build_grid(validate_network(single_edge()), 0.001);
        const auto f = constant_density(grid, 1.0);
        const auto field = weighted_boundary_distance(f);
        const auto stats = eikonal_residual(field, f);
        REQUIRE(stats.kink_count == 1);
        REQUIRE(stats.max_residual <= 1e-9);
    }
    SECTION("tripod: kinks sit at the center vertex, which is not a node") {
        const Network net = validate_network(tripod());
        const auto grid = build_grid(net, 0.001);
        const auto f = constant_density(grid, 1.0);
        const auto field = weighted_boundary_distance(f);
        const auto stats = eikonal_residual(field, f);
        REQUIRE(stats.kink_count == 0);
        REQUIRE(stats.max_residual <= 1e-9);
    }
    SECTION("f = 2y stays below 1e-3 at n = 1000") {
        const auto grid = build_grid(validate_network(single_edge()), 0.001);
        GridFunction f(grid);
        for (int k = 0; k <= grid->intervals(0); ++k)
            f.at_node(0, k) = 2.0 * grid->node_y(0, k);
        const auto field = weighted_boundary_distance(f, std::vector<double>{0.0, 0.0}, 0.0);
        const auto stats = eikonal_residual(field, f, 0.0);
        REQUIRE(stats.max_residual <= 1e-3);
        REQUIRE(stats.kink_count >= 1);
    }
}
