#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "graphhj/assemble.hpp"
#include "graphhj/grid.hpp"
#include "test_util.hpp"

using namespace graphhj;
using graphhj::testing::random_network;
using graphhj::testing::single_edge;
using graphhj::testing::tripod;

TEST_CASE("build_grid chooses interval counts from the target spacing", "[grid]") {
    SECTION("single edge, h* = 0.25") {
        const auto grid = build_grid(validate_network(single_edge()), 0.25);
        REQUIRE(grid->intervals(0) == 4);
        REQUIRE(grid->interior_count() == 3);
        REQUIRE(grid->unknown_count() == 5);
    }
    SECTION("tripod, h* = 0.5") {
        const auto grid = build_grid(validate_network(tripod()), 0.5);
        for (int j = 0; j < 3; ++j) REQUIRE(grid->intervals(j) == 2);
        REQUIRE(grid->unknown_count() == 7);
    }
    SECTION("coarse request clamps to two intervals") {
        const auto grid = build_grid(validate_network(single_edge()), 0.9);
        REQUIRE(grid->intervals(0) == 2);
        const auto coarser = build_grid(validate_network(single_edge()), 5.0);
        REQUIRE(coarser->intervals(0) == 2);
    }
    SECTION("nonpositive spacing is rejected") {
        REQUIRE_THROWS_AS(build_grid(validate_network(single_edge()), 0.0), Error);
    }
    SECTION("per-edge overrides win") {
        RawNetwork raw = single_edge();
        raw.edges[0].intervals = 7;
        const auto grid = build_grid(validate_network(raw), 0.25);
        REQUIRE(grid->intervals(0) == 7);
    }
}

TEST_CASE("sample interpolates linearly between nodes", "[grid]") {
    const auto grid = build_grid(validate_network(single_edge()), 0.5);  // n = 2
    GridFunction u(grid);
    u.at_node(0, 0) = 0.0;
    u.at_node(0, 1) = 0.5;
    u.at_node(0, 2) = 1.0;
    REQUIRE(sample(u, 0, 0.25) == Catch::Approx(0.25));
    REQUIRE(sample(u, 0, 0.5) == 0.5);   // exact at nodes
    REQUIRE(sample(u, 0, 0.0) == 0.0);   // tail vertex value
    REQUIRE(sample(u, 0, 1.0) == 1.0);   // head vertex value
    REQUIRE_THROWS_AS(sample(u, 0, -0.1), Error);
    REQUIRE_THROWS_AS(sample(u, 0, 1.1), Error);
}

TEST_CASE("sampling y(1-y) stored at five nodes", "[grid]") {
    const auto grid = build_grid(validate_network(single_edge()), 0.25);  // n = 4
    GridFunction u(grid);
    for (int k = 0; k <= 4; ++k) {
        const double y = grid->node_y(0, k);
        u.at_node(0, k) = y * (1.0 - y);
    }
    // Interpolant of the node values 0.1875 and 0.25 at their midpoint.
    REQUIRE(sample(u, 0, 0.375) == Catch::Approx(0.21875).margin(1e-15));
}

TEST_CASE("interior rows carry the classic three-point stencil", "[grid]") {
    const Network net = validate_network(single_edge());
    const auto grid = build_grid(net, 0.25);
    const auto coeffs = LinearCoefficients::uniform(net, 1.0, 0.0, 0.0, 0.0);
    const SparseSystem sys = assemble_linear(grid, coeffs);
    const double inv_h2 = 16.0;
    for (int k = 1; k < 4; ++k) {
        const int row = grid->node_unknown(0, k);
        REQUIRE(sys.kind[row] == RowKind::Interior);
        REQUIRE(sys.rows[row].size() == 3);
        REQUIRE(sys.rows[row][0].coeff == Catch::Approx(inv_h2));
        REQUIRE(sys.rows[row][1].coeff == Catch::Approx(-2.0 * inv_h2));
        REQUIRE(sys.rows[row][2].coeff == Catch::Approx(inv_h2));
        REQUIRE_FALSE(sys.upwinded[row]);
    }
}

TEST_CASE("Kirchhoff row of the tripod touches seven unknowns", "[grid]") {
    const Network net = validate_network(tripod());
    const auto grid = build_grid(net, 0.25);  // n_j = 4
    const auto coeffs = LinearCoefficients::uniform(net, 1.0, 0.0, 0.0, 0.0);
    const SparseSystem sys = assemble_linear(grid, coeffs);
    const int row = grid->vertex_unknown(net.vertex_index("center"));
    REQUIRE(sys.kind[row] == RowKind::Kirchhoff);
    REQUIRE(sys.rows[row].size() == 7);
    REQUIRE(sys.rhs[row] == 0.0);
}

TEST_CASE("large cell Peclet number switches the row to upwind", "[grid]") {
    const Network net = validate_network(single_edge());
    const auto grid = build_grid(net, 0.1);
    const auto coeffs = LinearCoefficients::uniform(net, 1.0, 100.0, 0.0, 0.0);
    const SparseSystem sys = assemble_linear(grid, coeffs);  // Peclet = 5
    bool any_interior = false;
    for (int r = 0; r < sys.size(); ++r) {
        if (sys.kind[r] != RowKind::Interior) continue;
        any_interior = true;
        REQUIRE(sys.upwinded[r]);
    }
    REQUIRE(any_interior);
}

TEST_CASE("coefficient sign violations are rejected at assembly", "[grid]") {
    const Network net = validate_network(single_edge());
    const auto grid = build_grid(net, 0.25);
    auto coeffs = LinearCoefficients::uniform(net, 1.0, 0.0, 0.0, 0.0);
    coeffs.a[0] = EdgeField::constant(-1.0);
    REQUIRE_THROWS_AS(assemble_linear(grid, coeffs), Error);
    coeffs.a[0] = EdgeField::constant(1.0);
    coeffs.c[0] = EdgeField::constant(-0.5);
    REQUIRE_THROWS_AS(assemble_linear(grid, coeffs), Error);
}

TEST_CASE("interior rows annihilate constants and are exact on affines", "[grid]") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        const Network net = validate_network(random_network(rng, 6));
        const auto grid = build_grid(net, 0.21);
        LinearCoefficients coeffs;
        coeffs.a = graphhj::testing::random_affine_fields(rng, net, 0.5, 2.0);
        coeffs.b = graphhj::testing::random_affine_fields(rng, net, -40.0, 40.0);
        coeffs.c.assign(net.edge_count(), EdgeField::constant(0.0));
        coeffs.g.assign(net.edge_count(), EdgeField::constant(0.0));
        coeffs.gamma.assign(net.vertex_count(), 0.0);
        const SparseSystem sys = assemble_linear(grid, coeffs);

        for (int j = 0; j < net.edge_count(); ++j) {
            // u = alpha + sigma * y on this edge, zero elsewhere is not
            // continuous, so apply rows directly to the affine values.
            const double alpha = 0.7, sigma = -1.3;
            std::vector<double> u(grid->unknown_count(), 0.0);
            for (int k = 0; k <= grid->intervals(j); ++k)
                u[grid->node_unknown(j, k)] = alpha + sigma * grid->node_y(j, k);
            for (int k = 1; k < grid->intervals(j); ++k) {
                const int row = grid->node_unknown(j, k);
                const double want = coeffs.b[j](grid->node_y(j, k)) * sigma;
                REQUIRE(sys.apply_row(row, u) == Catch::Approx(want).margin(1e-8));
            }
            // Constants: row sum is zero when b and c vanish on the row.
            std::vector<double> ones(grid->unknown_count(), 1.0);
            for (int k = 1; k < grid->intervals(j); ++k) {
                const int row = grid->node_unknown(j, k);
                double row_sum = 0.0;
                for (const auto& e : sys.rows[row]) row_sum += e.coeff;
                REQUIRE(row_sum == Catch::Approx(0.0).margin(1e-6));
            }
        }
    }
}

TEST_CASE("inward one-sided derivative is exact on quadratics", "[grid]") {
    const Network net = validate_network(single_edge(2.0));
    const auto grid = build_grid(net, 0.25);
    GridFunction u(grid);
    for (int k = 0; k <= grid->intervals(0); ++k) {
        const double y = grid->node_y(0, k);
        u.at_node(0, k) = y * y;
    }
    const int tail = net.edge(0).tail;
    const int head = net.edge(0).head;
    REQUIRE(inward_derivative(u, tail, 0) == Catch::Approx(0.0).margin(1e-12));
    // Inward coordinate s = l - y gives u = (l - s)^2, derivative -2l at s=0.
    REQUIRE(inward_derivative(u, head, 0) == Catch::Approx(-4.0).margin(1e-12));
}

TEST_CASE("discrete Kirchhoff sum on the tripod", "[grid]") {
    const Network net = validate_network(tripod());
    const auto grid = build_grid(net, 0.25);
    const int center = net.vertex_index("center");
    GridFunction u(grid);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k <= grid->intervals(j); ++k) u.at_node(j, k) = grid->node_y(j, k);
    REQUIRE(s_beta(u, center) == Catch::Approx(3.0).margin(1e-12));
    REQUIRE_THROWS_AS(s_beta(u, net.vertex_index("leaf1")), Error);
}

TEST_CASE("interior row sign pattern survives upwinding", "[grid]") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const Network net = validate_network(random_network(rng, 5));
        const auto grid = build_grid(net, 0.3);  // coarse: forces some upwind rows
        LinearCoefficients coeffs;
        coeffs.a = graphhj::testing::random_affine_fields(rng, net, 0.5, 2.0);
        coeffs.b = graphhj::testing::random_affine_fields(rng, net, -60.0, 60.0);
        coeffs.c = graphhj::testing::random_affine_fields(rng, net, 0.0, 1.0);
        coeffs.g.assign(net.edge_count(), EdgeField::constant(0.0));
        coeffs.gamma.assign(net.vertex_count(), 0.0);
        const SparseSystem sys = assemble_linear(grid, coeffs);
        for (int r = 0; r < sys.size(); ++r) {
            if (sys.kind[r] != RowKind::Interior) continue;
            for (const auto& e : sys.rows[r]) {
                if (e.col == r)
                    REQUIRE(e.coeff < 0.0);  // diagonal
                else
                    REQUIRE(e.coeff >= 0.0);  // neighbors
            }
        }
    }
}
