// Scratch: warm-started Newton iteration count on the tripod (frozen into
// the test afterwards), plus the closed-form check.
#include <cstdio>

#include "graphhj/sweep.hpp"
#include "graphhj/viscous.hpp"
#include "test_util.hpp"

using namespace graphhj;

int main() {
    const Network net = validate_network(graphhj::testing::tripod());
    const auto grid = build_grid(net, std::vector<int>{2000, 2000, 2000});
    const EikonalData data = EikonalData::uniform(net, 1.0);
    const Hamiltonian h = make_gradient_squared(data.f);

    auto [u01, rep01] = solve_semilinear_newton(grid, h, data.boundary_g, 0.1,
                                                eikonal_newton_init(grid, data), {});
    std::printf("eps=0.10 cold: iters=%d damp=%d resid=%.2e conv=%d\n", rep01.iterations,
                rep01.damping_steps, rep01.residual_sup, rep01.converged);
    auto [u005, rep005] = solve_semilinear_newton(grid, h, data.boundary_g, 0.05, u01, {});
    std::printf("eps=0.05 warm: iters=%d damp=%d resid=%.2e conv=%d\n", rep005.iterations,
                rep005.damping_steps, rep005.residual_sup, rep005.converged);

    const auto log_path = solve_eikonal_log(grid, data, 0.05);
    std::printf("newton vs log on tripod: gap=%.2e, kirch=%.2e\n",
                sup_distance(u005, log_path.u), log_path.kirchhoff_residual);

    // Closed form at n=4000 on the unit edge.
    const Network edge = validate_network(graphhj::testing::single_edge());
    const auto egrid = build_grid(edge, std::vector<int>{4000});
    const EikonalData edata = EikonalData::uniform(edge, 1.0);
    const double eps = 0.05;
    const auto sol = solve_eikonal_log(egrid, edata, eps);
    double worst = 0.0;
    for (int k = 0; k <= 4000; ++k) {
        const double y = egrid->node_y(0, k);
        const double exact =
            -eps * std::log(std::cosh((y - 0.5) / eps) / std::cosh(0.5 / eps));
        worst = std::max(worst, std::abs(sol.u.at_node(0, k) - exact));
    }
    std::printf("closed form: sup err=%.3e, u(0.5)=%.9f\n", worst, sample(sol.u, 0, 0.5));

    // Newton residual of the log solution (cross-discretization truncation).
    const double res = semilinear_residual_sup(egrid, make_gradient_squared(edata.f),
                                               edata.boundary_g, eps, sol.u);
    std::printf("log solution in newton residual: %.3e\n", res);
    return 0;
}
