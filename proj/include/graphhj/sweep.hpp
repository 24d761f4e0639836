#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "graphhj/viscous.hpp"

namespace graphhj {

/// Geometric viscosity schedule eps_k = eps0 * ratio^k, k = 0..count-1.
struct EpsSchedule {
    double eps0 = 0.2;
    double ratio = 0.5;
    int count = 5;

    std::vector<double> values() const {
        require(eps0 > 0.0 && ratio > 0.0 && ratio < 1.0 && count >= 1, Errc::BadArgument,
                "schedule needs eps0 > 0, ratio in (0,1), count >= 1");
        std::vector<double> out(count);
        double e = eps0;
        for (int k = 0; k < count; ++k, e *= ratio) out[k] = e;
        return out;
    }
};

/// Largest difference quotient over adjacent grid nodes, including the
/// vertex / first-interior pairs on every edge.
inline double lipschitz_estimate(const GridFunction& u) {
    const NetworkGrid& grid = u.grid();
    double worst = 0.0;
    for (int j = 0; j < grid.net().edge_count(); ++j) {
        const double h = grid.spacing(j);
        for (int k = 0; k < grid.intervals(j); ++k)
            worst = std::max(worst, std::abs(u.at_node(j, k + 1) - u.at_node(j, k)) / h);
    }
    return worst;
}

struct RateFit {
    double order = std::numeric_limits<double>::quiet_NaN();
    double residual = 0.0;  // RMS of the log-log fit residuals
    bool exact = false;     // some error was zero or negative: nothing to fit
    int points = 0;
};

/// Least-squares slope of log(error) against log(eps).
inline RateFit fit_rate(const std::vector<double>& errors, const std::vector<double>& eps) {
    require(errors.size() == eps.size(), Errc::BadArgument, "mismatched sequences");
    require(errors.size() >= 3, Errc::BadArgument, "rate fit needs at least 3 pairs");
    RateFit fit;
    fit.points = static_cast<int>(errors.size());
    for (double e : errors) {
        if (!(e > 0.0)) {
            fit.exact = true;
            return fit;
        }
    }
    const int n = fit.points;
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(n), ly(n);
    for (int i = 0; i < n; ++i) {
        lx[i] = std::log(eps[i]);
        ly[i] = std::log(errors[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    require(sxx > 0.0, Errc::BadArgument, "eps values must differ");
    fit.order = sxy / sxx;
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double pred = my + fit.order * (lx[i] - mx);
        rss += (ly[i] - pred) * (ly[i] - pred);
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

struct SweepEntry {
    double eps = 0.0;
    double sup_u = 0.0;
    double lipschitz = 0.0;
    double kirchhoff_residual = 0.0;
    double cauchy = std::numeric_limits<double>::quiet_NaN();         // vs previous eps
    double err_vs_oracle = std::numeric_limits<double>::quiet_NaN();  // eikonal only
    int newton_iterations = 0;
    bool trusted = true;
};

struct SweepReport {
    std::vector<SweepEntry> entries;
    std::vector<GridFunction> solutions;        // one per completed entry
    std::optional<GridFunction> oracle;         // first-order limit (eikonal)
    RateFit rate;                               // from err_vs_oracle, else cauchy
    double trust_floor = 0.0;                   // 5 * max grid spacing
    bool completed = true;
    std::string failure;
};

struct HjProblem {
    Hamiltonian hamiltonian;
    std::vector<double> boundary_g;
};

namespace detail {

inline void finish_rate(SweepReport& report) {
    std::vector<double> errs, eps;
    for (const auto& e : report.entries) {
        if (std::isfinite(e.err_vs_oracle)) {
            errs.push_back(e.err_vs_oracle);
            eps.push_back(e.eps);
        }
    }
    if (errs.size() < 3) {
        errs.clear();
        eps.clear();
        for (const auto& e : report.entries) {
            if (std::isfinite(e.cauchy)) {
                errs.push_back(e.cauchy);
                eps.push_back(e.eps);
            }
        }
    }
    if (errs.size() >= 3) report.rate = fit_rate(errs, eps);
}

inline SweepEntry make_entry(const GridFunction& u, double eps, double kirchhoff, int iters,
                             const SweepReport& report) {
    SweepEntry e;
    e.eps = eps;
    e.sup_u = u.sup_norm();
    e.lipschitz = lipschitz_estimate(u);
    e.kirchhoff_residual = kirchhoff;
    e.newton_iterations = iters;
    e.trusted = eps >= report.trust_floor;
    if (!report.solutions.empty()) e.cauchy = sup_distance(u, report.solutions.back());
    if (report.oracle) e.err_vs_oracle = sup_distance(u, *report.oracle);
    return e;
}

}  // namespace detail

/// Vanishing-viscosity sweep of the eikonal problem: the exponential
/// transform solves each eps independently and every solution is
/// compared against the weighted-distance limit (density sqrt(f), the
/// zero-viscosity solution of |u'|^2 = f). Entries with eps below five
/// grid spacings are kept but flagged untrusted: the grid no longer
/// resolves their junction layers.
inline SweepReport run_sweep(GridPtr grid, const EikonalData& data, const EpsSchedule& schedule) {
    SweepReport report;
    report.trust_floor = 5.0 * grid->max_spacing();

    GridFunction density(grid);
    const Network& net = grid->net();
    for (int j = 0; j < net.edge_count(); ++j)
        for (int k = 0; k <= grid->intervals(j); ++k)
            density.at_node(j, k) = std::sqrt(std::max(0.0, data.f[j](grid->node_y(j, k))));
    bool oracle_ok = true;
    for (double v : density.values()) oracle_ok = oracle_ok && v > 0.0;
    if (oracle_ok)
        report.oracle = weighted_boundary_distance(density, data.boundary_g, 0.0).u;

    for (double eps : schedule.values()) {
        try {
            const EikonalSolveResult sol = solve_eikonal_log(grid, data, eps);
            report.entries.push_back(
                detail::make_entry(sol.u, eps, sol.kirchhoff_residual, 0, report));
            report.solutions.push_back(sol.u);
        } catch (const Error& err) {
            report.completed = false;
            report.failure = "eps = " + std::to_string(eps) + ": " + err.what();
            break;
        }
    }
    detail::finish_rate(report);
    return report;
}

/// General-Hamiltonian sweep: damped Newton, warm-started along the
/// schedule. Non-convergence at some eps truncates the report.
inline SweepReport run_sweep(GridPtr grid, const HjProblem& problem, const EpsSchedule& schedule,
                             const NewtonOptions& opt = {},
                             std::optional<GridFunction> init = {}) {
    SweepReport report;
    report.trust_floor = 5.0 * grid->max_spacing();
    GridFunction iterate = init ? std::move(*init) : GridFunction(grid, 0.0);
    for (double eps : schedule.values()) {
        try {
            auto [u, newton] = solve_semilinear_newton(grid, problem.hamiltonian,
                                                       problem.boundary_g, eps, iterate, opt);
            if (!newton.converged) {
                report.completed = false;
                report.failure = "eps = " + std::to_string(eps) + ": Newton stalled at residual " +
                                 std::to_string(newton.residual_sup);
                break;
            }
            report.entries.push_back(detail::make_entry(u, eps, newton.kirchhoff_residual,
                                                        newton.iterations, report));
            report.solutions.push_back(u);
            iterate = u;  // warm start for the next eps
        } catch (const Error& err) {
            report.completed = false;
            report.failure = "eps = " + std::to_string(eps) + ": " + err.what();
            break;
        }
    }
    detail::finish_rate(report);
    return report;
}

}  // namespace graphhj
