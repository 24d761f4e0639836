#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "graphhj/assemble.hpp"
#include "graphhj/linear_solver.hpp"
#include "graphhj/oracle.hpp"

namespace graphhj {

/// One edge's Hamiltonian H(y, r, p); partial derivatives are optional
/// and replaced by forward differences when absent.
struct EdgeHamiltonian {
    std::function<double(double, double, double)> value;
    std::function<double(double, double, double)> dr;
    std::function<double(double, double, double)> dp;
};

/// Structural assumptions a Hamiltonian definition claims for itself;
/// the validator probes them by sampling.
struct HamiltonianClaims {
    bool continuous = true;
    bool monotone_in_state = false;           // nondecreasing in r
    bool monotone_in_slope_at_junctions = false;  // nondecreasing in p on (0, inf)
    bool coercive = false;                    // H -> +inf as |p| -> inf
    bool junction_continuity = false;         // same value across incident edges
    bool junction_symmetry = false;           // even in p at junctions
    bool strictly_monotone_in_state = false;
    bool lipschitz_in_state_slope = false;    // K(|r-s| + |p-q|) bound
};

struct Hamiltonian {
    std::vector<EdgeHamiltonian> edges;
    HamiltonianClaims claims;
};

/// Data of the viscous eikonal problem: nonnegative per-edge density f
/// and Dirichlet values at boundary vertices.
struct EikonalData {
    std::vector<EdgeField> f;
    std::vector<double> boundary_g;  // indexed by vertex

    static EikonalData uniform(const Network& net, double f_, double g_ = 0.0) {
        EikonalData d;
        d.f.assign(net.edge_count(), EdgeField::constant(f_));
        d.boundary_g.assign(net.vertex_count(), g_);
        return d;
    }
};

// ---------------------------------------------------------------------------
// Built-in Hamiltonian catalog (names are the CLI-visible identifiers).
// ---------------------------------------------------------------------------

/// "eikonal2": H = |p|^2 - f(y).
inline Hamiltonian make_gradient_squared(const std::vector<EdgeField>& f) {
    Hamiltonian h;
    for (const auto& field : f) {
        EdgeHamiltonian eh;
        eh.value = [field](double y, double, double p) { return p * p - field(y); };
        eh.dr = [](double, double, double) { return 0.0; };
        eh.dp = [](double, double, double p) { return 2.0 * p; };
        h.edges.push_back(std::move(eh));
    }
    h.claims = {true, true, true, true, false, true, false, false};
    return h;
}

/// "power": H = |p|^alpha + b(y) r + f(y), alpha > 0, b >= 0.
inline Hamiltonian make_power(double alpha, const std::vector<EdgeField>& b,
                              const std::vector<EdgeField>& f) {
    require(alpha > 0.0, Errc::BadArgument, "power hamiltonian needs alpha > 0");
    Hamiltonian h;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const EdgeField bf = b[j];
        const EdgeField ff = f[j];
        EdgeHamiltonian eh;
        eh.value = [alpha, bf, ff](double y, double r, double p) {
            return std::pow(std::abs(p), alpha) + bf(y) * r + ff(y);
        };
        eh.dr = [bf](double y, double, double) { return bf(y); };
        if (alpha >= 2.0) {
            eh.dp = [alpha](double, double, double p) {
                return p == 0.0 ? 0.0
                                : alpha * std::pow(std::abs(p), alpha - 1.0) * (p > 0 ? 1 : -1);
            };
        }
        h.edges.push_back(std::move(eh));
    }
    h.claims = {true, true, true, true, false, true, false, false};
    return h;
}

/// "linear-decay": H = r + |p|^2 - f(y).
inline Hamiltonian make_linear_decay(const std::vector<EdgeField>& f) {
    Hamiltonian h;
    for (const auto& field : f) {
        EdgeHamiltonian eh;
        eh.value = [field](double y, double r, double p) { return r + p * p - field(y); };
        eh.dr = [](double, double, double) { return 1.0; };
        eh.dp = [](double, double, double p) { return 2.0 * p; };
        h.edges.push_back(std::move(eh));
    }
    h.claims = {true, true, true, true, false, true, true, false};
    return h;
}

// ---------------------------------------------------------------------------
// Viscous eikonal via the exponential transform
// ---------------------------------------------------------------------------

struct EikonalSolveResult {
    GridFunction u;        // the viscous solution
    GridFunction w;        // transformed variable, w = exp(-u/eps) - 1
    SolveReport linear;
    double kirchhoff_residual = 0.0;  // junction-row residual of the solve
    double min_w = 0.0;
    bool boundary_clamped = false;    // exp(-g/eps) underflowed and was floored
};

/// Solves -eps u'' + |u'|^2 - f = 0 with Kirchhoff junctions and
/// Dirichlet data by one linear solve: the substitution v = exp(-u/eps)
/// turns the problem into eps^2 v'' - f v = 0 with v = exp(-g/eps) on
/// the boundary. Working in v rather than w = v - 1 keeps the solution
/// positive and componentwise accurate deep inside junction layers; the
/// two systems differ by a constant shift only.
inline EikonalSolveResult solve_eikonal_log(GridPtr grid, const EikonalData& data, double eps) {
    require(eps > 0.0, Errc::BadArgument, "eps must be positive");
    const Network& net = grid->net();
    require(static_cast<int>(data.f.size()) == net.edge_count(), Errc::BadArgument,
            "one density field per edge required");
    require(static_cast<int>(data.boundary_g.size()) == net.vertex_count(), Errc::BadArgument,
            "boundary data must be indexed by vertex");

    LinearCoefficients coeffs;
    coeffs.a.assign(net.edge_count(), EdgeField::constant(eps * eps));
    coeffs.b.assign(net.edge_count(), EdgeField::constant(0.0));
    coeffs.c = data.f;
    coeffs.g.assign(net.edge_count(), EdgeField::constant(0.0));
    coeffs.gamma.assign(net.vertex_count(), 0.0);
    bool clamped = false;
    for (int i = 0; i < net.vertex_count(); ++i) {
        if (!net.is_boundary(i)) continue;
        double v = std::exp(-data.boundary_g[i] / eps);
        if (v < 1e-300) {
            v = 1e-300;
            clamped = true;
        }
        coeffs.gamma[i] = v;
    }

    // f >= 0 is the data invariant; assembly only enforces c >= 0, which
    // coincides with it here.
    const SparseSystem sys = assemble_linear(grid, coeffs);
    auto [v, report] = solve_linear(sys);

    double min_v = std::numeric_limits<double>::infinity();
    int argmin = 0;
    for (int i = 0; i < static_cast<int>(v.values().size()); ++i) {
        if (v.values()[i] < min_v) {
            min_v = v.values()[i];
            argmin = i;
        }
    }
    if (!(min_v > 0.0)) {
        fail(Errc::PositivityLost,
             "transformed solution reached " + std::to_string(min_v - 1.0) + " at " +
                 describe_unknown(*grid, argmin) + "; the grid is too coarse for eps = " +
                 std::to_string(eps));
    }

    EikonalSolveResult out{GridFunction(grid), GridFunction(grid), report, 0.0, min_v - 1.0,
                           clamped};
    for (std::size_t i = 0; i < v.values().size(); ++i) {
        out.u.values()[i] = -eps * std::log(v.values()[i]);
        out.w.values()[i] = v.values()[i] - 1.0;
    }
    out.kirchhoff_residual = sys.kirchhoff_residual(v.values());
    return out;
}

// ---------------------------------------------------------------------------
// General viscous problems by damped Newton
// ---------------------------------------------------------------------------

struct NewtonOptions {
    double tol_abs = 1e-10;
    double tol_rel = 1e-12;
    int max_iterations = 100;
    int max_halvings = 30;
    double fd_step = 1e-7;  // scaled by (1 + |value|) when differencing
};

struct NewtonReport {
    int iterations = 0;
    int damping_steps = 0;
    double residual_sup = 0.0;
    double kirchhoff_residual = 0.0;
    bool converged = false;
};

namespace detail {

struct NewtonWorkspace {
    GridPtr grid;
    const Hamiltonian* h;
    const std::vector<double>* boundary_g;
    double eps;

    /// Nonlinear residual; the second difference is accumulated in
    /// extended precision because its cancellation otherwise caps how
    /// far Newton can converge on fine grids.
    void residual(const GridFunction& u, std::vector<double>& out,
                  double* kirchhoff_sup = nullptr) const {
        const Network& net = grid->net();
        out.assign(grid->unknown_count(), 0.0);
        for (int j = 0; j < net.edge_count(); ++j) {
            const int n = grid->intervals(j);
            const double h_j = grid->spacing(j);
            const auto& hj = h->edges[j];
            for (int k = 1; k < n; ++k) {
                const long double um = u.at_node(j, k - 1);
                const long double uc = u.at_node(j, k);
                const long double up = u.at_node(j, k + 1);
                const long double d2 = (um - 2.0L * uc + up) / (1.0L * h_j * h_j);
                const double dc = static_cast<double>((up - um) / (2.0L * h_j));
                out[grid->node_unknown(j, k)] = static_cast<double>(
                    -static_cast<long double>(eps) * d2 +
                    static_cast<long double>(
                        hj.value(grid->node_y(j, k), static_cast<double>(uc), dc)));
            }
        }
        double ksup = 0.0;
        for (int i = 0; i < net.vertex_count(); ++i) {
            const int row = grid->vertex_unknown(i);
            if (net.is_boundary(i)) {
                out[row] = u.at_vertex(i) - (*boundary_g)[i];
                continue;
            }
            long double sum = 0.0L;
            for (int j : net.incident_edges(i)) {
                const double h_j = grid->spacing(j);
                const int n = grid->intervals(j);
                const bool from_tail = net.edge(j).tail == i;
                const long double u0 = u.at_node(j, from_tail ? 0 : n);
                const long double u1 = u.at_node(j, from_tail ? 1 : n - 1);
                const long double u2 = u.at_node(j, from_tail ? 2 : n - 2);
                sum += static_cast<long double>(net.beta(i, j)) * (-3.0L * u0 + 4.0L * u1 - u2) /
                       (2.0L * h_j);
            }
            out[row] = static_cast<double>(sum);
            ksup = std::max(ksup, std::abs(out[row]));
        }
        if (kirchhoff_sup) *kirchhoff_sup = ksup;
    }

    SparseSystem jacobian(const GridFunction& u, const std::vector<double>& f,
                          const NewtonOptions& opt) const {
        const Network& net = grid->net();
        SparseSystem sys;
        sys.grid = grid;
        sys.rows.resize(grid->unknown_count());
        sys.rhs.assign(grid->unknown_count(), 0.0);
        sys.kind.assign(grid->unknown_count(), RowKind::Interior);
        sys.upwinded.assign(grid->unknown_count(), false);

        for (int j = 0; j < net.edge_count(); ++j) {
            const int n = grid->intervals(j);
            const double h_j = grid->spacing(j);
            const auto& hj = h->edges[j];
            for (int k = 1; k < n; ++k) {
                const double y = grid->node_y(j, k);
                const double r = u.at_node(j, k);
                const double p = (u.at_node(j, k + 1) - u.at_node(j, k - 1)) / (2.0 * h_j);
                double hr, hp;
                if (hj.dr)
                    hr = hj.dr(y, r, p);
                else {
                    const double step = opt.fd_step * (1.0 + std::abs(r));
                    hr = (hj.value(y, r + step, p) - hj.value(y, r, p)) / step;
                }
                if (hj.dp)
                    hp = hj.dp(y, r, p);
                else {
                    const double step = opt.fd_step * (1.0 + std::abs(p));
                    hp = (hj.value(y, r, p + step) - hj.value(y, r, p)) / step;
                }
                const int row = grid->node_unknown(j, k);
                sys.rows[row] = {
                    {grid->node_unknown(j, k - 1), -eps / (h_j * h_j) - hp / (2.0 * h_j)},
                    {row, 2.0 * eps / (h_j * h_j) + hr},
                    {grid->node_unknown(j, k + 1), -eps / (h_j * h_j) + hp / (2.0 * h_j)}};
                sys.rhs[row] = -f[row];
            }
        }
        for (int i = 0; i < net.vertex_count(); ++i) {
            const int row = grid->vertex_unknown(i);
            sys.rhs[row] = -f[row];
            if (net.is_boundary(i)) {
                sys.kind[row] = RowKind::Dirichlet;
                sys.rows[row] = {{row, 1.0}};
                continue;
            }
            sys.kind[row] = RowKind::Kirchhoff;
            std::map<int, double> entries;
            for (int j : net.incident_edges(i)) {
                const double w = net.beta(i, j) / (2.0 * grid->spacing(j));
                const bool from_tail = net.edge(j).tail == i;
                const int n = grid->intervals(j);
                entries[grid->node_unknown(j, from_tail ? 0 : n)] += -3.0 * w;
                entries[grid->node_unknown(j, from_tail ? 1 : n - 1)] += 4.0 * w;
                entries[grid->node_unknown(j, from_tail ? 2 : n - 2)] += -1.0 * w;
            }
            for (const auto& [col, coeff] : entries) sys.rows[row].push_back({col, coeff});
        }
        return sys;
    }
};

inline double sup(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace detail

/// Damped Newton for -eps u'' + H(y, u, u') = 0 with Kirchhoff junction
/// rows and Dirichlet boundary rows. The gradient is discretized by the
/// central difference; Armijo backtracking on the residual sup-norm
/// halves the step up to max_halvings times. Non-convergence is reported
/// in the returned NewtonReport, not thrown; the best iterate found is
/// returned either way.
inline std::pair<GridFunction, NewtonReport> solve_semilinear_newton(
    GridPtr grid, const Hamiltonian& h, const std::vector<double>& boundary_g, double eps,
    GridFunction init, const NewtonOptions& opt = {}) {
    require(eps > 0.0, Errc::BadArgument, "eps must be positive");
    const Network& net = grid->net();
    require(static_cast<int>(h.edges.size()) == net.edge_count(), Errc::BadArgument,
            "one Hamiltonian per edge required");
    require(static_cast<int>(boundary_g.size()) == net.vertex_count(), Errc::BadArgument,
            "boundary data must be indexed by vertex");
    require(init.values().size() == static_cast<std::size_t>(grid->unknown_count()),
            Errc::BadArgument, "initial iterate lives on a different grid");

    const detail::NewtonWorkspace ws{grid, &h, &boundary_g, eps};
    GridFunction u = std::move(init);
    std::vector<double> f, f_trial;
    double kres = 0.0;
    ws.residual(u, f, &kres);
    double fnorm = detail::sup(f);
    const double target = opt.tol_abs + opt.tol_rel * fnorm;

    NewtonReport report;
    GridFunction best = u;
    double best_norm = fnorm;
    double best_kres = kres;
    int stalls = 0;

    while (fnorm > target && report.iterations < opt.max_iterations) {
        SparseSystem jac = ws.jacobian(u, f, opt);
        GridFunction delta(grid);
        try {
            delta = solve_linear(jac).first;
        } catch (const Error& err) {
            if (err.code() == Errc::SingularSystem)
                fail(Errc::JacobianSingular, err.what());
            throw;
        }

        double lambda = 1.0;
        double accepted_norm = -1.0;
        GridFunction trial(grid);
        for (int halving = 0; halving <= opt.max_halvings; ++halving) {
            for (std::size_t i = 0; i < trial.values().size(); ++i)
                trial.values()[i] = u.values()[i] + lambda * delta.values()[i];
            double trial_kres = 0.0;
            ws.residual(trial, f_trial, &trial_kres);
            const double trial_norm = detail::sup(f_trial);
            if (trial_norm <= (1.0 - 1e-4 * lambda) * fnorm) {
                u = trial;
                f = f_trial;
                fnorm = trial_norm;
                kres = trial_kres;
                accepted_norm = trial_norm;
                break;
            }
            if (halving == opt.max_halvings) {
                // No decrease found; keep the least-bad step so the
                // iteration can escape a flat spot, but count the stall.
                u = trial;
                f = f_trial;
                fnorm = trial_norm;
                kres = trial_kres;
            } else {
                ++report.damping_steps;
                lambda *= 0.5;
            }
        }
        ++report.iterations;
        if (fnorm < best_norm) {
            best = u;
            best_norm = fnorm;
            best_kres = kres;
        }
        if (accepted_norm < 0.0 && ++stalls >= 2) break;
        if (accepted_norm >= 0.0) stalls = 0;
    }

    report.residual_sup = best_norm;
    report.kirchhoff_residual = best_kres;
    report.converged = best_norm <= target;
    return {std::move(best), report};
}

/// Sup-norm of the Newton-path residual of an arbitrary grid function;
/// used to compare the two eikonal solution routes, which discretize the
/// same equation differently.
inline double semilinear_residual_sup(GridPtr grid, const Hamiltonian& h,
                                      const std::vector<double>& boundary_g, double eps,
                                      const GridFunction& u) {
    const detail::NewtonWorkspace ws{grid, &h, &boundary_g, eps};
    std::vector<double> f;
    ws.residual(u, f);
    return detail::sup(f);
}

/// Default Newton starting point for eikonal-type data: the first-order
/// limit (weighted boundary distance with density sqrt(f)) when f is
/// strictly positive, otherwise zero.
inline GridFunction eikonal_newton_init(GridPtr grid, const EikonalData& data,
                                        double alpha_min = 1e-8) {
    const Network& net = grid->net();
    GridFunction density(grid);
    double fmin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < net.edge_count(); ++j) {
        for (int k = 0; k <= grid->intervals(j); ++k) {
            const double f = data.f[j](grid->node_y(j, k));
            fmin = std::min(fmin, f);
            density.at_node(j, k) = std::sqrt(std::max(f, 0.0));
        }
    }
    if (fmin < alpha_min) return GridFunction(grid, 0.0);
    return weighted_boundary_distance(density, data.boundary_g, 0.0).u;
}

// ---------------------------------------------------------------------------
// Assumption validation by sampling
// ---------------------------------------------------------------------------

struct HamiltonianProbeConfig {
    int x_samples = 64;
    int r_samples = 33;
    int p_samples = 201;
    double r_range = 10.0;
    double p_range = 50.0;
    std::vector<std::pair<double, double>> coercivity_probes = {{0.0, 0.0}};
};

struct CoercivityProbe {
    double theta = 0.0;
    double eta = 0.0;
    bool found = false;
    double threshold = 0.0;  // smallest probed M with H > theta beyond it
};

struct JunctionProfile {
    int vertex = -1;
    double argmin = 0.0;
    double min_value = 0.0;
    bool min_at_zero = true;  // profile minimum sits at p = 0 (sampled)
};

struct HamiltonianValidationReport {
    long state_monotonicity_violations = 0;      // H must not decrease in r
    double state_monotonicity_worst = 0.0;
    long slope_monotonicity_violations = 0;      // in p on (0, P] at junctions
    double slope_monotonicity_worst = 0.0;
    long junction_continuity_violations = 0;     // across incident edges
    double junction_continuity_gap = 0.0;
    long junction_symmetry_violations = 0;       // p vs -p at junctions
    double junction_symmetry_gap = 0.0;
    std::vector<CoercivityProbe> coercivity;
    std::vector<JunctionProfile> junction_profiles;

    bool clean() const {
        if (state_monotonicity_violations || slope_monotonicity_violations ||
            junction_continuity_violations || junction_symmetry_violations)
            return false;
        for (const auto& p : junction_profiles)
            if (!p.min_at_zero) return false;
        return true;
    }
};

/// Samples the structural assumptions over probe grids and reports every
/// finding; nothing here throws. Coercivity can only be probed on a
/// bounded range, so a missing threshold reads "not found within range",
/// never "violated".
inline HamiltonianValidationReport validate_hamiltonian(
    const Hamiltonian& h, const Network& net, const HamiltonianProbeConfig& cfg = {}) {
    require(static_cast<int>(h.edges.size()) == net.edge_count(), Errc::BadArgument,
            "one Hamiltonian per edge required");
    HamiltonianValidationReport report;

    auto linspace = [](double lo, double hi, int count) {
        std::vector<double> out(count);
        for (int i = 0; i < count; ++i)
            out[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
        return out;
    };
    const auto r_grid = linspace(-cfg.r_range, cfg.r_range, cfg.r_samples);
    const auto p_grid = linspace(-cfg.p_range, cfg.p_range, cfg.p_samples);
    auto tol = [](double a, double b) { return 1e-10 * (1.0 + std::abs(a) + std::abs(b)); };

    // Monotonicity in the state variable, sampled along every edge.
    for (int j = 0; j < net.edge_count(); ++j) {
        const double l = net.edge(j).length;
        const auto x_grid = linspace(0.0, l, cfg.x_samples);
        for (double x : x_grid) {
            for (double p : p_grid) {
                for (int ri = 0; ri + 1 < cfg.r_samples; ++ri) {
                    const double lo = h.edges[j].value(x, r_grid[ri], p);
                    const double hi = h.edges[j].value(x, r_grid[ri + 1], p);
                    if (hi < lo - tol(lo, hi)) {
                        ++report.state_monotonicity_violations;
                        report.state_monotonicity_worst =
                            std::max(report.state_monotonicity_worst, lo - hi);
                    }
                }
            }
        }
    }

    // Junction checks: slope monotonicity on (0, P], cross-edge
    // continuity, symmetry in p, and the profile p -> H(v, 0, p).
    for (int i = 0; i < net.vertex_count(); ++i) {
        if (!net.is_transition(i)) continue;
        const auto& incident = net.incident_edges(i);
        auto vertex_y = [&](int j) {
            return net.edge(j).tail == i ? 0.0 : net.edge(j).length;
        };
        for (int j : incident) {
            const double y = vertex_y(j);
            for (double r : r_grid) {
                double prev = 0.0;
                bool have_prev = false;
                for (double p : p_grid) {
                    if (p <= 0.0) continue;
                    const double value = h.edges[j].value(y, r, p);
                    if (have_prev && value < prev - tol(prev, value)) {
                        ++report.slope_monotonicity_violations;
                        report.slope_monotonicity_worst =
                            std::max(report.slope_monotonicity_worst, prev - value);
                    }
                    prev = value;
                    have_prev = true;
                }
                for (double p : p_grid) {
                    const double plus = h.edges[j].value(y, r, p);
                    const double minus = h.edges[j].value(y, r, -p);
                    if (std::abs(plus - minus) > tol(plus, minus)) {
                        ++report.junction_symmetry_violations;
                        report.junction_symmetry_gap =
                            std::max(report.junction_symmetry_gap, std::abs(plus - minus));
                    }
                }
            }
        }
        for (std::size_t a = 0; a + 1 < incident.size(); ++a) {
            const int j = incident[a];
            const int k = incident[a + 1];
            for (double r : r_grid) {
                for (double p : p_grid) {
                    const double vj = h.edges[j].value(vertex_y(j), r, p);
                    const double vk = h.edges[k].value(vertex_y(k), r, p);
                    if (std::abs(vj - vk) > tol(vj, vk)) {
                        ++report.junction_continuity_violations;
                        report.junction_continuity_gap =
                            std::max(report.junction_continuity_gap, std::abs(vj - vk));
                    }
                }
            }
        }
        JunctionProfile profile;
        profile.vertex = i;
        const int j = incident.front();
        double best = std::numeric_limits<double>::infinity();
        double at_zero = 0.0;
        for (double p : p_grid) {
            const double value = h.edges[j].value(vertex_y(j), 0.0, p);
            if (value < best) {
                best = value;
                profile.argmin = p;
            }
            if (p == 0.0) at_zero = value;
        }
        profile.min_value = best;
        profile.min_at_zero = at_zero <= best + tol(at_zero, best);
        report.junction_profiles.push_back(profile);
    }

    // Coercivity probes: smallest probed M with H > theta for every
    // sampled |p| in (M, P], r >= eta, on every edge.
    for (const auto& [theta, eta] : cfg.coercivity_probes) {
        CoercivityProbe probe;
        probe.theta = theta;
        probe.eta = eta;
        std::vector<double> positive;
        for (double p : p_grid)
            if (p > 0.0) positive.push_back(p);
        std::sort(positive.begin(), positive.end());
        std::vector<double> worst(positive.size(), std::numeric_limits<double>::infinity());
        for (int j = 0; j < net.edge_count(); ++j) {
            const double l = net.edge(j).length;
            const auto x_grid = linspace(0.0, l, cfg.x_samples);
            for (double x : x_grid) {
                for (double r : r_grid) {
                    if (r < eta) continue;
                    for (std::size_t pi = 0; pi < positive.size(); ++pi) {
                        worst[pi] = std::min(worst[pi],
                                             std::min(h.edges[j].value(x, r, positive[pi]),
                                                      h.edges[j].value(x, r, -positive[pi])));
                    }
                }
            }
        }
        double m = 0.0;
        bool coercive_beyond = false;
        for (int pi = static_cast<int>(positive.size()) - 1; pi >= 0; --pi) {
            if (worst[pi] > theta) {
                coercive_beyond = true;
                m = pi == 0 ? 0.0 : positive[pi - 1];
            } else {
                break;
            }
        }
        if (coercive_beyond) {
            // m holds the last grid value below the coercive suffix, or
            // zero when every probed magnitude already satisfies the bound.
            probe.found = true;
            probe.threshold = m;
        }
        report.coercivity.push_back(probe);
    }
    return report;
}

}  // namespace graphhj
