#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "graphhj/assemble.hpp"
#include "graphhj/grid.hpp"

namespace graphhj {

struct SolveReport {
    double residual_sup = 0.0;   // sup-norm residual on the assembled rows
    double min_pivot = 0.0;      // smallest pivot magnitude met during elimination
    int unknowns = 0;
};

inline std::string describe_unknown(const NetworkGrid& grid, int unknown) {
    const Network& net = grid.net();
    if (unknown >= grid.interior_count()) {
        return "vertex '" + net.vertex(unknown - grid.interior_count()).id + "'";
    }
    for (int j = 0; j < net.edge_count(); ++j) {
        const int base = grid.node_unknown(j, 1);
        const int m = grid.intervals(j) - 1;
        if (unknown >= base && unknown < base + m) {
            const int k = unknown - base + 1;
            return "edge '" + net.edge(j).id + "' node " + std::to_string(k) +
                   " (y = " + std::to_string(grid.node_y(j, k)) + ")";
        }
    }
    return "unknown " + std::to_string(unknown);
}

namespace detail {

// Relative pivot floor; below it the system is reported singular.
constexpr double kPivotRel = 1e-13;

/// Factor-and-solve for one edge block: tridiagonal in the interior
/// unknowns, coupled only to the edge's two vertex unknowns. Solves the
/// three right-hand sides needed by the condensation in one sweep.
struct EdgeBlock {
    std::vector<long double> z0, z1, z2;  // T^{-1} rhs, T^{-1} tail-col, T^{-1} head-col
    double min_pivot = std::numeric_limits<double>::infinity();
};

inline EdgeBlock eliminate_edge(const SparseSystem& sys, int edge) {
    const NetworkGrid& grid = *sys.grid;
    const int m = grid.intervals(edge) - 1;
    const int base = grid.node_unknown(edge, 1);
    const int tail_col = grid.vertex_unknown(grid.net().edge(edge).tail);
    const int head_col = grid.vertex_unknown(grid.net().edge(edge).head);

    std::vector<long double> sub(m, 0.0), diag(m, 0.0), sup(m, 0.0);
    EdgeBlock blk;
    blk.z0.assign(m, 0.0);
    blk.z1.assign(m, 0.0);
    blk.z2.assign(m, 0.0);

    double scale = 0.0;
    for (int k = 0; k < m; ++k) {
        const int row = base + k;
        blk.z0[k] = sys.rhs[row];
        for (const auto& e : sys.rows[row]) {
            scale = std::max(scale, std::abs(e.coeff));
            if (e.col == row)
                diag[k] = e.coeff;
            else if (e.col == row - 1 && e.col >= base)
                sub[k] = e.coeff;
            else if (e.col == row + 1 && e.col < base + m)
                sup[k] = e.coeff;
            else if (e.col == tail_col)
                blk.z1[k] = e.coeff;
            else if (e.col == head_col)
                blk.z2[k] = e.coeff;
            else
                fail(Errc::InternalInvariant, "interior row touches a foreign unknown");
        }
    }

    // Thomas elimination applied to the three right-hand sides at once.
    const double floor = kPivotRel * std::max(scale, 1e-300);
    for (int k = 0; k < m; ++k) {
        if (k > 0) {
            const long double f = sub[k] / diag[k - 1];
            diag[k] -= f * sup[k - 1];
            blk.z0[k] -= f * blk.z0[k - 1];
            blk.z1[k] -= f * blk.z1[k - 1];
            blk.z2[k] -= f * blk.z2[k - 1];
        }
        const double p = std::abs(static_cast<double>(diag[k]));
        blk.min_pivot = std::min(blk.min_pivot, p);
        require(p > floor, Errc::SingularSystem,
                "tridiagonal pivot " + std::to_string(p) + " on edge '" +
                    grid.net().edge(edge).id + "'");
    }
    for (int k = m - 1; k >= 0; --k) {
        const long double s = (k + 1 < m) ? sup[k] : 0.0L;
        blk.z0[k] = (blk.z0[k] - (k + 1 < m ? s * blk.z0[k + 1] : 0.0L)) / diag[k];
        blk.z1[k] = (blk.z1[k] - (k + 1 < m ? s * blk.z1[k + 1] : 0.0L)) / diag[k];
        blk.z2[k] = (blk.z2[k] - (k + 1 < m ? s * blk.z2[k + 1] : 0.0L)) / diag[k];
    }
    return blk;
}

/// Dense LU with partial pivoting, in place. Returns min pivot magnitude.
inline double dense_lu_solve(std::vector<std::vector<long double>>& A,
                             std::vector<long double>& b) {
    const int n = static_cast<int>(A.size());
    double scale = 0.0;
    for (const auto& row : A)
        for (long double v : row) scale = std::max(scale, std::abs(static_cast<double>(v)));
    const double floor = kPivotRel * std::max(scale, 1e-300);
    double min_pivot = std::numeric_limits<double>::infinity();

    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
        int best = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[perm[r]][col]) > std::abs(A[perm[best]][col])) best = r;
        std::swap(perm[col], perm[best]);
        const long double pivot = A[perm[col]][col];
        const double p = std::abs(static_cast<double>(pivot));
        min_pivot = std::min(min_pivot, p);
        require(p > floor, Errc::SingularSystem,
                "condensed vertex system pivot " + std::to_string(p));
        for (int r = col + 1; r < n; ++r) {
            const long double f = A[perm[r]][col] / pivot;
            if (f == 0.0L) continue;
            A[perm[r]][col] = f;
            for (int c = col + 1; c < n; ++c) A[perm[r]][c] -= f * A[perm[col]][c];
            b[perm[r]] -= f * b[perm[col]];
        }
    }
    std::vector<long double> x(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        long double s = b[perm[r]];
        for (int c = r + 1; c < n; ++c) s -= A[perm[r]][c] * x[c];
        x[r] = s / A[perm[r]][r];
    }
    b = std::move(x);
    return min_pivot;
}

}  // namespace detail

/// Direct solve of the assembled network system: per-edge tridiagonal
/// elimination condenses the problem onto the vertex unknowns, the small
/// dense vertex system is solved by LU with partial pivoting, and the
/// interior values are recovered by back-substitution. Exact up to
/// rounding; the residual is measured on the assembled rows.
inline std::pair<GridFunction, SolveReport> solve_linear(const SparseSystem& sys) {
    const NetworkGrid& grid = *sys.grid;
    const Network& net = grid.net();
    const int n_vertices = net.vertex_count();
    const int interior = grid.interior_count();

    std::vector<detail::EdgeBlock> blocks;
    blocks.reserve(net.edge_count());
    double min_pivot = std::numeric_limits<double>::infinity();
    for (int j = 0; j < net.edge_count(); ++j) {
        blocks.push_back(detail::eliminate_edge(sys, j));
        min_pivot = std::min(min_pivot, blocks.back().min_pivot);
    }

    // Condensed vertex system S w_V = r: vertex-row entries on vertex
    // columns pass through; entries on interior columns are eliminated
    // through the edge blocks.
    std::vector<std::vector<long double>> S(n_vertices,
                                            std::vector<long double>(n_vertices, 0.0L));
    std::vector<long double> r(n_vertices, 0.0L);
    for (int i = 0; i < n_vertices; ++i) {
        const int row = grid.vertex_unknown(i);
        r[i] = sys.rhs[row];
        for (const auto& e : sys.rows[row]) {
            if (e.col >= interior) {
                S[i][e.col - interior] += e.coeff;
                continue;
            }
            // Locate the interior column's edge block.
            int edge = -1, k = -1;
            for (int j : net.incident_edges(i)) {
                const int base = grid.node_unknown(j, 1);
                const int m = grid.intervals(j) - 1;
                if (e.col >= base && e.col < base + m) {
                    edge = j;
                    k = e.col - base;
                    break;
                }
            }
            require(edge >= 0, Errc::InternalInvariant, "vertex row touches a non-incident edge");
            const auto& blk = blocks[edge];
            const int tail = net.edge(edge).tail;
            const int head = net.edge(edge).head;
            S[i][tail] -= e.coeff * blk.z1[k];
            S[i][head] -= e.coeff * blk.z2[k];
            r[i] -= e.coeff * blk.z0[k];
        }
    }
    min_pivot = std::min(min_pivot, detail::dense_lu_solve(S, r));

    GridFunction u(sys.grid);
    for (int i = 0; i < n_vertices; ++i) u[grid.vertex_unknown(i)] = static_cast<double>(r[i]);
    for (int j = 0; j < net.edge_count(); ++j) {
        const auto& blk = blocks[j];
        const int base = grid.node_unknown(j, 1);
        const long double w_tail = r[net.edge(j).tail];
        const long double w_head = r[net.edge(j).head];
        for (std::size_t k = 0; k < blk.z0.size(); ++k)
            u[base + static_cast<int>(k)] =
                static_cast<double>(blk.z0[k] - blk.z1[k] * w_tail - blk.z2[k] * w_head);
    }

    SolveReport report;
    report.unknowns = sys.size();
    report.min_pivot = min_pivot;
    report.residual_sup = sys.residual_sup(u.values());
    return {std::move(u), report};
}

/// Outcome of the discrete maximum-principle check: where the maximum of
/// u sits and which clause of the principle covers it.
struct MaxPrincipleCertificate {
    double max_value = 0.0;
    int arg_unknown = -1;
    bool vacuous = false;       // maximum is negative, nothing to certify
    bool constant = false;      // u is constant within tolerance
    bool at_boundary = false;   // maximum attained at a boundary vertex
    std::string location;
};

/// Certifies that a nonnegative maximum of u is attained at a boundary
/// vertex unless u is constant. Caller asserts the hypotheses on the
/// continuous side (forcing g <= 0 in the Lw + g = 0 convention, so the
/// rows encode Lw >= 0). Throws CertificateFailed naming the offending
/// interior unknown when the check fails; that signals a scheme bug.
inline MaxPrincipleCertificate check_discrete_max_principle(const GridFunction& u,
                                                            const SparseSystem& sys) {
    const auto& vals = u.values();
    require(static_cast<int>(vals.size()) == sys.size(), Errc::BadArgument, "grid mismatch");
    MaxPrincipleCertificate cert;
    double vmax = vals[0], vmin = vals[0];
    int arg = 0;
    for (int i = 1; i < static_cast<int>(vals.size()); ++i) {
        if (vals[i] > vmax) {
            vmax = vals[i];
            arg = i;
        }
        vmin = std::min(vmin, vals[i]);
    }
    cert.max_value = vmax;
    cert.arg_unknown = arg;
    cert.location = describe_unknown(*sys.grid, arg);

    const double scale = std::max({1.0, std::abs(vmax), std::abs(vmin)});
    const double tol = 1e-10 * scale;
    if (vmax < -tol) {
        cert.vacuous = true;
        return cert;
    }
    if (vmax - vmin <= tol) {
        cert.constant = true;
        return cert;
    }
    const NetworkGrid& grid = *sys.grid;
    for (int i = 0; i < grid.net().vertex_count(); ++i) {
        if (grid.net().is_boundary(i) && vals[grid.vertex_unknown(i)] >= vmax - tol) {
            cert.at_boundary = true;
            return cert;
        }
    }
    fail(Errc::CertificateFailed,
         "nonnegative maximum " + std::to_string(vmax) + " attained at " + cert.location);
}

}  // namespace graphhj
