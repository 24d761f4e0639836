#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "graphhj/field.hpp"
#include "graphhj/grid.hpp"

namespace graphhj {

/// Data of the linear problem: per-edge coefficients of
/// a d2/dy2 + b d/dy - c, forcing g, and Dirichlet values gamma at
/// boundary vertices. Requires a > 0 and c >= 0 wherever sampled.
struct LinearCoefficients {
    std::vector<EdgeField> a;
    std::vector<EdgeField> b;
    std::vector<EdgeField> c;
    std::vector<EdgeField> g;
    std::vector<double> gamma;  // indexed by vertex; read at boundary vertices only

    static LinearCoefficients uniform(const Network& net, double a_, double b_, double c_,
                                      double g_) {
        LinearCoefficients lc;
        const auto e = static_cast<std::size_t>(net.edge_count());
        lc.a.assign(e, EdgeField::constant(a_));
        lc.b.assign(e, EdgeField::constant(b_));
        lc.c.assign(e, EdgeField::constant(c_));
        lc.g.assign(e, EdgeField::constant(g_));
        lc.gamma.assign(net.vertex_count(), 0.0);
        return lc;
    }
};

enum class RowKind { Interior, Dirichlet, Kirchhoff };

struct RowEntry {
    int col;
    double coeff;
};

/// Square sparse system over the grid unknowns; row index equals unknown
/// index. Interior rows hold the three-point stencil of the edge
/// operator, vertex rows are Dirichlet identities or discrete Kirchhoff
/// sums of inward one-sided derivatives.
struct SparseSystem {
    GridPtr grid;
    std::vector<std::vector<RowEntry>> rows;
    std::vector<double> rhs;
    std::vector<RowKind> kind;
    std::vector<bool> upwinded;

    int size() const { return static_cast<int>(rows.size()); }

    double apply_row(int r, const std::vector<double>& u) const {
        double s = 0.0;
        for (const auto& e : rows[r]) s += e.coeff * u[e.col];
        return s;
    }

    double residual_sup(const std::vector<double>& u) const {
        double m = 0.0;
        for (int r = 0; r < size(); ++r) m = std::max(m, std::abs(apply_row(r, u) - rhs[r]));
        return m;
    }

    /// Largest Kirchhoff-row residual; NaN-free zero when no transition
    /// vertices exist.
    double kirchhoff_residual(const std::vector<double>& u) const {
        double m = 0.0;
        for (int r = 0; r < size(); ++r)
            if (kind[r] == RowKind::Kirchhoff)
                m = std::max(m, std::abs(apply_row(r, u) - rhs[r]));
        return m;
    }
};

/// Finite-difference assembly of the linear network problem. Interior
/// node k of edge j discretizes a w'' + b w' - c w + g = 0 with the
/// standard second difference and central first derivative; rows whose
/// cell Peclet number h|b|/(2a) reaches 1 fall back to first-order
/// upwinding so the off-diagonal sign pattern (and with it the discrete
/// maximum principle) survives convection-dominated coefficients.
/// Transition vertices get the Kirchhoff row, boundary vertices the
/// Dirichlet identity.
inline SparseSystem assemble_linear(GridPtr grid, const LinearCoefficients& coeffs) {
    const Network& net = grid->net();
    const int edges = net.edge_count();
    require(static_cast<int>(coeffs.a.size()) == edges &&
                static_cast<int>(coeffs.b.size()) == edges &&
                static_cast<int>(coeffs.c.size()) == edges &&
                static_cast<int>(coeffs.g.size()) == edges,
            Errc::BadArgument, "one coefficient field per edge required");
    require(static_cast<int>(coeffs.gamma.size()) == net.vertex_count(), Errc::BadArgument,
            "gamma must be indexed by vertex");

    SparseSystem sys;
    sys.grid = grid;
    const int n_unknowns = grid->unknown_count();
    sys.rows.resize(n_unknowns);
    sys.rhs.assign(n_unknowns, 0.0);
    sys.kind.assign(n_unknowns, RowKind::Interior);
    sys.upwinded.assign(n_unknowns, false);

    for (int j = 0; j < edges; ++j) {
        const int n = grid->intervals(j);
        const double h = grid->spacing(j);
        for (int k = 1; k < n; ++k) {
            const double y = grid->node_y(j, k);
            const double a = coeffs.a[j](y);
            const double b = coeffs.b[j](y);
            const double c = coeffs.c[j](y);
            require(a > 0.0, Errc::CoefficientSignViolation,
                    "a <= 0 on edge '" + net.edge(j).id + "' at y = " + std::to_string(y));
            require(c >= 0.0, Errc::CoefficientSignViolation,
                    "c < 0 on edge '" + net.edge(j).id + "' at y = " + std::to_string(y));

            const int row = grid->node_unknown(j, k);
            double left = a / (h * h);
            double right = a / (h * h);
            double diag = -2.0 * a / (h * h) - c;
            const double peclet = h * std::abs(b) / (2.0 * a);
            if (peclet >= 1.0) {
                sys.upwinded[row] = true;
                if (b >= 0.0) {
                    right += b / h;
                    diag -= b / h;
                } else {
                    left -= b / h;
                    diag += b / h;
                }
            } else {
                left -= b / (2.0 * h);
                right += b / (2.0 * h);
            }
            sys.rows[row] = {{grid->node_unknown(j, k - 1), left},
                             {row, diag},
                             {grid->node_unknown(j, k + 1), right}};
            sys.rhs[row] = -coeffs.g[j](y);
        }
    }

    for (int i = 0; i < net.vertex_count(); ++i) {
        const int row = grid->vertex_unknown(i);
        if (net.is_boundary(i)) {
            sys.kind[row] = RowKind::Dirichlet;
            sys.rows[row] = {{row, 1.0}};
            sys.rhs[row] = coeffs.gamma[i];
            continue;
        }
        sys.kind[row] = RowKind::Kirchhoff;
        std::map<int, double> entries;  // merge: with n_j = 2 the far vertex appears
        for (int j : net.incident_edges(i)) {
            const double h = grid->spacing(j);
            const double w = net.beta(i, j) / (2.0 * h);
            const bool from_tail = net.edge(j).tail == i;
            const int n = grid->intervals(j);
            const int k0 = from_tail ? 0 : n;
            const int k1 = from_tail ? 1 : n - 1;
            const int k2 = from_tail ? 2 : n - 2;
            entries[grid->node_unknown(j, k0)] += -3.0 * w;
            entries[grid->node_unknown(j, k1)] += 4.0 * w;
            entries[grid->node_unknown(j, k2)] += -1.0 * w;
        }
        sys.rows[row].reserve(entries.size());
        for (const auto& [col, coeff] : entries) sys.rows[row].push_back({col, coeff});
        sys.rhs[row] = 0.0;
    }
    return sys;
}

}  // namespace graphhj
