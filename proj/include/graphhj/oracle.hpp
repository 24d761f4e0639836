#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "graphhj/grid.hpp"

namespace graphhj {

/// Integrated edge weights of a positive density f: per edge the total
/// weight W_j and the cumulative partial integrals F_j at every node
/// (composite trapezoid, exact for affine densities).
struct EdgeWeightTable {
    std::vector<double> total;
    std::vector<std::vector<double>> cumulative;
};

inline EdgeWeightTable edge_weights(const GridFunction& density, double alpha_min = 1e-8) {
    const NetworkGrid& grid = density.grid();
    const Network& net = grid.net();
    EdgeWeightTable table;
    table.total.resize(net.edge_count());
    table.cumulative.resize(net.edge_count());
    for (int j = 0; j < net.edge_count(); ++j) {
        const int n = grid.intervals(j);
        const double h = grid.spacing(j);
        auto& cum = table.cumulative[j];
        cum.assign(n + 1, 0.0);
        for (int k = 0; k <= n; ++k) {
            const double f = density.at_node(j, k);
            require(f >= alpha_min, Errc::NonpositiveDensity,
                    "density " + std::to_string(f) + " below " + std::to_string(alpha_min) +
                        " on edge '" + net.edge(j).id + "'");
            if (k > 0) cum[k] = cum[k - 1] + 0.5 * h * (density.at_node(j, k - 1) + f);
        }
        table.total[j] = cum[n];
    }
    return table;
}

/// Weighted distance from the boundary: grid values plus, per vertex,
/// the edge the minimizing path leaves through (-1 at sources).
struct DistanceField {
    GridFunction u;
    std::vector<int> predecessor_edge;
};

namespace detail {

/// Shared interior fill: once vertex distances are known, each interior
/// node takes the better of the two one-sided path candidates.
inline DistanceField assemble_distance_field(const GridFunction& density,
                                             const EdgeWeightTable& table,
                                             std::vector<double> vertex_dist,
                                             std::vector<int> pred) {
    const GridPtr grid = density.grid_ptr();
    const Network& net = grid->net();
    DistanceField out{GridFunction(grid), std::move(pred)};
    for (int i = 0; i < net.vertex_count(); ++i)
        out.u[grid->vertex_unknown(i)] = vertex_dist[i];
    for (int j = 0; j < net.edge_count(); ++j) {
        const auto& e = net.edge(j);
        const auto& cum = table.cumulative[j];
        const int n = grid->intervals(j);
        for (int k = 1; k < n; ++k) {
            const double from_tail = vertex_dist[e.tail] + cum[k];
            const double from_head = vertex_dist[e.head] + table.total[j] - cum[k];
            out.u.at_node(j, k) = std::min(from_tail, from_head);
        }
    }
    return out;
}

}  // namespace detail

/// Multi-source Dijkstra over the vertex set, seeded with the boundary
/// values, with deterministic tie-breaking (lower vertex index wins).
inline DistanceField weighted_boundary_distance(const GridFunction& density,
                                                const std::vector<double>& boundary_values,
                                                double alpha_min = 1e-8) {
    const NetworkGrid& grid = density.grid();
    const Network& net = grid.net();
    require(boundary_values.size() == static_cast<std::size_t>(net.vertex_count()),
            Errc::BadArgument, "boundary values must be indexed by vertex");
    const EdgeWeightTable table = edge_weights(density, alpha_min);

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(net.vertex_count(), inf);
    std::vector<int> pred(net.vertex_count(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    for (int i = 0; i < net.vertex_count(); ++i) {
        if (net.is_boundary(i)) {
            dist[i] = boundary_values[i];
            queue.push({dist[i], i});
        }
    }
    std::vector<bool> done(net.vertex_count(), false);
    while (!queue.empty()) {
        const auto [d, v] = queue.top();
        queue.pop();
        if (done[v] || d > dist[v]) continue;
        done[v] = true;
        for (int j : net.incident_edges(v)) {
            const int other = net.opposite(v, j);
            const double candidate = dist[v] + table.total[j];
            if (candidate < dist[other]) {
                dist[other] = candidate;
                pred[other] = j;
                queue.push({candidate, other});
            }
        }
    }
    return detail::assemble_distance_field(density, table, std::move(dist), std::move(pred));
}

inline DistanceField weighted_boundary_distance(const GridFunction& density,
                                                double alpha_min = 1e-8) {
    const Network& net = density.grid().net();
    std::vector<double> g(net.vertex_count(), 0.0);
    for (int i = 0; i < net.vertex_count(); ++i)
        if (net.is_boundary(i)) g[i] = net.vertex(i).g;
    return weighted_boundary_distance(density, g, alpha_min);
}

/// Independent oracle for the Dijkstra path: enumerate every simple
/// vertex path to every boundary vertex. Exponential; capped at twelve
/// edges.
inline DistanceField brute_force_distance(const GridFunction& density,
                                          const std::vector<double>& boundary_values,
                                          double alpha_min = 1e-8) {
    const NetworkGrid& grid = density.grid();
    const Network& net = grid.net();
    require(net.edge_count() <= 12, Errc::TooLarge,
            "brute-force path enumeration capped at 12 edges");
    require(boundary_values.size() == static_cast<std::size_t>(net.vertex_count()),
            Errc::BadArgument, "boundary values must be indexed by vertex");
    const EdgeWeightTable table = edge_weights(density, alpha_min);

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(net.vertex_count(), inf);
    std::vector<int> pred(net.vertex_count(), -1);
    std::vector<bool> visited(net.vertex_count(), false);

    for (int start = 0; start < net.vertex_count(); ++start) {
        double best = inf;
        int first_edge = -1;
        std::fill(visited.begin(), visited.end(), false);
        // DFS over simple paths from `start`. A boundary hit closes a
        // candidate but the walk continues through it: with uneven seeds
        // a cheaper source may lie beyond, and Dijkstra sees those paths.
        auto walk = [&](auto&& self, int v, double cost, int initial_edge) -> void {
            if (net.is_boundary(v)) {
                const double total = cost + boundary_values[v];
                if (total < best) {
                    best = total;
                    first_edge = initial_edge;
                }
            }
            visited[v] = true;
            for (int j : net.incident_edges(v)) {
                const int other = net.opposite(v, j);
                if (!visited[other])
                    self(self, other, cost + table.total[j], initial_edge < 0 ? j : initial_edge);
            }
            visited[v] = false;
        };
        walk(walk, start, 0.0, -1);
        dist[start] = best;
        pred[start] = first_edge;
    }
    return detail::assemble_distance_field(density, table, std::move(dist), std::move(pred));
}

inline DistanceField brute_force_distance(const GridFunction& density, double alpha_min = 1e-8) {
    const Network& net = density.grid().net();
    std::vector<double> g(net.vertex_count(), 0.0);
    for (int i = 0; i < net.vertex_count(); ++i)
        if (net.is_boundary(i)) g[i] = net.vertex(i).g;
    return brute_force_distance(density, g, alpha_min);
}

/// Residual statistics of | |du| - f | at interior nodes. A node where
/// the two one-sided path candidates meet within (max f) * h is a kink;
/// kinks and their neighbors are excluded from the reported maximum
/// because the central stencil straddles the path switch there.
struct EikonalResidualStats {
    double max_residual = 0.0;  // over non-kink, non-kink-adjacent nodes
    int kink_count = 0;
};

inline EikonalResidualStats eikonal_residual(const DistanceField& field,
                                             const GridFunction& density,
                                             double alpha_min = 1e-8) {
    const NetworkGrid& grid = field.u.grid();
    const Network& net = grid.net();
    const EdgeWeightTable table = edge_weights(density, alpha_min);
    double f_max = 0.0;
    for (double v : density.values()) f_max = std::max(f_max, v);

    EikonalResidualStats stats;
    for (int j = 0; j < net.edge_count(); ++j) {
        const auto& e = net.edge(j);
        const auto& cum = table.cumulative[j];
        const int n = grid.intervals(j);
        const double h = grid.spacing(j);
        const double tail_u = field.u.at_vertex(e.tail);
        const double head_u = field.u.at_vertex(e.head);
        std::vector<bool> kink(n + 1, false);
        for (int k = 1; k < n; ++k) {
            const double from_tail = tail_u + cum[k];
            const double from_head = head_u + table.total[j] - cum[k];
            kink[k] = std::abs(from_tail - from_head) <= f_max * h;
            if (kink[k]) ++stats.kink_count;
        }
        for (int k = 1; k < n; ++k) {
            if (kink[k] || kink[k - 1] || kink[k + 1]) continue;
            const double du =
                (field.u.at_node(j, k + 1) - field.u.at_node(j, k - 1)) / (2.0 * h);
            const double res = std::abs(std::abs(du) - density.at_node(j, k));
            stats.max_residual = std::max(stats.max_residual, res);
        }
    }
    return stats;
}

}  // namespace graphhj
