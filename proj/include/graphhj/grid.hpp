#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "graphhj/errors.hpp"
#include "graphhj/network.hpp"

namespace graphhj {

/// Per-edge uniform grids with one shared unknown per vertex. Unknown
/// layout is deterministic: interior nodes edge-major (edges in id
/// order, nodes by ascending y), then one unknown per vertex in id order.
class NetworkGrid {
public:
    NetworkGrid(Network net, std::vector<int> intervals) : net_(std::move(net)) {
        require(intervals.size() == static_cast<std::size_t>(net_.edge_count()),
                Errc::BadArgument, "interval count per edge mismatch");
        n_ = std::move(intervals);
        offsets_.resize(n_.size());
        int running = 0;
        for (std::size_t j = 0; j < n_.size(); ++j) {
            require(n_[j] >= 2, Errc::ResolutionTooCoarse,
                    "edge '" + net_.edge(static_cast<int>(j)).id + "' needs >= 2 intervals");
            offsets_[j] = running;
            running += n_[j] - 1;
        }
        interior_count_ = running;
    }

    const Network& net() const { return net_; }
    int intervals(int edge) const { return n_[edge]; }
    double spacing(int edge) const { return net_.edge(edge).length / n_[edge]; }
    double max_spacing() const {
        double h = 0.0;
        for (int j = 0; j < net_.edge_count(); ++j) h = std::max(h, spacing(j));
        return h;
    }

    int interior_count() const { return interior_count_; }
    int unknown_count() const { return interior_count_ + net_.vertex_count(); }

    int vertex_unknown(int vertex) const { return interior_count_ + vertex; }

    /// Global unknown of node k on edge j, k = 0..n_j; endpoints resolve to
    /// the shared vertex unknowns.
    int node_unknown(int edge, int k) const {
        const int n = n_[edge];
        require(k >= 0 && k <= n, Errc::OutOfRange, "node index");
        if (k == 0) return vertex_unknown(net_.edge(edge).tail);
        if (k == n) return vertex_unknown(net_.edge(edge).head);
        return offsets_[edge] + k - 1;
    }

    double node_y(int edge, int k) const {
        return static_cast<double>(k) * net_.edge(edge).length / n_[edge];
    }

private:
    Network net_;
    std::vector<int> n_;
    std::vector<int> offsets_;
    int interior_count_ = 0;
};

using GridPtr = std::shared_ptr<const NetworkGrid>;

/// Grid resolution request: a global target spacing, overridden per edge
/// by any n/h carried on the edge itself.
inline GridPtr build_grid(const Network& net, double target_spacing) {
    require(target_spacing > 0.0, Errc::ResolutionTooCoarse, "target spacing must be positive");
    std::vector<int> n(net.edge_count());
    for (int j = 0; j < net.edge_count(); ++j) {
        const auto& e = net.edge(j);
        double h = target_spacing;
        if (e.spacing) {
            require(*e.spacing > 0.0, Errc::ResolutionTooCoarse,
                    "edge '" + e.id + "' spacing must be positive");
            h = *e.spacing;
        }
        int count = e.intervals ? *e.intervals : static_cast<int>(std::ceil(e.length / h));
        require(!e.intervals || *e.intervals >= 2, Errc::ResolutionTooCoarse,
                "edge '" + e.id + "' needs >= 2 intervals");
        n[j] = std::max(2, count);
    }
    return std::make_shared<NetworkGrid>(net, std::move(n));
}

inline GridPtr build_grid(const Network& net, std::vector<int> per_edge_intervals) {
    return std::make_shared<NetworkGrid>(net, std::move(per_edge_intervals));
}

/// Scalar function sampled at every grid unknown. Vertex continuity is
/// structural: incident edges share the vertex unknown.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(GridPtr grid, double fill = 0.0)
        : grid_(std::move(grid)), values_(grid_->unknown_count(), fill) {}
    GridFunction(GridPtr grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        require(values_.size() == static_cast<std::size_t>(grid_->unknown_count()),
                Errc::BadArgument, "value count mismatch");
    }

    const NetworkGrid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }

    double& operator[](int unknown) { return values_[unknown]; }
    double operator[](int unknown) const { return values_[unknown]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double at_node(int edge, int k) const { return values_[grid_->node_unknown(edge, k)]; }
    double& at_node(int edge, int k) { return values_[grid_->node_unknown(edge, k)]; }
    double at_vertex(int vertex) const { return values_[grid_->vertex_unknown(vertex)]; }

    double sup_norm() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    GridPtr grid_;
    std::vector<double> values_;
};

inline double sup_distance(const GridFunction& a, const GridFunction& b) {
    require(a.values().size() == b.values().size(), Errc::BadArgument, "grid mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

/// Linear interpolation of u along edge j at parameter y in [0, l_j].
/// Node values (and vertex values at the ends) are returned exactly.
inline double sample(const GridFunction& u, int edge, double y) {
    const NetworkGrid& g = u.grid();
    const double l = g.net().edge(edge).length;
    require(y >= 0.0 && y <= l, Errc::OutOfRange,
            "y = " + std::to_string(y) + " outside [0, " + std::to_string(l) + "]");
    const int n = g.intervals(edge);
    const double h = g.spacing(edge);
    int k = std::min(static_cast<int>(y / h), n - 1);
    const double t = y / h - k;
    const double a = u.at_node(edge, k);
    const double b = u.at_node(edge, k + 1);
    return t <= 0.0 ? a : (t >= 1.0 ? b : a + t * (b - a));
}

/// Second-order one-sided derivative of u at a vertex, taken inward
/// along edge j: (-3 u(v) + 4 u_1 - u_2) / (2h) on the first two nodes
/// into the edge.
inline double inward_derivative(const GridFunction& u, int vertex, int edge) {
    const NetworkGrid& g = u.grid();
    const auto& e = g.net().edge(edge);
    const int n = g.intervals(edge);
    const double h = g.spacing(edge);
    if (e.tail == vertex)
        return (-3.0 * u.at_node(edge, 0) + 4.0 * u.at_node(edge, 1) - u.at_node(edge, 2)) /
               (2.0 * h);
    require(e.head == vertex, Errc::BadArgument, "vertex not on edge");
    return (-3.0 * u.at_node(edge, n) + 4.0 * u.at_node(edge, n - 1) - u.at_node(edge, n - 2)) /
           (2.0 * h);
}

/// Discrete Kirchhoff sum at a transition vertex: weighted sum of
/// inward one-sided derivatives over the incident edges.
inline double s_beta(const GridFunction& u, int vertex) {
    const Network& net = u.grid().net();
    require(net.is_transition(vertex), Errc::NotTransitionVertex, net.vertex(vertex).id);
    double sum = 0.0;
    for (int j : net.incident_edges(vertex))
        sum += net.beta(vertex, j) * inward_derivative(u, vertex, j);
    return sum;
}

}  // namespace graphhj
