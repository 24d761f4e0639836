#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "graphhj/errors.hpp"

namespace graphhj {

enum class VertexKind { Boundary, Transition };

/// Unvalidated network description, as read from a problem file or built
/// in code. Ids are free-form strings; everything else is optional where
/// a default exists (beta 1, boundary data 0).
struct RawVertex {
    std::string id;
    VertexKind kind = VertexKind::Transition;
    std::optional<double> boundary_value;  // g_i, boundary vertices only
};

struct RawEdge {
    std::string id;
    std::string tail;   // vertex at parameter y = 0
    std::string head;   // vertex at parameter y = length
    double length = 0.0;
    std::optional<int> intervals;      // per-edge grid override
    std::optional<double> spacing;     // per-edge grid override
};

struct RawNetwork {
    std::vector<RawVertex> vertices;
    std::vector<RawEdge> edges;
    /// Kirchhoff weights keyed (vertex id, edge id); omitted pairs get 1.
    std::map<std::pair<std::string, std::string>, double> beta;
};

/// Validated, immutable network. Vertices and edges are stored sorted by
/// id, so an index is a stable handle and index order == id order.
class Network {
public:
    struct Vertex {
        std::string id;
        VertexKind kind;
        double g;  // Dirichlet boundary value; 0 for transition vertices
    };
    struct Edge {
        std::string id;
        int tail;
        int head;
        double length;
        std::optional<int> intervals;
        std::optional<double> spacing;
    };

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const Vertex& vertex(int i) const { return vertices_[check_vertex(i)]; }
    const Edge& edge(int j) const { return edges_[check_edge(j)]; }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool is_boundary(int i) const { return vertex(i).kind == VertexKind::Boundary; }
    bool is_transition(int i) const { return vertex(i).kind == VertexKind::Transition; }

    /// Edges incident to vertex i, ascending edge index.
    const std::vector<int>& incident_edges(int i) const { return incident_[check_vertex(i)]; }
    int degree(int i) const { return static_cast<int>(incident_edges(i).size()); }

    int vertex_index(const std::string& id) const {
        auto it = vertex_index_.find(id);
        require(it != vertex_index_.end(), Errc::UnknownId, "vertex '" + id + "'");
        return it->second;
    }
    int edge_index(const std::string& id) const {
        auto it = edge_index_.find(id);
        require(it != edge_index_.end(), Errc::UnknownId, "edge '" + id + "'");
        return it->second;
    }

    /// Kirchhoff weight beta for (vertex, incident edge).
    double beta(int i, int j) const {
        const Edge& e = edge(j);
        if (e.tail == check_vertex(i)) return beta_tail_[j];
        require(e.head == i, Errc::BadArgument,
                "edge '" + e.id + "' is not incident to vertex '" + vertex(i).id + "'");
        return beta_head_[j];
    }

    /// Signed incidence entry: +1 when the edge leaves i (tail), -1 when it
    /// arrives (head), 0 when not incident.
    int incidence(int i, int j) const {
        const Edge& e = edge(j);
        check_vertex(i);
        if (e.tail == i) return 1;
        if (e.head == i) return -1;
        return 0;
    }

    /// The vertex at the other end of edge j.
    int opposite(int i, int j) const {
        const Edge& e = edge(j);
        if (e.tail == check_vertex(i)) return e.head;
        require(e.head == i, Errc::BadArgument, "vertex not on edge");
        return e.tail;
    }

    /// Human-readable record of boundary-vertex splits performed during
    /// validation (original id -> copies).
    const std::vector<std::string>& normalization_notes() const { return notes_; }

    friend Network validate_network(const RawNetwork& raw);

private:
    int check_vertex(int i) const {
        require(i >= 0 && i < static_cast<int>(vertices_.size()), Errc::UnknownId,
                "vertex index " + std::to_string(i));
        return i;
    }
    int check_edge(int j) const {
        require(j >= 0 && j < static_cast<int>(edges_.size()), Errc::UnknownId,
                "edge index " + std::to_string(j));
        return j;
    }

    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> incident_;
    std::vector<double> beta_tail_;  // beta at the tail vertex of edge j
    std::vector<double> beta_head_;
    std::map<std::string, int> vertex_index_;
    std::map<std::string, int> edge_index_;
    std::vector<std::string> notes_;
};

/// Checks every structural invariant and normalizes the description:
/// boundary vertices of degree > 1 are split into degree-1 copies that
/// carry the same boundary value. Throws on the first violation found.
inline Network validate_network(const RawNetwork& raw) {
    struct WVertex {
        std::string id;
        VertexKind kind;
        double g;
    };
    struct WEdge {
        std::string id;
        std::string tail, head;
        double length;
        double beta_tail, beta_head;
        std::optional<int> intervals;
        std::optional<double> spacing;
    };

    std::map<std::string, WVertex> vmap;
    for (const auto& v : raw.vertices) {
        require(!v.id.empty(), Errc::BadArgument, "empty vertex id");
        require(!vmap.count(v.id), Errc::DuplicateId, "vertex '" + v.id + "'");
        if (v.kind == VertexKind::Transition)
            require(!v.boundary_value.has_value(), Errc::BoundaryDataOnTransitionVertex,
                    "vertex '" + v.id + "'");
        vmap[v.id] = {v.id, v.kind, v.boundary_value.value_or(0.0)};
    }

    std::map<std::string, WEdge> emap;
    std::set<std::pair<std::string, std::string>> endpoint_pairs;
    for (const auto& e : raw.edges) {
        require(!e.id.empty(), Errc::BadArgument, "empty edge id");
        require(!emap.count(e.id), Errc::DuplicateId, "edge '" + e.id + "'");
        require(vmap.count(e.tail), Errc::UnknownId, "edge '" + e.id + "' tail '" + e.tail + "'");
        require(vmap.count(e.head), Errc::UnknownId, "edge '" + e.id + "' head '" + e.head + "'");
        require(e.tail != e.head, Errc::LoopEdge, "edge '" + e.id + "'");
        require(e.length > 0.0, Errc::NonpositiveLength, "edge '" + e.id + "'");
        auto pair = std::minmax(e.tail, e.head);
        require(endpoint_pairs.insert({pair.first, pair.second}).second, Errc::ParallelEdges,
                "between '" + e.tail + "' and '" + e.head + "'");
        emap[e.id] = {e.id, e.tail, e.head, e.length, 1.0, 1.0, e.intervals, e.spacing};
    }

    for (const auto& [key, value] : raw.beta) {
        const auto& [vid, eid] = key;
        auto vit = vmap.find(vid);
        require(vit != vmap.end(), Errc::UnknownId, "beta vertex '" + vid + "'");
        auto eit = emap.find(eid);
        require(eit != emap.end(), Errc::UnknownId, "beta edge '" + eid + "'");
        require(vit->second.kind == VertexKind::Transition, Errc::BadArgument,
                "beta entry on boundary vertex '" + vid + "'");
        require(value > 0.0, Errc::MissingOrNonpositiveBeta,
                "beta " + vid + "." + eid + " = " + std::to_string(value));
        if (eit->second.tail == vid)
            eit->second.beta_tail = value;
        else if (eit->second.head == vid)
            eit->second.beta_head = value;
        else
            fail(Errc::BadArgument, "beta entry " + vid + "." + eid + " is not an incident pair");
    }

    // Degree census before normalization.
    std::map<std::string, std::vector<std::string>> incident_ids;
    for (const auto& [id, e] : emap) {
        incident_ids[e.tail].push_back(id);
        incident_ids[e.head].push_back(id);
    }
    bool has_boundary = false;
    for (const auto& [id, v] : vmap) {
        const auto deg = incident_ids[id].size();
        require(deg > 0, Errc::Disconnected, "vertex '" + id + "' has no incident edge");
        if (v.kind == VertexKind::Boundary) has_boundary = true;
        // A dead end cannot carry a Kirchhoff condition; it must be boundary.
        require(v.kind == VertexKind::Boundary || deg >= 2, Errc::DanglingTransitionVertex,
                "vertex '" + id + "'");
    }
    require(has_boundary, Errc::NoBoundaryVertex, "network has no boundary vertex");

    // Connectivity is a property of the input graph. Splitting below may
    // decompose it at cut boundary vertices; the resulting problems are
    // independent and each component keeps a boundary vertex, so that is
    // accepted.
    {
        std::map<std::string, std::vector<std::string>> adj;
        for (const auto& [id, e] : emap) {
            adj[e.tail].push_back(e.head);
            adj[e.head].push_back(e.tail);
        }
        std::set<std::string> seen;
        std::queue<std::string> work;
        work.push(vmap.begin()->first);
        seen.insert(vmap.begin()->first);
        while (!work.empty()) {
            auto cur = work.front();
            work.pop();
            for (const auto& nb : adj[cur])
                if (seen.insert(nb).second) work.push(nb);
        }
        require(seen.size() == vmap.size(), Errc::Disconnected,
                std::to_string(vmap.size() - seen.size()) + " vertices unreachable");
    }

    // Split boundary vertices of degree > 1: each incident edge gets its
    // own degree-1 copy carrying the same boundary value.
    std::vector<std::string> notes;
    for (auto& [id, edges_here] : incident_ids) {
        const WVertex v = vmap[id];
        if (v.kind != VertexKind::Boundary || edges_here.size() <= 1) continue;
        std::sort(edges_here.begin(), edges_here.end());
        for (std::size_t k = 1; k < edges_here.size(); ++k) {
            std::string copy = id;
            int suffix = static_cast<int>(k) + 1;
            do {
                copy = id + "#" + std::to_string(suffix++);
            } while (vmap.count(copy));
            vmap[copy] = {copy, VertexKind::Boundary, v.g};
            WEdge& e = emap[edges_here[k]];
            (e.tail == id ? e.tail : e.head) = copy;
            notes.push_back("split boundary vertex '" + id + "' -> '" + copy + "' on edge '" +
                            e.id + "'");
        }
    }

    Network net;
    net.notes_ = std::move(notes);
    for (const auto& [id, v] : vmap) {  // std::map iterates in id order
        net.vertex_index_[id] = static_cast<int>(net.vertices_.size());
        net.vertices_.push_back({v.id, v.kind, v.kind == VertexKind::Boundary ? v.g : 0.0});
    }
    for (const auto& [id, e] : emap) {
        net.edge_index_[id] = static_cast<int>(net.edges_.size());
        net.edges_.push_back({e.id, net.vertex_index_.at(e.tail), net.vertex_index_.at(e.head),
                              e.length, e.intervals, e.spacing});
        net.beta_tail_.push_back(e.beta_tail);
        net.beta_head_.push_back(e.beta_head);
    }
    net.incident_.assign(net.vertices_.size(), {});
    for (int j = 0; j < net.edge_count(); ++j) {
        net.incident_[net.edges_[j].tail].push_back(j);
        net.incident_[net.edges_[j].head].push_back(j);
    }
    return net;
}

inline int incidence(const Network& net, int vertex, int edge) {
    return net.incidence(vertex, edge);
}

/// Edge-count distance from the boundary vertex set (breadth first).
struct LayerPartition {
    std::vector<int> layer;  // per vertex
    int max_layer = 0;
};

inline LayerPartition layer_partition(const Network& net) {
    LayerPartition lp;
    lp.layer.assign(net.vertex_count(), -1);
    std::queue<int> work;
    for (int i = 0; i < net.vertex_count(); ++i) {
        if (net.is_boundary(i)) {
            lp.layer[i] = 0;
            work.push(i);
        }
    }
    while (!work.empty()) {
        const int cur = work.front();
        work.pop();
        for (int j : net.incident_edges(cur)) {
            const int other = net.opposite(cur, j);
            if (lp.layer[other] < 0) {
                lp.layer[other] = lp.layer[cur] + 1;
                lp.max_layer = std::max(lp.max_layer, lp.layer[other]);
                work.push(other);
            }
        }
    }
    return lp;
}

/// Continuous piecewise-linear function on the network: one value per
/// vertex, one slope per edge (slope taken in the edge parameter y).
struct PiecewiseLinearField {
    std::vector<double> vertex_values;
    std::vector<double> slopes;
};

/// Weighted sum of inward derivatives at a transition vertex. For a
/// piecewise-linear field the inward derivative into edge j equals the
/// signed incidence entry times the edge slope.
inline double s_beta(const Network& net, const PiecewiseLinearField& field, int vertex) {
    require(net.is_transition(vertex), Errc::NotTransitionVertex, net.vertex(vertex).id);
    double sum = 0.0;
    for (int j : net.incident_edges(vertex))
        sum += net.beta(vertex, j) * net.incidence(vertex, j) * field.slopes[j];
    return sum;
}

/// Constructs a piecewise-linear field whose Kirchhoff sum is strictly
/// positive at every transition vertex and whose slopes are all nonzero.
/// Vertex values decay layer-exponentially away from the boundary with a
/// tiny rank perturbation to break ties; the result is verified and the
/// base constant doubled on the (unexpected) failure path.
inline PiecewiseLinearField kirchhoff_positive_field(const Network& net) {
    const LayerPartition lp = layer_partition(net);

    double beta_min = 1.0, beta_max = 1.0;
    bool first = true;
    for (int i = 0; i < net.vertex_count(); ++i) {
        if (!net.is_transition(i)) continue;
        for (int j : net.incident_edges(i)) {
            const double b = net.beta(i, j);
            beta_min = first ? b : std::min(beta_min, b);
            beta_max = first ? b : std::max(beta_max, b);
            first = false;
        }
    }
    double l_min = net.edge(0).length, l_max = l_min;
    for (const auto& e : net.edges()) {
        l_min = std::min(l_min, e.length);
        l_max = std::max(l_max, e.length);
    }
    int deg_max = 1;
    for (int i = 0; i < net.vertex_count(); ++i) deg_max = std::max(deg_max, net.degree(i));

    double base = 2.0 + deg_max * (beta_max / beta_min) * (l_max / l_min);
    const int max_attempts = 60;
    for (int attempt = 0; attempt < max_attempts; ++attempt, base *= 2.0) {
        const double eta = (base - 1.0) * 1e-9 / static_cast<double>(net.vertex_count() + 1);
        PiecewiseLinearField field;
        field.vertex_values.resize(net.vertex_count());
        for (int i = 0; i < net.vertex_count(); ++i)
            field.vertex_values[i] =
                std::pow(base, lp.max_layer - lp.layer[i]) + eta * static_cast<double>(i);
        field.slopes.resize(net.edge_count());
        bool ok = true;
        for (int j = 0; j < net.edge_count(); ++j) {
            const auto& e = net.edge(j);
            field.slopes[j] =
                (field.vertex_values[e.head] - field.vertex_values[e.tail]) / e.length;
            if (field.slopes[j] == 0.0 || !std::isfinite(field.slopes[j])) ok = false;
        }
        for (int i = 0; ok && i < net.vertex_count(); ++i)
            if (net.is_transition(i) && !(s_beta(net, field, i) > 0.0)) ok = false;
        if (ok) return field;
    }
    fail(Errc::ConstructionFailed,
         "no Kirchhoff-positive field after " + std::to_string(max_attempts) + " attempts");
}

}  // namespace graphhj
