#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ricciflow/errors.hpp"
#include "ricciflow/parallel.hpp"

namespace ricciflow {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

// Undirected edge with a strictly positive weight. Endpoints are stored with
// u < v so that (u,v) and (v,u) compare equal.
struct Edge {
    VertexId u = 0;
    VertexId v = 0;
    double weight = 1.0;
};

struct AdjacencyEntry {
    VertexId to;
    EdgeId edge;
};

// Connected weighted graph over dense vertex ids 0..n-1. Topology is fixed
// after construction; edge weights may be replaced between flow iterations
// via set_weights().
class WeightedGraph {
  public:
    WeightedGraph() = default;

    static WeightedGraph build(std::vector<Edge> edge_list, std::size_t vertex_count);

    std::size_t vertex_count() const { return adjacency_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }
    const std::vector<AdjacencyEntry>& neighbors(VertexId x) const { return adjacency_[x]; }
    std::size_t degree(VertexId x) const { return adjacency_[x].size(); }

    double weight(EdgeId e) const { return edges_[e].weight; }

    // Index of the edge joining x and y, or throws edge_not_in_graph_error.
    EdgeId edge_between(VertexId x, VertexId y) const;

    std::vector<double> weights() const {
        std::vector<double> w(edges_.size());
        for (std::size_t i = 0; i < edges_.size(); ++i) w[i] = edges_[i].weight;
        return w;
    }

    // Replaces all edge weights (one value per edge, all > 0). The topology
    // and adjacency are untouched.
    void set_weights(const std::vector<double>& w);

    double total_weight() const {
        double s = 0.0;
        for (const Edge& e : edges_) s += e.weight;
        return s;
    }

    double min_weight() const {
        double s = std::numeric_limits<double>::infinity();
        for (const Edge& e : edges_) s = std::min(s, e.weight);
        return s;
    }

  private:
    std::vector<Edge> edges_;
    std::vector<std::vector<AdjacencyEntry>> adjacency_;
};

// Dense all-pairs shortest-path distances. `stale` is set by the flow engine
// once the weights that produced the matrix have been replaced.
struct DistanceMatrix {
    std::size_t n = 0;
    std::vector<double> d;
    bool stale = false;

    double at(VertexId x, VertexId y) const { return d[static_cast<std::size_t>(x) * n + y]; }
    double& at(VertexId x, VertexId y) { return d[static_cast<std::size_t>(x) * n + y]; }
};

inline WeightedGraph WeightedGraph::build(std::vector<Edge> edge_list, std::size_t vertex_count) {
    WeightedGraph g;
    g.adjacency_.assign(vertex_count, {});
    g.edges_.reserve(edge_list.size());
    for (Edge e : edge_list) {
        if (e.u >= vertex_count || e.v >= vertex_count)
            throw input_error("edge endpoint out of range");
        if (e.u == e.v)
            throw self_loop_error("self-loop at vertex " + std::to_string(e.u));
        if (!(e.weight > 0.0))
            throw non_positive_weight_error("non-positive weight " + std::to_string(e.weight) +
                                            " on edge (" + std::to_string(e.u) + ", " +
                                            std::to_string(e.v) + ")");
        if (e.u > e.v) std::swap(e.u, e.v);
        g.edges_.push_back(e);
    }
    std::vector<std::pair<VertexId, VertexId>> seen;
    seen.reserve(g.edges_.size());
    for (const Edge& e : g.edges_) seen.emplace_back(e.u, e.v);
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 1; i < seen.size(); ++i)
        if (seen[i] == seen[i - 1])
            throw duplicate_edge_error("duplicate edge (" + std::to_string(seen[i].first) + ", " +
                                       std::to_string(seen[i].second) + ")");
    for (EdgeId i = 0; i < g.edges_.size(); ++i) {
        const Edge& e = g.edges_[i];
        g.adjacency_[e.u].push_back({e.v, i});
        g.adjacency_[e.v].push_back({e.u, i});
    }

    if (vertex_count > 0) {
        std::vector<char> visited(vertex_count, 0);
        std::vector<VertexId> stack{0};
        visited[0] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            VertexId x = stack.back();
            stack.pop_back();
            for (const AdjacencyEntry& a : g.adjacency_[x]) {
                if (!visited[a.to]) {
                    visited[a.to] = 1;
                    ++reached;
                    stack.push_back(a.to);
                }
            }
        }
        if (reached != vertex_count)
            throw disconnected_error("graph is disconnected (" + std::to_string(reached) + " of " +
                                     std::to_string(vertex_count) + " vertices reachable)");
    }
    return g;
}

inline EdgeId WeightedGraph::edge_between(VertexId x, VertexId y) const {
    if (x < adjacency_.size())
        for (const AdjacencyEntry& a : adjacency_[x])
            if (a.to == y) return a.edge;
    throw edge_not_in_graph_error("no edge between " + std::to_string(x) + " and " +
                                  std::to_string(y));
}

inline void WeightedGraph::set_weights(const std::vector<double>& w) {
    if (w.size() != edges_.size()) throw internal_error("weight vector size mismatch");
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0))
            throw non_positive_weight_error("non-positive weight in set_weights");
        edges_[i].weight = w[i];
    }
}

// Builds a graph from raw (u, v, weight) triples with dense 0-based vertex
// ids inferred from the largest endpoint.
inline WeightedGraph build_graph(const std::vector<std::tuple<VertexId, VertexId, double>>& triples) {
    std::vector<Edge> edges;
    edges.reserve(triples.size());
    VertexId max_v = 0;
    for (const auto& [u, v, w] : triples) {
        edges.push_back({u, v, w});
        max_v = std::max({max_v, u, v});
    }
    const std::size_t n = triples.empty() ? 0 : static_cast<std::size_t>(max_v) + 1;
    return WeightedGraph::build(std::move(edges), n);
}

// Single-source Dijkstra; distances written into `dist` (size n).
inline void dijkstra(const WeightedGraph& g, VertexId source, double* dist) {
    const std::size_t n = g.vertex_count();
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) dist[i] = inf;
    dist[source] = 0.0;
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    pq.push({0.0, source});
    while (!pq.empty()) {
        auto [dx, x] = pq.top();
        pq.pop();
        if (dx > dist[x]) continue;
        for (const AdjacencyEntry& a : g.neighbors(x)) {
            const double cand = dx + g.weight(a.edge);
            if (cand < dist[a.to]) {
                dist[a.to] = cand;
                pq.push({cand, a.to});
            }
        }
    }
}

// Exact all-pairs shortest-path distances under the current weights (Dijkstra
// from every source; sources run in parallel).
inline DistanceMatrix shortest_distances(const WeightedGraph& g) {
    DistanceMatrix m;
    m.n = g.vertex_count();
    m.d.assign(m.n * m.n, 0.0);
    parallel_for(m.n, [&](std::size_t s) {
        dijkstra(g, static_cast<VertexId>(s), m.d.data() + s * m.n);
    }, 48);
    // exact symmetry: summation order differs per source, so mirror the
    // row computed from the smaller index
    for (std::size_t x = 0; x < m.n; ++x)
        for (std::size_t y = x + 1; y < m.n; ++y) m.d[y * m.n + x] = m.d[x * m.n + y];
    return m;
}

// Shortest-path distance between the endpoints of an edge. Always <= the
// edge's own weight; strictly smaller when a detour is shorter.
inline double rho(const WeightedGraph& g, const DistanceMatrix& d, EdgeId e) {
    if (e >= g.edge_count()) throw edge_not_in_graph_error("edge index out of range");
    const Edge& ed = g.edge(e);
    return d.at(ed.u, ed.v);
}

// Connected components of the subgraph that survives after deleting the
// edges flagged in `removed` (indexed by EdgeId). Components are listed by
// their smallest vertex, vertices ascending, so the output is independent of
// edge enumeration order.
inline std::vector<std::vector<VertexId>> connected_components(const WeightedGraph& g,
                                                               const std::vector<char>& removed) {
    const std::size_t n = g.vertex_count();
    std::vector<VertexId> comp(n, kNoVertex);
    std::vector<std::vector<VertexId>> out;
    std::vector<VertexId> stack;
    for (VertexId s = 0; s < n; ++s) {
        if (comp[s] != kNoVertex) continue;
        const VertexId id = static_cast<VertexId>(out.size());
        out.emplace_back();
        comp[s] = id;
        stack.push_back(s);
        while (!stack.empty()) {
            VertexId x = stack.back();
            stack.pop_back();
            out[id].push_back(x);
            for (const AdjacencyEntry& a : g.neighbors(x)) {
                if (a.edge < removed.size() && removed[a.edge]) continue;
                if (comp[a.to] == kNoVertex) {
                    comp[a.to] = id;
                    stack.push_back(a.to);
                }
            }
        }
        std::sort(out[id].begin(), out[id].end());
    }
    return out;
}

inline std::vector<std::vector<VertexId>> connected_components(const WeightedGraph& g) {
    return connected_components(g, std::vector<char>(g.edge_count(), 0));
}

} // namespace ricciflow
