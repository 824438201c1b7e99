#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ricciflow/errors.hpp"
#include "ricciflow/graph.hpp"

namespace ricciflow {

// Laziness parameter of the random walks. The valid range is [0, 1); the
// endpoint 1 turns every measure into a point mass and freezes all flows, so
// it is only admitted through the explicit override.
class Alpha {
  public:
    static Alpha checked(double value, bool allow_one = false) {
        const double hi = allow_one ? 1.0 : 1.0 - 1e-15;
        if (!(value >= 0.0) || value > hi)
            throw input_error("alpha must lie in [0, 1); got " + std::to_string(value) +
                              (allow_one ? " (alpha = 1 allowed by override)" : ""));
        return Alpha(value);
    }

    double value() const { return value_; }

  private:
    explicit Alpha(double v) : value_(v) {}
    double value_;
};

// Finitely supported probability measure on the vertex set: sorted sparse
// (vertex, mass) pairs with unit total mass. Entries below 1e-15 are dropped
// to keep transport supports tight.
struct ProbabilityMeasure {
    std::vector<std::pair<VertexId, double>> support;

    double total_mass() const {
        double s = 0.0;
        for (const auto& [v, m] : support) s += m;
        return s;
    }

    double mass_at(VertexId x) const {
        auto it = std::lower_bound(support.begin(), support.end(), x,
                                   [](const auto& p, VertexId v) { return p.first < v; });
        return (it != support.end() && it->first == x) ? it->second : 0.0;
    }
};

enum class WalkKind { one_step, two_step };

namespace detail {

inline ProbabilityMeasure finalize_measure(std::vector<std::pair<VertexId, double>> entries) {
    std::sort(entries.begin(), entries.end());
    ProbabilityMeasure mu;
    mu.support.reserve(entries.size());
    for (const auto& [v, m] : entries) {
        if (!mu.support.empty() && mu.support.back().first == v)
            mu.support.back().second += m;
        else
            mu.support.emplace_back(v, m);
    }
    mu.support.erase(std::remove_if(mu.support.begin(), mu.support.end(),
                                    [](const auto& p) { return p.second < 1e-15; }),
                     mu.support.end());
    return mu;
}

} // namespace detail

// One-step alpha-lazy random walk from x: mass alpha stays at x, the rest is
// spread over the neighbors proportionally to edge weight.
inline ProbabilityMeasure one_step_measure(const WeightedGraph& g, VertexId x, Alpha a) {
    const double alpha = a.value();
    double strength = 0.0;
    for (const AdjacencyEntry& e : g.neighbors(x)) strength += g.weight(e.edge);
    std::vector<std::pair<VertexId, double>> entries;
    entries.reserve(g.degree(x) + 1);
    entries.emplace_back(x, alpha);
    for (const AdjacencyEntry& e : g.neighbors(x))
        entries.emplace_back(e.to, (1.0 - alpha) * g.weight(e.edge) / strength);
    return detail::finalize_measure(std::move(entries));
}

// Two-step alpha-lazy random walk from x. Mass alpha stays at x, (1-alpha) *
// alpha lands on direct neighbors, and (1-alpha)^2 travels through each
// neighbor y onto the strict two-hop frontier, weighted by y's edges into
// that frontier. When y has no frontier neighbor the mass routed through y
// stays at y, which keeps the total at exactly 1 and is continuous in the
// weights.
inline ProbabilityMeasure two_step_measure(const WeightedGraph& g, VertexId x, Alpha a) {
    const double alpha = a.value();
    const double one_minus = 1.0 - alpha;

    double strength = 0.0;
    for (const AdjacencyEntry& e : g.neighbors(x)) strength += g.weight(e.edge);

    // frontier = N_{2,x} \ N_x: vertices two hops out that are not direct
    // neighbors of x (and not x itself).
    std::vector<char> is_neighbor(g.vertex_count(), 0);
    for (const AdjacencyEntry& e : g.neighbors(x)) is_neighbor[e.to] = 1;
    std::vector<char> in_frontier(g.vertex_count(), 0);
    for (const AdjacencyEntry& ey : g.neighbors(x))
        for (const AdjacencyEntry& ez : g.neighbors(ey.to))
            if (ez.to != x && !is_neighbor[ez.to]) in_frontier[ez.to] = 1;

    std::vector<std::pair<VertexId, double>> entries;
    entries.emplace_back(x, alpha);
    for (const AdjacencyEntry& ey : g.neighbors(x)) {
        const VertexId y = ey.to;
        const double via_y = one_minus * one_minus * g.weight(ey.edge) / strength;
        entries.emplace_back(y, one_minus * alpha * g.weight(ey.edge) / strength);

        double frontier_strength = 0.0;
        for (const AdjacencyEntry& ez : g.neighbors(y))
            if (in_frontier[ez.to]) frontier_strength += g.weight(ez.edge);
        if (frontier_strength > 0.0) {
            for (const AdjacencyEntry& ez : g.neighbors(y))
                if (in_frontier[ez.to])
                    entries.emplace_back(ez.to, via_y * g.weight(ez.edge) / frontier_strength);
        } else {
            // nowhere new to go: the walk rests at y
            entries.emplace_back(y, via_y);
        }
    }
    return detail::finalize_measure(std::move(entries));
}

inline ProbabilityMeasure measure_for_variant(const WeightedGraph& g, VertexId x, Alpha a,
                                              WalkKind kind) {
    return kind == WalkKind::one_step ? one_step_measure(g, x, a) : two_step_measure(g, x, a);
}

} // namespace ricciflow
