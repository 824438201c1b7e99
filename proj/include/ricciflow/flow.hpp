#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ricciflow/errors.hpp"
#include "ricciflow/graph.hpp"
#include "ricciflow/measure.hpp"
#include "ricciflow/parallel.hpp"
#include "ricciflow/transport.hpp"

namespace ricciflow {

enum class FlowVariant { one_evol, qn1_evol, two_evol, qn2_evol };

inline WalkKind walk_kind(FlowVariant v) {
    return (v == FlowVariant::one_evol || v == FlowVariant::qn1_evol) ? WalkKind::one_step
                                                                      : WalkKind::two_step;
}

inline bool quasi_normalized(FlowVariant v) {
    return v == FlowVariant::qn1_evol || v == FlowVariant::qn2_evol;
}

inline const char* variant_name(FlowVariant v) {
    switch (v) {
        case FlowVariant::one_evol: return "one_evol";
        case FlowVariant::qn1_evol: return "qn1_evol";
        case FlowVariant::two_evol: return "two_evol";
        case FlowVariant::qn2_evol: return "qn2_evol";
    }
    return "?";
}

inline FlowVariant variant_from_name(const std::string& s) {
    if (s == "one_evol") return FlowVariant::one_evol;
    if (s == "qn1_evol") return FlowVariant::qn1_evol;
    if (s == "two_evol") return FlowVariant::two_evol;
    if (s == "qn2_evol") return FlowVariant::qn2_evol;
    throw input_error("unknown flow variant '" + s +
                      "' (expected one_evol|qn1_evol|two_evol|qn2_evol)");
}

struct FlowConfig {
    Alpha alpha = Alpha::checked(0.5);
    double step = 0.01;
    int iterations = 20;
    FlowVariant variant = FlowVariant::one_evol;
    // The clamp floor is positivity_floor_scale * (minimum initial weight).
    double positivity_floor_scale = 1e-8;
    bool record_history = false;

    void validate() const {
        if (!(step > 0.0)) throw input_error("step size must be positive");
        if (iterations < 0) throw input_error("iteration count must be non-negative");
        if (!(positivity_floor_scale > 0.0)) throw input_error("positivity floor must be positive");
    }
};

// Per-edge drift data for one iteration: W(mu_x, mu_y), the graph distance
// rho_e = d(x,y), and the curvature 1 - W/rho reported as a diagnostic.
struct EdgeDrift {
    EdgeId edge = 0;
    double wasserstein = 0.0;
    double distance = 0.0;
    double curvature = 0.0;

    double plain_drift() const { return wasserstein - distance; }
};

struct IterationRecord {
    std::vector<double> weights;     // after the update
    std::vector<double> curvatures;  // computed from the pre-update weights
};

struct FlowState {
    std::vector<double> weights;
    int iteration = 0;
    double positivity_floor = 0.0;
    long clamp_events = 0;
    std::vector<IterationRecord> history;
};

namespace detail {

inline EdgeDrift drift_from_measures(const DistanceMatrix& d, const WeightedGraph& g, EdgeId e,
                                     const ProbabilityMeasure& mu_x,
                                     const ProbabilityMeasure& mu_y) {
    EdgeDrift out;
    out.edge = e;
    const Edge& ed = g.edge(e);
    out.distance = d.at(ed.u, ed.v);
    out.wasserstein = wasserstein(d, mu_x, mu_y).cost;
    out.curvature = out.distance > 0.0 ? 1.0 - out.wasserstein / out.distance : 0.0;
    return out;
}

} // namespace detail

// Drift of a single edge under the configured variant's measure family.
// Distances must be current for the graph's present weights.
inline EdgeDrift edge_drift(const WeightedGraph& g, const DistanceMatrix& d, EdgeId e,
                            const FlowConfig& cfg) {
    if (e >= g.edge_count()) throw edge_not_in_graph_error("edge index out of range");
    if (d.stale) throw internal_error("edge_drift called with stale distances");
    const Edge& ed = g.edge(e);
    const WalkKind kind = walk_kind(cfg.variant);
    const ProbabilityMeasure mu_x = measure_for_variant(g, ed.u, cfg.alpha, kind);
    const ProbabilityMeasure mu_y = measure_for_variant(g, ed.v, cfg.alpha, kind);
    return detail::drift_from_measures(d, g, e, mu_x, mu_y);
}

// All drifts for one iteration, computed from a single frozen weight
// snapshot. Per-vertex measures and per-edge transport problems run in
// parallel; each result lands in its own slot, so output is deterministic.
inline std::vector<EdgeDrift> all_edge_drifts(const WeightedGraph& g, const DistanceMatrix& d,
                                              const FlowConfig& cfg) {
    const WalkKind kind = walk_kind(cfg.variant);
    std::vector<ProbabilityMeasure> measures(g.vertex_count());
    parallel_for(g.vertex_count(), [&](std::size_t x) {
        measures[x] = measure_for_variant(g, static_cast<VertexId>(x), cfg.alpha, kind);
    }, 128);
    std::vector<EdgeDrift> drifts(g.edge_count());
    parallel_for(g.edge_count(), [&](std::size_t e) {
        const Edge& ed = g.edge(static_cast<EdgeId>(e));
        drifts[e] = detail::drift_from_measures(d, g, static_cast<EdgeId>(e), measures[ed.u],
                                                measures[ed.v]);
    }, 48);
    return drifts;
}

// w_e <- max(w_e + s * (W_e - rho_e), floor), applied simultaneously.
inline void step_plain(FlowState& state, const std::vector<EdgeDrift>& drifts, double s) {
    for (const EdgeDrift& dr : drifts) {
        double w = state.weights[dr.edge] + s * dr.plain_drift();
        if (w < state.positivity_floor) {
            w = state.positivity_floor;
            ++state.clamp_events;
        }
        state.weights[dr.edge] = w;
    }
    ++state.iteration;
}

// Quasi-normalized update: the plain drift is corrected by the total drift
// divided by the total weight, scaled by each edge's distance.
inline void step_quasi_normalized(FlowState& state, const std::vector<EdgeDrift>& drifts,
                                  double s) {
    double total_drift = 0.0;
    for (const EdgeDrift& dr : drifts) total_drift += dr.plain_drift();
    double total_weight = 0.0;
    for (double w : state.weights) total_weight += w;
    if (!(total_weight > 0.0)) throw zero_total_weight_error("total weight vanished");
    const double correction = total_drift / total_weight;
    for (const EdgeDrift& dr : drifts) {
        double w = state.weights[dr.edge] + s * (dr.plain_drift() - correction * dr.distance);
        if (w < state.positivity_floor) {
            w = state.positivity_floor;
            ++state.clamp_events;
        }
        state.weights[dr.edge] = w;
    }
    ++state.iteration;
}

// Runs the discrete evolution for cfg.iterations steps: each iteration
// recomputes distances from scratch, evaluates every edge drift against that
// frozen snapshot, then updates all weights simultaneously.
inline FlowState run_flow(const WeightedGraph& g, const FlowConfig& cfg) {
    cfg.validate();
    WeightedGraph work = g;
    FlowState state;
    state.weights = work.weights();
    state.positivity_floor = cfg.positivity_floor_scale * work.min_weight();
    if (cfg.record_history) state.history.reserve(static_cast<std::size_t>(cfg.iterations));

    for (int it = 0; it < cfg.iterations; ++it) {
        work.set_weights(state.weights);
        const DistanceMatrix d = shortest_distances(work);
        const std::vector<EdgeDrift> drifts = all_edge_drifts(work, d, cfg);
        if (quasi_normalized(cfg.variant))
            step_quasi_normalized(state, drifts, cfg.step);
        else
            step_plain(state, drifts, cfg.step);
        if (cfg.record_history) {
            IterationRecord rec;
            rec.weights = state.weights;
            rec.curvatures.resize(drifts.size());
            for (std::size_t i = 0; i < drifts.size(); ++i)
                rec.curvatures[drifts[i].edge] = drifts[i].curvature;
            state.history.push_back(std::move(rec));
        }
    }
    return state;
}

// ---------------------------------------------------------------------------
// Closed-form reference solutions for the plain one-step flow on six small
// symmetric shapes with constant initial weight. Used as integrator oracles.

enum class OracleShape { segment, path3, triangle, square, k4, star };

inline const char* shape_name(OracleShape s) {
    switch (s) {
        case OracleShape::segment: return "segment";
        case OracleShape::path3: return "path3";
        case OracleShape::triangle: return "triangle";
        case OracleShape::square: return "square";
        case OracleShape::k4: return "k4";
        case OracleShape::star: return "star";
    }
    return "?";
}

// Exponential rate of the common edge weight, selected by the piecewise
// branch that contains alpha. The two branches agree at the knot, so either
// choice is accepted there.
inline double oracle_rate(OracleShape shape, double alpha, int star_leaves = 6) {
    if (alpha < 0.0 || alpha > 1.0)
        throw alpha_outside_branch_error("alpha " + std::to_string(alpha) +
                                         " lies outside every branch domain [0, 1]");
    switch (shape) {
        case OracleShape::segment:
            return alpha <= 0.5 ? -2.0 * alpha : 2.0 * (alpha - 1.0);
        case OracleShape::path3:
            return alpha <= 1.0 / 3.0 ? -2.0 * alpha : (alpha - 1.0);
        case OracleShape::triangle:
            return alpha <= 1.0 / 3.0 ? -(3.0 * alpha + 1.0) / 2.0 : 3.0 * (alpha - 1.0) / 2.0;
        case OracleShape::square:
            return alpha <= 1.0 / 3.0 ? -2.0 * alpha : (alpha - 1.0);
        case OracleShape::k4:
            return alpha <= 0.25 ? -(2.0 + 4.0 * alpha) / 3.0 : 4.0 * (alpha - 1.0) / 3.0;
        case OracleShape::star: {
            const double knot = 1.0 / (star_leaves + 1.0);
            return alpha <= knot ? -2.0 * alpha : 2.0 * (alpha - 1.0) / star_leaves;
        }
    }
    throw internal_error("unhandled oracle shape");
}

inline double analytic_oracle(OracleShape shape, double alpha, double t, double w0,
                              int star_leaves = 6) {
    return w0 * std::exp(oracle_rate(shape, alpha, star_leaves) * t);
}

// The matching graph instance: every edge carries weight w0.
inline WeightedGraph make_shape(OracleShape shape, double w0, int star_leaves = 6) {
    std::vector<std::tuple<VertexId, VertexId, double>> t;
    switch (shape) {
        case OracleShape::segment:
            t = {{0, 1, w0}};
            break;
        case OracleShape::path3:
            t = {{0, 1, w0}, {1, 2, w0}};
            break;
        case OracleShape::triangle:
            t = {{0, 1, w0}, {1, 2, w0}, {2, 0, w0}};
            break;
        case OracleShape::square:
            t = {{0, 1, w0}, {1, 2, w0}, {2, 3, w0}, {3, 0, w0}};
            break;
        case OracleShape::k4:
            t = {{0, 1, w0}, {0, 2, w0}, {0, 3, w0}, {1, 2, w0}, {1, 3, w0}, {2, 3, w0}};
            break;
        case OracleShape::star:
            for (int i = 1; i <= star_leaves; ++i)
                t.emplace_back(0, static_cast<VertexId>(i), w0);
            break;
    }
    return build_graph(t);
}

} // namespace ricciflow
