#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ricciflow/errors.hpp"
#include "ricciflow/flow.hpp"
#include "ricciflow/graph.hpp"
#include "ricciflow/parallel.hpp"

namespace ricciflow {

// Vertex partition with contiguous labels 0..K-1.
struct Partition {
    std::vector<int> labels;

    std::size_t size() const { return labels.size(); }

    int community_count() const {
        int k = 0;
        for (int l : labels) k = std::max(k, l + 1);
        return k;
    }

    // Renumbers arbitrary labels to 0..K-1 in first-seen order.
    static Partition from_labels(std::vector<int> raw) {
        std::vector<int> remap;
        Partition p;
        p.labels.reserve(raw.size());
        for (int l : raw) {
            auto it = std::find(remap.begin(), remap.end(), l);
            if (it == remap.end()) {
                remap.push_back(l);
                p.labels.push_back(static_cast<int>(remap.size()) - 1);
            } else {
                p.labels.push_back(static_cast<int>(it - remap.begin()));
            }
        }
        return p;
    }

    static Partition from_components(const std::vector<std::vector<VertexId>>& comps,
                                     std::size_t n) {
        Partition p;
        p.labels.assign(n, -1);
        for (std::size_t k = 0; k < comps.size(); ++k)
            for (VertexId v : comps[k]) p.labels[v] = static_cast<int>(k);
        return p;
    }
};

// I x J contingency counts between two partitions of the same vertex set.
struct ContingencyTable {
    std::size_t rows = 0, cols = 0;
    std::vector<long> counts;     // rows x cols
    std::vector<long> row_sums;   // c_i
    std::vector<long> col_sums;   // d_j
    long total = 0;

    long at(std::size_t i, std::size_t j) const { return counts[i * cols + j]; }

    // True iff the two partitions are identical up to relabeling: exactly one
    // nonzero cell in every row and every column.
    bool identical_partitions() const {
        for (std::size_t i = 0; i < rows; ++i) {
            long nonzero = 0;
            for (std::size_t j = 0; j < cols; ++j)
                if (at(i, j) > 0) ++nonzero;
            if (nonzero != 1) return false;
        }
        for (std::size_t j = 0; j < cols; ++j) {
            long nonzero = 0;
            for (std::size_t i = 0; i < rows; ++i)
                if (at(i, j) > 0) ++nonzero;
            if (nonzero != 1) return false;
        }
        return true;
    }
};

inline ContingencyTable contingency(const Partition& p1, const Partition& p2) {
    if (p1.size() != p2.size())
        throw vertex_set_mismatch_error("partitions cover different vertex sets (" +
                                        std::to_string(p1.size()) + " vs " +
                                        std::to_string(p2.size()) + ")");
    ContingencyTable t;
    t.rows = static_cast<std::size_t>(p1.community_count());
    t.cols = static_cast<std::size_t>(p2.community_count());
    t.counts.assign(t.rows * t.cols, 0);
    t.row_sums.assign(t.rows, 0);
    t.col_sums.assign(t.cols, 0);
    for (std::size_t v = 0; v < p1.size(); ++v) {
        ++t.counts[static_cast<std::size_t>(p1.labels[v]) * t.cols + p2.labels[v]];
        ++t.row_sums[p1.labels[v]];
        ++t.col_sums[p2.labels[v]];
        ++t.total;
    }
    return t;
}

namespace detail {
inline double choose2(double k) { return k * (k - 1.0) / 2.0; }
} // namespace detail

// Adjusted Rand index in [-1, 1]. When the adjustment denominator vanishes
// (both partitions trivial) the value is 1 for identical partitions and 0
// otherwise.
inline double ari(const ContingencyTable& t) {
    using detail::choose2;
    double sum_ij = 0.0;
    for (long c : t.counts) sum_ij += choose2(static_cast<double>(c));
    double sum_i = 0.0, sum_j = 0.0;
    for (long c : t.row_sums) sum_i += choose2(static_cast<double>(c));
    for (long c : t.col_sums) sum_j += choose2(static_cast<double>(c));
    const double pairs = choose2(static_cast<double>(t.total));
    if (pairs <= 0.0) return 1.0;
    const double expected = sum_i * sum_j / pairs;
    const double denom = 0.5 * (sum_i + sum_j) - expected;
    if (denom == 0.0) return t.identical_partitions() ? 1.0 : 0.0;
    return (sum_ij - expected) / denom;
}

// Normalized mutual information 2 I(X;Y) / (H(X) + H(Y)) in natural log,
// with 0 log 0 read as 0. If both partitions are single-class the value is 1
// when identical and 0 otherwise.
inline double nmi(const ContingencyTable& t) {
    const double n = static_cast<double>(t.total);
    if (n <= 0.0) return 1.0;
    double hx = 0.0, hy = 0.0;
    for (long c : t.row_sums)
        if (c > 0) hx -= (c / n) * std::log(c / n);
    for (long c : t.col_sums)
        if (c > 0) hy -= (c / n) * std::log(c / n);
    if (hx + hy == 0.0) return t.identical_partitions() ? 1.0 : 0.0;
    double info = 0.0;
    for (std::size_t i = 0; i < t.rows; ++i)
        for (std::size_t j = 0; j < t.cols; ++j) {
            const long m = t.at(i, j);
            if (m > 0)
                info += (m / n) * std::log(m * n / (static_cast<double>(t.row_sums[i]) *
                                                    static_cast<double>(t.col_sums[j])));
        }
    return 2.0 * info / (hx + hy);
}

namespace detail {

// Newman modularity of `p` on the subgraph of g that survives `removed`
// (unweighted edge counts and degrees). An empty surviving edge set yields 0.
inline double modularity_impl(const WeightedGraph& g, const std::vector<char>& removed,
                              const Partition& p, double beta) {
    const int k = p.community_count();
    std::vector<long> intra(k, 0);
    std::vector<long> degree(k, 0);
    long m = 0;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (e < removed.size() && removed[e]) continue;
        ++m;
        const Edge& ed = g.edge(e);
        ++degree[p.labels[ed.u]];
        ++degree[p.labels[ed.v]];
        if (p.labels[ed.u] == p.labels[ed.v]) ++intra[p.labels[ed.u]];
    }
    if (m == 0) return 0.0;
    double q = 0.0;
    for (int c = 0; c < k; ++c) {
        const double share = static_cast<double>(degree[c]) / (2.0 * m);
        q += static_cast<double>(intra[c]) / m - beta * share * share;
    }
    return q;
}

} // namespace detail

// Modularity of a partition on the given graph's topology, ignoring weights.
inline double modularity(const WeightedGraph& g, const Partition& p, double beta = 1.0) {
    if (p.size() != g.vertex_count())
        throw vertex_set_mismatch_error("partition does not cover the vertex set");
    return detail::modularity_impl(g, {}, p, beta);
}

// Removes every edge whose evolved weight exceeds the cutoff; the surviving
// connected components are the detected communities.
inline Partition surgery(const WeightedGraph& g, const std::vector<double>& weights,
                         double cutoff) {
    if (weights.size() != g.edge_count()) throw internal_error("weight vector size mismatch");
    std::vector<char> removed(g.edge_count(), 0);
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        if (weights[e] > cutoff) removed[e] = 1;
    return Partition::from_components(connected_components(g, removed), g.vertex_count());
}

struct SweepRow {
    double cutoff = 0.0;
    int communities = 0;
    double modularity = 0.0;
    std::optional<double> ari;
    std::optional<double> nmi;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::size_t best_by_modularity = 0;
    std::size_t best_by_ari = 0;  // meaningful only with ground truth
    std::size_t best_by_nmi = 0;
};

// Evaluates surgery at `resolution` cutoffs linearly spaced from w_max down
// to w_min (both endpoints included). Modularity is computed on the
// post-surgery subgraph, the graph the algorithm actually holds once the
// heavy edges are gone; ARI/NMI compare against the ground truth when one is
// supplied. Rows are independent and run in parallel.
inline SweepResult sweep(const WeightedGraph& g, const std::vector<double>& weights,
                         const std::optional<Partition>& ground_truth, int resolution = 200) {
    if (resolution < 2) throw input_error("sweep resolution must be at least 2");
    if (ground_truth && ground_truth->size() != g.vertex_count())
        throw vertex_set_mismatch_error("ground truth does not cover the vertex set");
    const double w_max = *std::max_element(weights.begin(), weights.end());
    const double w_min = *std::min_element(weights.begin(), weights.end());

    SweepResult out;
    out.rows.resize(static_cast<std::size_t>(resolution));
    parallel_for(out.rows.size(), [&](std::size_t i) {
        const double frac = static_cast<double>(i) / (resolution - 1);
        const double cutoff = w_max - frac * (w_max - w_min);
        std::vector<char> removed(g.edge_count(), 0);
        for (EdgeId e = 0; e < g.edge_count(); ++e)
            if (weights[e] > cutoff) removed[e] = 1;
        const Partition p = Partition::from_components(connected_components(g, removed),
                                                       g.vertex_count());
        SweepRow row;
        row.cutoff = cutoff;
        row.communities = p.community_count();
        row.modularity = detail::modularity_impl(g, removed, p, 1.0);
        if (ground_truth) {
            const ContingencyTable t = contingency(*ground_truth, p);
            row.ari = ari(t);
            row.nmi = nmi(t);
        }
        out.rows[i] = row;
    }, 32);

    for (std::size_t i = 1; i < out.rows.size(); ++i) {
        if (out.rows[i].modularity > out.rows[out.best_by_modularity].modularity)
            out.best_by_modularity = i;
        if (ground_truth) {
            if (*out.rows[i].ari > *out.rows[out.best_by_ari].ari) out.best_by_ari = i;
            if (*out.rows[i].nmi > *out.rows[out.best_by_nmi].nmi) out.best_by_nmi = i;
        }
    }
    return out;
}

} // namespace ricciflow
