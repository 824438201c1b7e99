#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ricciflow/errors.hpp"
#include "ricciflow/graph.hpp"
#include "ricciflow/measure.hpp"

namespace ricciflow {

// One cell of an optimal coupling: `mass` moved from mu1's support vertex
// `from` to mu2's support vertex `to`.
struct PlanEntry {
    VertexId from;
    VertexId to;
    double mass;
};

// Exact solution of the transportation problem between two measures under
// the graph metric: optimal cost, an optimal coupling, and the dual
// potentials certifying optimality (phi(u) + psi(v) <= d(u,v) on all support
// pairs, with equality on every cell that carries mass).
struct TransportResult {
    double cost = 0.0;
    std::vector<PlanEntry> plan;
    std::vector<VertexId> support_u, support_v;
    std::vector<double> dual_u, dual_v;

    static constexpr double kGapTolerance = 1e-9;

    double dual_objective(const ProbabilityMeasure& mu1, const ProbabilityMeasure& mu2) const {
        double s = 0.0;
        for (std::size_t i = 0; i < support_u.size(); ++i) s += mu1.mass_at(support_u[i]) * dual_u[i];
        for (std::size_t j = 0; j < support_v.size(); ++j) s += mu2.mass_at(support_v[j]) * dual_v[j];
        return s;
    }
};

namespace detail {

constexpr double kMassEps = 1e-15;  // supply/demand below this is dust
constexpr double kFlowEps = 1e-13;  // reverse arcs need at least this much flow

// Successive-shortest-path min-cost flow on the dense bipartite support
// graph. Supplies and demands are real masses; shared mass at a common
// vertex is pre-matched on the zero-cost diagonal arc before augmenting,
// which keeps the reduced-cost invariant intact (those arcs are tight under
// the all-zero initial potentials).
class TransportSolver {
  public:
    TransportSolver(const DistanceMatrix& d, const ProbabilityMeasure& mu1,
                    const ProbabilityMeasure& mu2)
        : d_(d), rows_(mu1.support.size()), cols_(mu2.support.size()) {
        row_vertex_.reserve(rows_);
        col_vertex_.reserve(cols_);
        supply_.reserve(rows_);
        demand_.reserve(cols_);
        for (const auto& [v, m] : mu1.support) {
            row_vertex_.push_back(v);
            supply_.push_back(m);
        }
        for (const auto& [v, m] : mu2.support) {
            col_vertex_.push_back(v);
            demand_.push_back(m);
        }
        flow_.assign(rows_ * cols_, 0.0);
        pot_.assign(rows_ + cols_, 0.0);
        seed_common_mass();
    }

    void solve() {
        const std::size_t max_rounds = 64 + 50 * (rows_ + cols_);
        std::size_t rounds = 0;
        while (has_pending_supply() && has_pending_demand()) {
            if (++rounds > max_rounds)
                throw internal_error("transport solver failed to converge");
            if (!augment_once()) break;
        }
    }

    TransportResult result() const {
        TransportResult r;
        r.support_u = row_vertex_;
        r.support_v = col_vertex_;
        r.dual_u.resize(rows_);
        r.dual_v.resize(cols_);
        for (std::size_t i = 0; i < rows_; ++i) r.dual_u[i] = -pot_[i];
        for (std::size_t j = 0; j < cols_; ++j) r.dual_v[j] = pot_[rows_ + j];
        double cost = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                const double f = flow_[i * cols_ + j];
                if (f > 0.0) {
                    r.plan.push_back({row_vertex_[i], col_vertex_[j], f});
                    cost += f * cost_of(i, j);
                }
            }
        r.cost = cost;
        return r;
    }

  private:
    double cost_of(std::size_t i, std::size_t j) const {
        return d_.at(row_vertex_[i], col_vertex_[j]);
    }

    void seed_common_mass() {
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (row_vertex_[i] == col_vertex_[j]) {
                    const double m = std::min(supply_[i], demand_[j]);
                    if (m > 0.0) {
                        flow_[i * cols_ + j] = m;
                        supply_[i] -= m;
                        demand_[j] -= m;
                    }
                }
    }

    bool has_pending_supply() const {
        for (double s : supply_)
            if (s > kMassEps) return true;
        return false;
    }

    bool has_pending_demand() const {
        for (double t : demand_)
            if (t > kMassEps) return true;
        return false;
    }

    // One Dijkstra pass over reduced costs from all rows with remaining
    // supply; pushes the bottleneck along the cheapest path to a column with
    // remaining demand. Returns false when no augmenting path exists.
    bool augment_once() {
        const std::size_t nn = rows_ + cols_;
        constexpr double inf = std::numeric_limits<double>::infinity();
        std::vector<double> dist(nn, inf);
        std::vector<std::uint32_t> parent(nn, UINT32_MAX);
        std::vector<char> settled(nn, 0);
        for (std::size_t i = 0; i < rows_; ++i)
            if (supply_[i] > kMassEps) dist[i] = 0.0;

        std::size_t target = SIZE_MAX;
        while (true) {
            std::size_t best = SIZE_MAX;
            double best_d = inf;
            for (std::size_t v = 0; v < nn; ++v)
                if (!settled[v] && dist[v] < best_d) {
                    best_d = dist[v];
                    best = v;
                }
            if (best == SIZE_MAX) break;
            settled[best] = 1;
            if (best >= rows_ && demand_[best - rows_] > kMassEps) {
                target = best;
                break;
            }
            if (best < rows_) {
                const std::size_t i = best;
                for (std::size_t j = 0; j < cols_; ++j) {
                    const std::size_t v = rows_ + j;
                    if (settled[v]) continue;
                    const double rc = std::max(0.0, cost_of(i, j) + pot_[i] - pot_[v]);
                    if (dist[i] + rc < dist[v]) {
                        dist[v] = dist[i] + rc;
                        parent[v] = static_cast<std::uint32_t>(i);
                    }
                }
            } else {
                const std::size_t j = best - rows_;
                for (std::size_t i = 0; i < rows_; ++i) {
                    if (settled[i] || flow_[i * cols_ + j] <= kFlowEps) continue;
                    const double rc = std::max(0.0, -cost_of(i, j) + pot_[rows_ + j] - pot_[i]);
                    if (dist[best] + rc < dist[i]) {
                        dist[i] = dist[best] + rc;
                        parent[i] = static_cast<std::uint32_t>(rows_ + j);
                    }
                }
            }
        }
        if (target == SIZE_MAX) return false;

        const double dt = dist[target];
        for (std::size_t v = 0; v < nn; ++v) pot_[v] += std::min(dist[v], dt);

        // bottleneck over the path: source supply, target demand, reverse arcs
        double delta = demand_[target - rows_];
        for (std::size_t v = target; parent[v] != UINT32_MAX; v = parent[v]) {
            const std::size_t p = parent[v];
            if (v < rows_) delta = std::min(delta, flow_[v * cols_ + (p - rows_)]);
        }
        std::size_t origin = target;
        while (parent[origin] != UINT32_MAX) origin = parent[origin];
        delta = std::min(delta, supply_[origin]);
        if (delta <= kMassEps) {
            // reverse arcs carry at least kFlowEps, so only dust supplies or
            // demands land here; drop them rather than loop forever
            if (supply_[origin] <= 2 * kMassEps) supply_[origin] = 0.0;
            if (demand_[target - rows_] <= 2 * kMassEps) demand_[target - rows_] = 0.0;
            return true;
        }

        for (std::size_t v = target; parent[v] != UINT32_MAX; v = parent[v]) {
            const std::size_t p = parent[v];
            if (v >= rows_) {
                flow_[p * cols_ + (v - rows_)] += delta;   // row p -> col v
            } else {
                double& f = flow_[v * cols_ + (p - rows_)]; // reverse of row v -> col p
                f -= delta;
                if (f < kMassEps) f = 0.0;
            }
        }
        supply_[origin] -= delta;
        demand_[target - rows_] -= delta;
        return true;
    }

    const DistanceMatrix& d_;
    std::size_t rows_, cols_;
    std::vector<VertexId> row_vertex_, col_vertex_;
    std::vector<double> supply_, demand_;
    std::vector<double> flow_;
    std::vector<double> pot_;
};

} // namespace detail

// Exact Wasserstein distance between two finitely supported measures under
// the ground metric d, with an optimal coupling and dual certificate.
inline TransportResult wasserstein(const DistanceMatrix& d, const ProbabilityMeasure& mu1,
                                   const ProbabilityMeasure& mu2) {
    const double m1 = mu1.total_mass();
    const double m2 = mu2.total_mass();
    if (std::fabs(m1 - m2) > 1e-9)
        throw unbalanced_masses_error("measures carry different total mass: " +
                                      std::to_string(m1) + " vs " + std::to_string(m2));

    detail::TransportSolver solver(d, mu1, mu2);
    solver.solve();
    return solver.result();
}

// True iff the result's potentials are dual feasible and the primal/dual gap
// is within tolerance; every wasserstein() result must satisfy this.
inline bool verify_duality(const TransportResult& r, const DistanceMatrix& d,
                           const ProbabilityMeasure& mu1, const ProbabilityMeasure& mu2) {
    const double tol = TransportResult::kGapTolerance * (1.0 + std::fabs(r.cost));
    for (std::size_t i = 0; i < r.support_u.size(); ++i)
        for (std::size_t j = 0; j < r.support_v.size(); ++j)
            if (r.dual_u[i] + r.dual_v[j] > d.at(r.support_u[i], r.support_v[j]) + tol)
                return false;
    double primal = 0.0;
    for (const PlanEntry& p : r.plan) {
        if (p.mass < -1e-12) return false;
        primal += p.mass * d.at(p.from, p.to);
    }
    return std::fabs(primal - r.dual_objective(mu1, mu2)) <= tol;
}

} // namespace ricciflow
