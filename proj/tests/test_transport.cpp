#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ricciflow/measure.hpp"
#include "ricciflow/transport.hpp"
#include "oracles.hpp"

using namespace ricciflow;

namespace {

// Plan marginals must reproduce the input masses.
void check_marginals(const TransportResult& r, const ProbabilityMeasure& mu1,
                     const ProbabilityMeasure& mu2) {
    for (const auto& [v, m] : mu1.support) {
        double row = 0.0;
        for (const PlanEntry& p : r.plan)
            if (p.from == v) row += p.mass;
        CHECK(row == doctest::Approx(m).epsilon(1e-9));
    }
    for (const auto& [v, m] : mu2.support) {
        double col = 0.0;
        for (const PlanEntry& p : r.plan)
            if (p.to == v) col += p.mass;
        CHECK(col == doctest::Approx(m).epsilon(1e-9));
    }
}

DistanceMatrix matrix_from(const std::vector<std::vector<double>>& d) {
    DistanceMatrix m;
    m.n = d.size();
    m.d.resize(m.n * m.n);
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j) m.at(i, j) = d[i][j];
    return m;
}

} // namespace

TEST_CASE("segment one-step measures: W = (1-2a) w exactly") {
    for (double w : {0.5, 1.0, 2.0}) {
        const WeightedGraph g = build_graph({{0, 1, w}});
        const DistanceMatrix d = shortest_distances(g);
        for (double a : {0.0, 0.1, 0.25, 0.5}) {
            const Alpha alpha = Alpha::checked(a);
            const ProbabilityMeasure mu_x = one_step_measure(g, 0, alpha);
            const ProbabilityMeasure mu_y = one_step_measure(g, 1, alpha);
            const TransportResult r = wasserstein(d, mu_x, mu_y);
            CHECK(std::fabs(r.cost - (1.0 - 2.0 * a) * w) <= 1e-15 * (1.0 + w));
            CHECK(verify_duality(r, d, mu_x, mu_y));
        }
    }
}

TEST_CASE("triangle one-step measures: W = |1-3a|/2 w0 on both branches") {
    const double w0 = 1.0;
    const WeightedGraph g = build_graph({{0, 1, w0}, {1, 2, w0}, {2, 0, w0}});
    const DistanceMatrix d = shortest_distances(g);
    for (double a : {0.2, 0.6}) {
        const Alpha alpha = Alpha::checked(a);
        const TransportResult r =
            wasserstein(d, one_step_measure(g, 0, alpha), one_step_measure(g, 1, alpha));
        const double expected = (a <= 1.0 / 3.0 ? (1.0 - 3.0 * a) : (3.0 * a - 1.0)) / 2.0 * w0;
        CHECK(r.cost == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("identical measures transport at zero cost with zero potentials") {
    const WeightedGraph g = build_graph({{0, 1, 1.0}, {1, 2, 2.0}});
    const DistanceMatrix d = shortest_distances(g);
    const ProbabilityMeasure mu = one_step_measure(g, 1, Alpha::checked(0.4));
    const TransportResult r = wasserstein(d, mu, mu);
    CHECK(r.cost == 0.0);
    for (double u : r.dual_u) CHECK(u == 0.0);
    for (double v : r.dual_v) CHECK(v == 0.0);
    for (const PlanEntry& p : r.plan) CHECK(p.from == p.to);
    CHECK(verify_duality(r, d, mu, mu));
}

TEST_CASE("unbalanced masses are rejected") {
    const WeightedGraph g = build_graph({{0, 1, 1.0}});
    const DistanceMatrix d = shortest_distances(g);
    ProbabilityMeasure mu1, mu2;
    mu1.support = {{0, 1.0}};
    mu2.support = {{1, 0.8}};
    CHECK_THROWS_AS(wasserstein(d, mu1, mu2), unbalanced_masses_error);
}

TEST_CASE("random instances match the transportation-polytope oracle") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<std::size_t> size_dist(1, 5);
    const int cases = 200;
    for (int rep = 0; rep < cases; ++rep) {
        const WeightedGraph g = oracles::random_connected_graph(rng, 8, 0.3);
        const DistanceMatrix d = shortest_distances(g);
        const ProbabilityMeasure mu1 = oracles::random_measure(rng, 8, size_dist(rng));
        const ProbabilityMeasure mu2 = oracles::random_measure(rng, 8, size_dist(rng));

        const TransportResult r = wasserstein(d, mu1, mu2);
        CHECK(verify_duality(r, d, mu1, mu2));
        check_marginals(r, mu1, mu2);

        std::vector<double> supply, demand;
        std::vector<std::vector<double>> cost;
        for (const auto& [v, m] : mu1.support) supply.push_back(m);
        for (const auto& [v, m] : mu2.support) demand.push_back(m);
        for (const auto& [u, mu_] : mu1.support) {
            std::vector<double> row;
            for (const auto& [v, mv_] : mu2.support) row.push_back(d.at(u, v));
            cost.push_back(row);
        }
        const double expected = oracles::transport_min_cost(supply, demand, cost);
        CHECK(std::fabs(r.cost - expected) <= 1e-9);
    }
}

TEST_CASE("W is symmetric and satisfies the triangle inequality") {
    std::mt19937 rng(555);
    for (int rep = 0; rep < 40; ++rep) {
        const WeightedGraph g = oracles::random_connected_graph(rng, 9, 0.3);
        const DistanceMatrix d = shortest_distances(g);
        const ProbabilityMeasure a = oracles::random_measure(rng, 9, 4);
        const ProbabilityMeasure b = oracles::random_measure(rng, 9, 3);
        const ProbabilityMeasure c = oracles::random_measure(rng, 9, 5);
        const double ab = wasserstein(d, a, b).cost;
        const double ba = wasserstein(d, b, a).cost;
        const double bc = wasserstein(d, b, c).cost;
        const double ac = wasserstein(d, a, c).cost;
        CHECK(std::fabs(ab - ba) <= 1e-9);
        CHECK(ac <= ab + bc + 1e-9);
        CHECK(ab >= 0.0);
    }
}

TEST_CASE("W of one-step measures never exceeds the total edge weight") {
    std::mt19937 rng(808);
    for (int rep = 0; rep < 20; ++rep) {
        const WeightedGraph g = oracles::random_connected_graph(rng, 10, 0.25);
        const DistanceMatrix d = shortest_distances(g);
        const double total = g.total_weight();
        const Alpha a = Alpha::checked(0.37);
        for (const Edge& e : g.edges()) {
            const double w =
                wasserstein(d, one_step_measure(g, e.u, a), one_step_measure(g, e.v, a)).cost;
            CHECK(w <= total + 1e-9);
        }
    }
}

TEST_CASE("scaling all weights by c scales W of one-step measures by c") {
    std::mt19937 rng(66);
    const WeightedGraph g = oracles::random_connected_graph(rng, 8, 0.3);
    const double c = 3.25;
    WeightedGraph scaled = g;
    std::vector<double> w = g.weights();
    for (double& x : w) x *= c;
    scaled.set_weights(w);
    const DistanceMatrix d1 = shortest_distances(g);
    const DistanceMatrix d2 = shortest_distances(scaled);
    const Alpha a = Alpha::checked(0.5);
    for (const Edge& e : g.edges()) {
        const double w1 = wasserstein(d1, one_step_measure(g, e.u, a), one_step_measure(g, e.v, a)).cost;
        const double w2 =
            wasserstein(d2, one_step_measure(scaled, e.u, a), one_step_measure(scaled, e.v, a)).cost;
        CHECK(w2 == doctest::Approx(c * w1).epsilon(1e-10));
    }
}

TEST_CASE("misrouted plans fail the duality check") {
    // Identity transport on two corners of a square is optimal at cost 0;
    // rotating mass onto the strictly farther corners keeps the marginals
    // but lengthens the route, so the certificate must reject it.
    const WeightedGraph g =
        build_graph({{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}});
    const DistanceMatrix d = shortest_distances(g);
    ProbabilityMeasure mu1, mu2;
    mu1.support = {{0, 0.5}, {2, 0.5}};
    mu2.support = {{0, 0.5}, {2, 0.5}};
    const TransportResult optimal = wasserstein(d, mu1, mu2);
    CHECK(optimal.cost == doctest::Approx(0.0));
    CHECK(verify_duality(optimal, d, mu1, mu2));

    TransportResult forged = optimal;
    // (0,0) -= t, (0,2) += t, (2,2) -= t, (2,0) += t: marginals intact,
    // 2t of mass now travels distance d(0,2) = 2 each way.
    const double t = 0.2;
    auto bump = [&forged](VertexId from, VertexId to, double delta) {
        for (PlanEntry& p : forged.plan)
            if (p.from == from && p.to == to) {
                p.mass += delta;
                return;
            }
        forged.plan.push_back({from, to, delta});
    };
    bump(0, 0, -t);
    bump(0, 2, +t);
    bump(2, 2, -t);
    bump(2, 0, +t);
    double primal = 0.0;
    for (const PlanEntry& p : forged.plan) primal += p.mass * d.at(p.from, p.to);
    forged.cost = primal;
    CHECK(primal > optimal.cost + 0.5);
    CHECK_FALSE(verify_duality(forged, d, mu1, mu2));
}

TEST_CASE("two-step measures on the bridge graph reproduce the hand-solved W") {
    // Two triangles joined by a bridge; W(mu_{2,C}, mu_{2,D}) at alpha = 1/2
    // decomposes over the bridge: 1/4 + 2/3 + 1/4 = 7/6.
    const WeightedGraph g = build_graph({{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0},
                                         {3, 4, 1.0}, {4, 5, 1.0}, {5, 3, 1.0},
                                         {2, 3, 1.0}});
    const DistanceMatrix d = shortest_distances(g);
    const Alpha a = Alpha::checked(0.5);
    const TransportResult r = wasserstein(d, two_step_measure(g, 2, a), two_step_measure(g, 3, a));
    CHECK(r.cost == doctest::Approx(7.0 / 6.0).epsilon(1e-12));
    CHECK(verify_duality(r, d, two_step_measure(g, 2, a), two_step_measure(g, 3, a)));
}

TEST_CASE("duality certificate survives a dense batch of random solves") {
    std::mt19937 rng(4242);
    DistanceMatrix d = matrix_from({{0, 1, 2, 3},
                                    {1, 0, 1, 2},
                                    {2, 1, 0, 1},
                                    {3, 2, 1, 0}});
    std::uniform_int_distribution<std::size_t> size_dist(1, 4);
    for (int rep = 0; rep < 200; ++rep) {
        const ProbabilityMeasure mu1 = oracles::random_measure(rng, 4, size_dist(rng));
        const ProbabilityMeasure mu2 = oracles::random_measure(rng, 4, size_dist(rng));
        const TransportResult r = wasserstein(d, mu1, mu2);
        CHECK(verify_duality(r, d, mu1, mu2));
    }
}
