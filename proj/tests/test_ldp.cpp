#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "sclab/ldp.hpp"

using namespace sclab;
using namespace sclab::ldp;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
const FluxModel kZeroFlux = FluxModel::linear({0.0});

double normal_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("action closed forms and symmetries") {
    CHECK(action(Control::zero(3, 1.0, 16)) == 0.0);
    CHECK(action(Control::constant({2.0}, 1.0, 16)) == doctest::Approx(2.0));

    auto h = Control::analytic(2, 0.5, 64,
                               [](int k, double t) { return (k + 1) * std::sin(5 * t); });
    auto h2 = h;
    for (double& c : h2.coeffs()) c *= 2.0;
    CHECK(action(h2) == doctest::Approx(4.0 * action(h)).epsilon(1e-12));

    // time reversal leaves the action unchanged
    Control rev = h;
    for (int j = 0; j < static_cast<int>(h.node_count()); ++j)
        for (int k = 0; k < h.K(); ++k) rev.at(j, k) = h.at(h.steps() - j, k);
    CHECK(action(rev) == doctest::Approx(action(h)).epsilon(1e-12));

    // mode permutation leaves the action unchanged
    Control perm = h;
    for (int j = 0; j < static_cast<int>(h.node_count()); ++j) {
        perm.at(j, 0) = h.at(j, 1);
        perm.at(j, 1) = h.at(j, 0);
    }
    CHECK(action(perm) == doctest::Approx(action(h)).epsilon(1e-12));
}

TEST_CASE("minimize_action: deterministic target needs no control") {
    TorusGrid g(1, 32);
    Field u0(g);
    for (std::size_t c = 0; c < u0.size(); ++c)
        u0.values[c] = 0.4 * std::sin(kTwoPi * g.center(c, 0));
    auto burgers = FluxModel::burgers();
    auto noise = NoiseModel::trigonometric(1, 0.3, 1.0, 1.0, 0.0);
    double T = 0.1;
    MinimizeOptions opt;
    opt.steps = 16;
    Field target = stochastic::solve_stochastic_final(
        u0, burgers, noise, Control::zero(1, T, opt.steps), 0.0, T, opt.solver, 0);
    auto res = minimize_action(u0, target, 1e-8, burgers, noise, T, opt);
    CHECK(res.converged);
    CHECK(res.action <= 1e-6);
}

TEST_CASE("minimize_action: Gaussian shift oracle and quadratic scaling") {
    TorusGrid g(1, 16);
    Field u0(g, 0.0);
    double sigma = 0.5, T = 0.25;
    auto noise = NoiseModel::trigonometric(1, sigma, 1.0, 1.0, 0.0);
    MinimizeOptions opt;
    opt.steps = 25;

    auto solve_for = [&](double c) {
        Field target(g, c);
        return minimize_action(u0, target, 0.004, kZeroFlux, noise, T, opt);
    };
    double c = 0.2;
    auto res = solve_for(c);
    double exact = c * c / (2 * sigma * sigma * T);
    REQUIRE(res.converged);
    CHECK(res.action == doctest::Approx(exact).epsilon(0.10));

    auto res2 = solve_for(2 * c);
    REQUIRE(res2.converged);
    CHECK(res2.action / res.action == doctest::Approx(4.0).epsilon(0.10));

    // optimizer never beats a feasible witness the wrong way round: its
    // converged action stays below the witness action (up to FD slack)
    Control witness = Control::constant({c / (sigma * T)}, T, opt.steps);
    CHECK(res.action <= action(witness) * 1.05);
}

TEST_CASE("mc_rare_event: certain events, determinism, Gaussian tail") {
    TorusGrid g(1, 8);
    Field u0(g, 0.0);
    double sigma = 0.5, T = 0.25;
    auto noise = NoiseModel::trigonometric(1, sigma, 1.0, 1.0, 0.0);

    RareEvent certain;
    certain.kind = RareEvent::Kind::TerminalL1BallComplement;
    certain.reference = Field(g, 100.0);
    certain.threshold = 0.0;
    auto table = mc_rare_event(u0, kZeroFlux, noise, certain, {0.1}, 200, 1, T, 10);
    CHECK(table.rows[0].p_hat == 1.0);
    CHECK(table.rows[0].minus_eps_log_p == 0.0);

    RareEvent ev;
    ev.kind = RareEvent::Kind::TerminalMeanThreshold;
    ev.ref_scalar = 0.0;
    ev.threshold = 0.08;
    auto t1 = mc_rare_event(u0, kZeroFlux, noise, ev, {0.08, 0.04}, 2000, 7, T, 20);
    auto t2 = mc_rare_event(u0, kZeroFlux, noise, ev, {0.08, 0.04}, 2000, 7, T, 20);
    for (std::size_t i = 0; i < t1.rows.size(); ++i)
        CHECK(t1.rows[i].p_hat == t2.rows[i].p_hat);

    // mean(uT) ~ N(0, eps sigma^2 T) exactly in this model
    for (const auto& row : t1.rows) {
        double p = normal_tail(ev.threshold / (sigma * std::sqrt(row.eps * T)));
        double se = std::sqrt(p * (1 - p) / row.n_traj);
        CHECK(std::abs(row.p_hat - p) <= 4 * se);
    }

    // event nesting: smaller threshold, larger probability (same seeds)
    RareEvent ev_small = ev;
    ev_small.threshold = 0.04;
    auto t3 = mc_rare_event(u0, kZeroFlux, noise, ev_small, {0.08, 0.04}, 2000, 7, T, 20);
    for (std::size_t i = 0; i < t1.rows.size(); ++i)
        CHECK(t3.rows[i].p_hat >= t1.rows[i].p_hat);

    CHECK_THROWS_AS(mc_rare_event(u0, kZeroFlux, noise, ev, {0.1}, 50, 1, T, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(mc_rare_event(u0, kZeroFlux, noise, ev, {0.1, 0.2}, 200, 1, T, 10),
                    std::invalid_argument);
}

TEST_CASE("ldp_fit recovers exact log-linear rates") {
    double J = 0.8;
    MCTable table;
    for (double eps : {0.04, 0.02, 0.01}) {
        MCRow r{};
        r.eps = eps;
        r.n_traj = 1;
        r.p_hat = std::exp(-J / eps);
        r.minus_eps_log_p = -eps * std::log(r.p_hat);
        r.usable = true;
        table.rows.push_back(r);
    }
    auto rep = ldp_fit(table, J);
    CHECK(rep.limit == doctest::Approx(J).epsilon(1e-6));
    CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.monotone);

    // prefactor p = exp(-J/eps) sqrt(eps): limit within |eps_min log eps_min|
    MCTable pre;
    for (double eps : {0.04, 0.02, 0.01}) {
        MCRow r{};
        r.eps = eps;
        r.p_hat = std::exp(-J / eps) * std::sqrt(eps);
        r.minus_eps_log_p = -eps * std::log(r.p_hat);
        r.usable = true;
        pre.rows.push_back(r);
    }
    auto rep2 = ldp_fit(pre, J);
    CHECK(std::abs(rep2.limit - J) <= std::abs(0.01 * std::log(0.01)));

    MCTable thin;
    thin.rows = {table.rows[0], table.rows[1]};
    CHECK_THROWS_AS(ldp_fit(thin, J), InsufficientDataError);
}

TEST_CASE("condition B gap: exact zero at eps=0 and shrinking sweep") {
    TorusGrid g(1, 16);
    Field u0(g);
    for (std::size_t c = 0; c < u0.size(); ++c)
        u0.values[c] = 0.3 * std::cos(kTwoPi * g.center(c, 0));
    auto burgers = FluxModel::burgers();
    auto noise = NoiseModel::trigonometric(1, 0.25, 1.0, 1.0, 0.5);
    double T = 0.1;
    Control h = Control::constant({0.3}, T, 32);

    auto zero_rows = condition_b_gap(u0, burgers, noise, {h}, {0.0}, 16, 3, 1.0, 0.05);
    CHECK(zero_rows[0].mean_gap == 0.0);
    CHECK(zero_rows[0].exceed_frac == 0.0);

    std::vector<double> eps = {0.04, 0.01, 0.0025};
    auto rows = condition_b_gap(u0, burgers, noise, {h, h, h}, eps, 64, 3, 1.0, 0.05);
    CHECK(rows[0].mean_gap > rows[1].mean_gap);
    CHECK(rows[1].mean_gap > rows[2].mean_gap);

    Control big = Control::constant({10.0}, T, 32);
    CHECK_THROWS_AS(condition_b_gap(u0, burgers, noise, {big}, {0.01}, 16, 3, 1.0, 0.05),
                    std::domain_error);
}

TEST_CASE("weak continuity probe: oscillations average out") {
    TorusGrid g(1, 32);
    Field u0(g);
    for (std::size_t c = 0; c < u0.size(); ++c)
        u0.values[c] = 0.3 * std::cos(kTwoPi * g.center(c, 0));
    auto noise = NoiseModel::trigonometric(1, 0.4, 1.0, 1.0, 0.0);
    double T = 0.25;
    Control h = Control::zero(1, T, 400);

    auto still = weak_continuity_probe(u0, kZeroFlux, noise, h, {0.0, 0}, {0.1}, 1.0);
    CHECK(still[0].solution_gap == 0.0);

    std::vector<double> eps = {0.1, 0.05, 0.025};
    auto rows = weak_continuity_probe(u0, kZeroFlux, noise, h, {1.0, 0}, eps, 1.0);
    for (const auto& r : rows)
        CHECK(r.control_gap_sq == doctest::Approx(T / 2.0).epsilon(0.05));
    CHECK(rows[1].solution_gap < rows[0].solution_gap);
    CHECK(rows[2].solution_gap < rows[1].solution_gap);

    // linear-response case: gap = O(eps), slope about 1
    double slope1 = std::log2(rows[0].solution_gap / rows[1].solution_gap);
    double slope2 = std::log2(rows[1].solution_gap / rows[2].solution_gap);
    CHECK(slope1 >= 0.7);
    CHECK(slope1 <= 1.3);
    CHECK(slope2 >= 0.7);
    CHECK(slope2 <= 1.3);
}

TEST_CASE("thread cap env variable") {
    CHECK(thread_count() >= 1);
}
