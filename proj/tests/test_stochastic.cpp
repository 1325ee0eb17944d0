#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "sclab/stochastic.hpp"

using namespace sclab;
using hyperbolic::SolverConfig;

namespace {
const NoiseModel kAdd = NoiseModel::trigonometric(1, 0.5, 1.0, 1.0, 0.0);  // g == 0.5
const FluxModel kZeroFlux = FluxModel::linear({0.0});
}  // namespace

TEST_CASE("step_controlled at eps=0 is bitwise step_skeleton") {
    TorusGrid g(1, 32);
    Field u(g);
    for (std::size_t c = 0; c < u.size(); ++c) u.values[c] = std::sin(7.0 * c);
    auto burgers = FluxModel::burgers();
    auto noise = NoiseModel::trigonometric(2, 0.3, 1.0, 1.0, 0.5);
    std::vector<double> h = {0.4, -0.2};
    Field a = hyperbolic::step_skeleton(u, burgers, noise, h, 0.004);
    Field b = stochastic::step_controlled(u, burgers, noise, h, 0.0, {}, 0.004);
    CHECK(a.values == b.values);
}

TEST_CASE("solve_stochastic at eps=0 equals solve_skeleton exactly") {
    TorusGrid g(1, 32);
    Field u0(g);
    for (std::size_t c = 0; c < u0.size(); ++c)
        u0.values[c] = 0.5 * std::cos(6.283185307179586 * g.center(c, 0));
    auto burgers = FluxModel::burgers();
    auto noise = NoiseModel::trigonometric(2, 0.3, 1.0, 1.0, 0.5);
    Control h = Control::constant({0.3, -0.1}, 0.1, 64);
    auto a = hyperbolic::solve_skeleton(u0, burgers, noise, h, 0.1);
    auto b = stochastic::solve_stochastic(u0, burgers, noise, h, 0.0, 0.1, {}, 99);
    REQUIRE(a.fields.size() == b.fields.size());
    for (std::size_t i = 0; i < a.fields.size(); ++i)
        CHECK(a.fields[i].values == b.fields[i].values);
}

TEST_CASE("seed determinism and trajectory independence") {
    TorusGrid g(1, 16);
    Field u0(g, 0.0);
    Control h = Control::zero(1, 0.1, 16);
    auto a = stochastic::solve_stochastic(u0, kZeroFlux, kAdd, h, 1.0, 0.1, {}, 42, 3);
    auto b = stochastic::solve_stochastic(u0, kZeroFlux, kAdd, h, 1.0, 0.1, {}, 42, 3);
    for (std::size_t i = 0; i < a.fields.size(); ++i)
        CHECK(a.fields[i].values == b.fields[i].values);
    auto c = stochastic::solve_stochastic(u0, kZeroFlux, kAdd, h, 1.0, 0.1, {}, 42, 4);
    CHECK(a.final_field().values != c.final_field().values);
}

TEST_CASE("additive zero-flux law: mean is an exact Gaussian walk") {
    TorusGrid g(1, 4);
    Field u0(g, 0.0);
    double T = 0.16;
    int steps = 16;
    Control h = Control::zero(1, T, steps);
    const int n = 10000;
    double sum = 0, sum_sq = 0;
    for (int i = 0; i < n; ++i) {
        Field uT =
            stochastic::solve_stochastic_final(u0, kZeroFlux, kAdd, h, 1.0, T, {}, 77, i);
        double m = uT.mean();
        sum += m;
        sum_sq += m * m;
    }
    double mean = sum / n;
    double var = sum_sq / n - mean * mean;
    double exact = 0.25 * T;  // sigma^2 T with sigma = 0.5, eps = 1
    CHECK(std::abs(mean) <= 4.0 * std::sqrt(exact / n));
    CHECK(var == doctest::Approx(exact).epsilon(0.05));
}

TEST_CASE("common random numbers: distance to eps=0 shrinks with eps") {
    TorusGrid g(1, 32);
    Field u0(g);
    for (std::size_t c = 0; c < u0.size(); ++c)
        u0.values[c] = 0.4 * std::sin(6.283185307179586 * g.center(c, 0));
    auto burgers = FluxModel::burgers();
    auto noise = NoiseModel::trigonometric(1, 0.3, 1.0, 1.0, 0.3);
    Control h = Control::zero(1, 0.1, 64);
    auto base = hyperbolic::solve_skeleton(u0, burgers, noise, h, 0.1);
    double prev = 1e100;
    for (double eps : {0.04, 0.01, 0.0025}) {
        double mean = 0;
        for (int i = 0; i < 32; ++i) {
            auto t = stochastic::solve_stochastic(u0, burgers, noise, h, eps, 0.1, {}, 5, i);
            mean += hyperbolic::l1l1_distance(t, base);
        }
        mean /= 32;
        CHECK(mean < prev);
        prev = mean;
    }
}
