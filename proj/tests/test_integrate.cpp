#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "strata/dynamics.hpp"
#include "strata/integrate.hpp"
#include "strata/state.hpp"

using namespace strata;

namespace {

// Least-squares slope of log(err) against log(dt).
double loglog_slope(const std::vector<double>& dts, const std::vector<double>& errs) {
    const std::size_t n = dts.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(dts[i]);
        const double y = std::log(errs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Unit harmonic oscillator: s = (x, v), x'' = -x, exact solution cos(t).
void oscillator(std::span<const double> s, std::span<double> ds) {
    ds[0] = s[1];
    ds[1] = -s[0];
}

double oscillator_error(bool use_rk4, int steps) {
    std::vector<double> s = {1.0, 0.0};
    const double dt = 2.0 * std::numbers::pi / steps;
    StepScratch scr;
    for (int k = 0; k < steps; ++k) {
        if (use_rk4)
            rk4_step(oscillator, s, dt, scr);
        else
            euler_step(oscillator, s, dt, scr);
    }
    return std::hypot(s[0] - 1.0, s[1]);
}

}  // namespace

TEST_CASE("an euler step adds exactly dt times the derivative") {
    std::vector<double> s = {1.0, -2.0, 0.5};
    StepScratch scr;
    euler_step([](std::span<const double>, std::span<double> ds) { ds[0] = 3.0; ds[1] = 0.0; ds[2] = -4.0; },
               s, 0.25, scr);
    CHECK(s[0] == 1.75);
    CHECK(s[1] == -2.0);
    CHECK(s[2] == -0.5);
}

TEST_CASE("a zero derivative leaves the state unchanged") {
    const std::vector<double> start = {0.1, 2.0, -7.5, 0.0};
    auto zero = [](std::span<const double>, std::span<double> ds) {
        for (double& v : ds) v = 0.0;
    };
    StepScratch scr;
    std::vector<double> s = start;
    euler_step(zero, s, 0.5, scr);
    CHECK(s == start);
    rk4_step(zero, s, 0.5, scr);
    CHECK(s == start);
}

TEST_CASE("one rk4 step reproduces the classical tableau on a known flow") {
    // s' = s has stage values k1=s, k2=s(1+h/2), k3=s(1+h/2+h^2/4), k4=s(1+h+h^2/2+h^3/4);
    // the weighted sum gives the degree-4 Taylor polynomial of e^h.
    std::vector<double> s = {1.0};
    const double h = 0.3;
    StepScratch scr;
    rk4_step([](std::span<const double> in, std::span<double> ds) { ds[0] = in[0]; }, s, h, scr);
    const double expect = 1.0 + h + h * h / 2 + h * h * h / 6 + h * h * h * h / 24;
    CHECK(s[0] == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("measured convergence orders match on a harmonic oscillator") {
    std::vector<double> dts, errs;
    for (int n : {100, 200, 400, 800}) {
        dts.push_back(2.0 * std::numbers::pi / n);
        errs.push_back(oscillator_error(false, n));
    }
    const double euler_slope = loglog_slope(dts, errs);
    CHECK(euler_slope == doctest::Approx(1.0).epsilon(0.2));

    dts.clear();
    errs.clear();
    for (int n : {25, 50, 100, 200}) {
        dts.push_back(2.0 * std::numbers::pi / n);
        errs.push_back(oscillator_error(true, n));
    }
    const double rk4_slope = loglog_slope(dts, errs);
    CHECK(rk4_slope == doctest::Approx(4.0).epsilon(0.075));
}

TEST_CASE("a damped pair settles at the root of the force balance") {
    StateLayout layout;
    layout.add_level({0, 1});
    layout.finalize();
    std::vector<LevelTopology> topo(1);
    topo[0].edges = {{0, 1}};
    PhysicsParams phys;
    Evaluator eval(&layout, topo, phys, 0.0);

    std::vector<double> s(layout.total, 0.0);
    put3(&s[layout.pos_off(0, 0)], {-2.0, 0.3, 0.0});
    put3(&s[layout.pos_off(0, 1)], {2.0, -0.3, 0.1});

    DerivFn f = [&](std::span<const double> in, std::span<double> ds) {
        eval.derivatives(in, ds);
    };
    StepScratch scr;
    for (int k = 0; k < 20000; ++k) rk4_step(f, s, 0.01, scr);

    const double rstar =
        test::two_body_equilibrium(phys.spring_k, phys.repulsion_f0, phys.softening);
    const Vec3 gap = get3(&s[layout.pos_off(0, 1)]) - get3(&s[layout.pos_off(0, 0)]);
    CHECK(gap.norm() == doctest::Approx(rstar).epsilon(1e-6));
    CHECK(eval.equilibrium_check(s, 1e-8).pass);
}

TEST_CASE("non-finite derivatives are reported by component") {
    auto bad = [](std::span<const double>, std::span<double> ds) {
        ds[0] = 0.0;
        ds[1] = 0.0;
        ds[2] = std::nan("");
    };
    std::vector<double> s = {1.0, 2.0, 3.0};
    StepScratch scr;
    CHECK_THROWS_WITH_AS(euler_step(bad, s, 0.1, scr),
                         "non-finite derivative at component 2", internal_error);
    ComponentNamer namer = [](std::size_t i) { return "slot " + std::to_string(i); };
    CHECK_THROWS_WITH_AS(rk4_step(bad, s, 0.1, scr, namer),
                         "non-finite derivative at slot 2", internal_error);
}

TEST_CASE("repeated integration of the same system is bit-identical") {
    auto run = [] {
        std::vector<double> s = {1.0, 0.0};
        StepScratch scr;
        for (int k = 0; k < 1000; ++k) rk4_step(oscillator, s, 0.013, scr);
        return s;
    };
    const auto a = run();
    const auto b = run();
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}
