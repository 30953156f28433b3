#include "doctest.h"

#include "wstring/analysis.hpp"
#include "wstring/errors.hpp"
#include "wstring/params.hpp"
#include "wstring/radial.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

using namespace wstring;

namespace {

double max_abs_diff_upto(const RadialFunction& a, const RadialFunction& b, double r_hi) {
    double worst = 0.0;
    for (size_t i = 0; i < a.nodes().size(); ++i) {
        if (a.nodes()[i] > r_hi) break;
        worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
    }
    return worst;
}

} // namespace

TEST_CASE("radial carrier enforces its grid invariants") {
    CHECK_THROWS_AS(RadialFunction({1.0, 2.0, 3.0, 4.0}, {0, 0, 0, 0}), RangeError);
    CHECK_THROWS_AS(RadialFunction({1e-4, 2e-4, 3e-4}, {0, 0, 0}), RangeError);
    CHECK_THROWS_AS(RadialFunction({1e-4, 1e-4, 2e-4, 3e-4}, {0, 0, 0, 0}), RangeError);
    RadialFunction f({1e-4, 0.5, 1.0, 2.0}, {1.0, 2.0, 3.0, 4.0});
    CHECK(f.eval(0.5) == 2.0);
    CHECK(f.eval(1e-6) == 1.0);
    CHECK_THROWS_AS(f.eval(2.5), RangeError);
}

TEST_CASE("interpolation reproduces smooth functions between nodes") {
    std::vector<double> nodes, values;
    for (double r = 1e-4; r < 6.0; r += 0.02) {
        nodes.push_back(r);
        values.push_back(std::sin(r));
    }
    RadialFunction f(nodes, values);
    double worst = 0.0;
    for (double r = 0.01; r < 5.5; r += 0.017)
        worst = std::max(worst, std::abs(f.eval(r) - std::sin(r)));
    CHECK(worst < 1e-6);
}

TEST_CASE("all-unit couplings admit a closed-form first correction") {
    // With N = 0 and kappa = 2 the first correction is exactly
    // -r^2 / (4 (1 + r^2)).
    auto p = Params::make(1, 1, 1, 1, 1, {}, 0.3);
    auto w1 = radial::solve_w1_formula(p, default_radial_grid());
    for (double r : {0.1, 0.5, 1.0, 2.0, 10.0, 100.0, 1e4}) {
        const double exact = -r * r / (4.0 * (1.0 + r * r));
        CHECK(std::abs(w1.eval(r) - exact) < 5e-8);
    }
    CHECK(std::abs(w1.eval(1e-4)) < 1e-8);
}

TEST_CASE("formula route and direct integration route agree") {
    for (auto p : {Params::make(2, 1, 2, 1, 0.7, {{0.1, 0.0}}, 0.3),
                   Params::make(1, 2, 1, 3, 1, {{0.3, 0.3}, {-0.3, 0.0}}, 0.3)}) {
        const auto grid = default_radial_grid();
        const auto wf = radial::solve_w1_formula(p, grid);
        const auto wo = radial::solve_w1_ode(p, grid, 0.0);
        CHECK(max_abs_diff_upto(wf, wo, 50.0) < 1e-6);
    }
}

TEST_CASE("finite-difference residuals of both corrections are second order") {
    auto p = Params::make(1, 2, 1.5, 3, 1, {{0.4, 0.0}, {-0.4, 0.2}}, 0.3);
    double prev1 = 0.0, prev2 = 0.0;
    for (double h : {0.02, 0.01}) {
        const auto grid = uniform_radial_grid(h, 8.0);
        const auto w1 = radial::solve_w1_formula(p, grid);
        const auto w2 = radial::solve_w2(p, w1, grid);
        const auto res1 = radial::ode_residual_w1(p, w1);
        const auto res2 = radial::ode_residual_w2(p, w1, w2);
        double m1 = 0.0, m2 = 0.0;
        for (size_t i = 0; i < res1.size(); ++i) {
            if (grid[i] < 0.1) continue; // skip the graded lead-in block
            m1 = std::max(m1, std::abs(res1[i]));
            m2 = std::max(m2, std::abs(res2[i]));
        }
        if (prev1 > 0.0) {
            CHECK(prev1 / m1 == doctest::Approx(4.0).epsilon(0.3));
            CHECK(prev2 / m2 == doctest::Approx(4.0).epsilon(0.3));
        }
        prev1 = m1;
        prev2 = m2;
    }
}

TEST_CASE("fitted tail slopes reproduce the slope constants") {
    for (auto p : {Params::make(1, 1, 1, 1, 1, {{0.0, 0.0}}, 0.3),
                   Params::make(1, 1, 2, 1, 1, {}, 0.3),
                   Params::make(1, 2, 1, 3, 1, {{0.3, 0.3}, {-0.3, 0.0}}, 0.3)}) {
        const auto grid = default_radial_grid();
        const auto w1 = radial::solve_w1_formula(p, grid);
        const auto w2 = radial::solve_w2(p, w1, grid);
        const auto fit1 = fit_decay(w1, 1e3, 1e5);
        const auto fit2 = fit_decay(w2, 1e3, 1e5);
        // Signed convention: w_k ~ slope * ln r in the far field.
        const double s1 = analysis::w1_slope_constant(p);
        const double s2 = analysis::w2_slope_constant(p);
        CHECK(std::abs(fit1.slope - s1) <= 2e-3 * std::max(std::abs(s1), 1e-3));
        CHECK(std::abs(fit2.slope - s2) <= 2e-3 * std::max(std::abs(s2), 1e-3));
    }
}

TEST_CASE("adding the bounded kernel function leaves the fitted slope alone") {
    auto p = Params::make(1, 1, 1, 1, 1, {{0.0, 0.0}}, 0.3);
    const auto grid = default_radial_grid();
    const auto w1 = radial::solve_w1_formula(p, grid);
    std::vector<double> shifted = w1.values();
    for (size_t i = 0; i < shifted.size(); ++i)
        shifted[i] += 0.3 * ((1.0 - std::pow(grid[i], 4)) / (1.0 + std::pow(grid[i], 4)));
    RadialFunction w1s(grid, shifted);
    const auto f0 = fit_decay(w1, 1e3, 1e5);
    const auto fs = fit_decay(w1s, 1e3, 1e5);
    CHECK(std::abs(f0.slope - fs.slope) < 1e-6);
    CHECK(std::abs((f0.intercept - 0.3) - fs.intercept) < 1e-6);
}

TEST_CASE("switched-off source coupling gives a vanishing first correction") {
    auto p = Params::make(0, 1, 0, 1, 1, {{0.2, 0.0}}, 0.3);
    const auto grid = default_radial_grid();
    const auto w1 = radial::solve_w1_formula(p, grid);
    for (double v : w1.values()) CHECK(v == 0.0);
    // The second correction then vanishes too (proportional pairing).
    const auto w2 = radial::solve_w2(p, w1, grid);
    for (double v : w2.values()) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("decoupled second correction integrates the bare source") {
    // lambda1 = 0 with lambda3 > 0 (admissible in the decay regime):
    // w2 = -lambda3 V with Delta V = rho2, so the defining residual of
    // w2 must still vanish.
    auto p = Params::make(0, 1, 0.5, 1, 1, {{0.2, 0.0}}, 0.3);
    CHECK(p.regime == Regime::NonproportionalDecay);
    const auto grid = uniform_radial_grid(0.01, 8.0);
    const auto w1 = radial::solve_w1_formula(p, grid);
    const auto w2 = radial::solve_w2(p, w1, grid);
    const auto res = radial::ode_residual_w2(p, w1, w2);
    double worst = 0.0;
    for (size_t i = 0; i < res.size(); ++i)
        if (grid[i] >= 0.1) worst = std::max(worst, std::abs(res[i]));
    CHECK(worst < 1e-3);
}

TEST_CASE("decay fit needs enough nodes in the window") {
    auto p = Params::make(1, 1, 1, 1, 1, {}, 0.3);
    const auto grid = uniform_radial_grid(0.01, 8.0);
    const auto w1 = radial::solve_w1_formula(p, grid);
    CHECK_THROWS_AS(fit_decay(w1, 6.0, 6.001), DegeneracyError);
}

TEST_CASE("radial CSV round-trips bit-exactly") {
    auto p = Params::make(2, 1, 2, 1, 0.7, {{0.1, 0.0}}, 0.3);
    const auto w1 = radial::solve_w1_formula(p, default_radial_grid());
    const char* path = "radial_roundtrip_test.csv";
    w1.write_csv(path);
    const auto back = RadialFunction::read_csv(path);
    REQUIRE(back.nodes().size() == w1.nodes().size());
    for (size_t i = 0; i < back.nodes().size(); ++i) {
        CHECK(back.nodes()[i] == w1.nodes()[i]);
        CHECK(back.values()[i] == w1.values()[i]);
    }
    std::remove(path);
}
