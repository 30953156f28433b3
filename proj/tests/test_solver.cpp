#include "doctest.h"

#include "wstring/errors.hpp"
#include "wstring/field2d.hpp"
#include "wstring/params.hpp"
#include "wstring/radial.hpp"
#include "wstring/solver.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

using namespace wstring;

namespace {

struct Prepared {
    Params p;
    RadialFunction w1;
    RadialFunction w2;
};

Prepared prepare(std::vector<std::complex<double>> strings, double eps) {
    auto p = Params::make(1, 1, 1, 1, 1, std::move(strings), eps);
    const auto grid = default_radial_grid();
    auto w1 = radial::solve_w1_formula(p, grid);
    auto w2 = radial::solve_w2(p, w1, grid);
    return {p, std::move(w1), std::move(w2)};
}

solver::SolveResult solve_on(const Prepared& pre, double R, int n,
                             solver::NewtonOptions opts = {}) {
    const auto g = Grid2D::make(R, n, pre.p.strings);
    auto [U0, eta0] = solver::initial_guess(pre.p, pre.w1, pre.w2, g);
    return solver::newton_solve(pre.p, std::move(U0), std::move(eta0), opts);
}

} // namespace

TEST_CASE("initial guess is finite and already nearly solves the system") {
    auto pre = prepare({{0.5, 0.0}, {-0.5, 0.0}}, 0.3);
    const auto g = Grid2D::make(8.0, 129, pre.p.strings);
    const auto [U0, eta0] = solver::initial_guess(pre.p, pre.w1, pre.w2, g);
    for (double v : U0.v) CHECK(std::isfinite(v));
    for (double v : eta0.v) CHECK(std::isfinite(v));
    const auto [r1, r2] = solver::assemble_residual(pre.p, U0, eta0);
    CHECK(r1.max_abs_interior() < 0.01);
    CHECK(r2.max_abs_interior() < 0.01);
}

TEST_CASE("string points on nodes stay finite through the clamp") {
    auto p = Params::make(1, 1, 1, 1, 1, {{0.0, 0.0}}, 0.3);
    Grid2D g{8.0, 65}; // no protective offset: the string sits on node (32, 32)
    Field2D U(g);
    const auto u = solver::unregularized_u(p, U);
    CHECK(u.at(32, 32) == -745.0);
    CHECK(std::isfinite(u.at(33, 32)));
    CHECK(u.at(33, 32) == doctest::Approx(2.0 * std::log(0.25)));
}

TEST_CASE("runaway exponents are reported, not propagated") {
    auto p = Params::make(1, 1, 1, 1, 1, {{0.5, 0.0}}, 0.3);
    const auto g = Grid2D::make(8.0, 65, p.strings);
    Field2D U(g), eta(g);
    for (auto& v : U.v) v = 800.0;
    try {
        auto r = solver::assemble_residual(p, U, eta);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("overflow") != std::string::npos);
    }
}

TEST_CASE("Newton converges fast from the profile guess") {
    auto pre = prepare({{0.5, 0.0}, {-0.5, 0.0}}, 0.3);
    const auto res = solve_on(pre, 8.0, 129);
    const auto& rep = res.report;
    CHECK(rep.converged);
    CHECK(rep.iterations <= 20);
    CHECK(rep.final_residual <= 1e-9);
    REQUIRE(rep.residual_history.size() >= 3);
    for (size_t k = 1; k < rep.residual_history.size(); ++k)
        CHECK(rep.residual_history[k] < rep.residual_history[k - 1]);
    // Quadratic-basin tail: the last accepted step squares the residual
    // scale rather than shaving a constant factor.
    const double prev = rep.residual_history[rep.residual_history.size() - 2];
    const double last = rep.residual_history.back();
    CHECK(last < std::pow(prev, 1.5));
    CHECK(rep.linear_solver == "sparse-lu");

    const auto flux = solver::verify_boundary_condition(pre.p, res.U, res.eta);
    CHECK(flux.flux_u_rel_err <= 1e-3);
    CHECK(flux.flux_eta_rel_err <= 1e-3);
    CHECK(flux.integral_eu > 0.0);
    CHECK(flux.integral_eeta > 0.0);
}

TEST_CASE("solved fields converge at second order in the spacing") {
    auto pre = prepare({{0.5, 0.0}, {-0.5, 0.0}}, 0.3);
    const auto coarse = solve_on(pre, 8.0, 65);
    const auto mid = solve_on(pre, 8.0, 129);
    const auto fine = solve_on(pre, 8.0, 257);
    REQUIRE(coarse.report.converged);
    REQUIRE(mid.report.converged);
    REQUIRE(fine.report.converged);
    const std::vector<std::complex<double>> probes = {
        {1.1, 0.7}, {-2.3, 0.4}, {0.3, -1.8}, {3.2, 2.1}, {-1.4, -2.6}, {0.9, 0.1}};
    double d_cm = 0.0, d_mf = 0.0;
    for (const auto& z : probes) {
        d_cm += std::abs(coarse.U.interp_cubic(z.real(), z.imag()) -
                         mid.U.interp_cubic(z.real(), z.imag()));
        d_mf += std::abs(mid.U.interp_cubic(z.real(), z.imag()) -
                         fine.U.interp_cubic(z.real(), z.imag()));
    }
    const double ratio = d_cm / d_mf;
    CHECK(ratio > 2.2);
    CHECK(ratio < 7.0);
}

TEST_CASE("iterative linear solver reproduces the direct factorization") {
    auto pre = prepare({{0.5, 0.0}, {-0.5, 0.0}}, 0.3);
    const auto direct = solve_on(pre, 8.0, 65);
    solver::NewtonOptions opts;
    opts.direct_solver_max_n = 33;
    const auto iter = solve_on(pre, 8.0, 65, opts);
    CHECK(direct.report.linear_solver == "sparse-lu");
    CHECK(iter.report.linear_solver == "bicgstab-ilut");
    REQUIRE(iter.report.converged);
    double worst = 0.0;
    for (size_t k = 0; k < direct.U.v.size(); ++k)
        worst = std::max(worst, std::abs(direct.U.v[k] - iter.U.v[k]));
    CHECK(worst < 1e-8);
}

TEST_CASE("a stringless run stays radially symmetric") {
    auto pre = prepare({}, 0.3);
    const auto res = solve_on(pre, 8.0, 129);
    REQUIRE(res.report.converged);
    double lo = 1e300, hi = -1e300;
    for (int k = 0; k < 64; ++k) {
        const double th = 2.0 * 3.14159265358979323846 * k / 64;
        const double v = res.U.interp_cubic(std::cos(th), std::sin(th));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi - lo < 1e-4);
}

TEST_CASE("error fields of the expansion carry small weighted norms") {
    auto pre = prepare({{0.5, 0.0}, {-0.5, 0.0}}, 0.3);
    const auto res = solve_on(pre, 8.0, 129);
    REQUIRE(res.report.converged);
    const auto vs = solver::extract_vstar(pre.p, pre.w1, pre.w2, res.U, res.eta);
    CHECK(vs.v1.grid == res.U.grid);
    CHECK(vs.bound1 > 0.0);
    CHECK(vs.bound2 > 0.0);
    CHECK(vs.bound_total <= vs.bound1 + vs.bound2 + 1e-15);
    CHECK(vs.bound_total < 0.05);
}

TEST_CASE("reports serialize the convergence history") {
    auto pre = prepare({{0.5, 0.0}, {-0.5, 0.0}}, 0.3);
    const auto res = solve_on(pre, 8.0, 65);
    const char* path = "newton_report_test.txt";
    res.report.write(path);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("converged=true") != std::string::npos);
    CHECK(text.find("linear_solver=sparse-lu") != std::string::npos);
    CHECK(text.find("residual_0=") != std::string::npos);
    std::remove(path);
}
