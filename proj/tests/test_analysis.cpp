#include "doctest.h"

#include "wstring/analysis.hpp"
#include "wstring/errors.hpp"
#include "wstring/params.hpp"
#include "wstring/radial.hpp"

#include <cmath>
#include <vector>

using namespace wstring;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Parameter battery spanning N = 0..3 and both coupling regimes.
std::vector<Params> battery() {
    std::vector<Params> sets;
    sets.push_back(Params::make(1, 1, 1, 1, 1, {}, 0.3));
    sets.push_back(Params::make(2, 1, 2, 1, 0.7, {{0.1, 0.0}}, 0.3));
    sets.push_back(Params::make(1, 2, 1.5, 3, 1, {{0.4, 0.0}, {-0.4, 0.2}}, 0.3));
    sets.push_back(Params::make(1, 1, 2, 1, 1, {{0.0, 0.0}}, 0.3));
    sets.push_back(Params::make(1, 2, 1, 3, 1, {{0.3, 0.3}, {-0.3, 0.0}}, 0.3));
    sets.push_back(
        Params::make(1.5, 2, 0.5, 1, 2, {{0.5, 0.0}, {-0.25, 0.4}, {0.0, -0.5}}, 0.3));
    sets.push_back(PhysicalPreset{1.0, 1.0, 0.05}.to_params(1.0, {{0.5, 0.0}, {-0.5, 0.0}}, 0.3));
    return sets;
}

} // namespace

TEST_CASE("beta function dual-path agreement") {
    CHECK(analysis::beta_fn(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(analysis::beta_fn(0.5, 0.5) == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(analysis::beta_fn(2, 3) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    CHECK(analysis::beta_fn(0.5, 1.5) == doctest::Approx(kPi / 2.0).epsilon(1e-14));
    for (auto [x, y] : {std::pair{0.5, 0.5}, {1.0, 2.0}, {2.5, 0.75}, {1.0 / 3.0, 2.0 / 3.0}}) {
        const double g = analysis::beta_fn(x, y);
        const auto q = analysis::beta_fn_integral(x, y);
        CHECK(std::abs(g - q.value) <= 1e-10 * std::abs(g));
        CHECK(analysis::beta_fn(y, x) == doctest::Approx(g).epsilon(1e-14));
    }
    CHECK_THROWS_AS(analysis::beta_fn(0.0, 1.0), RangeError);
    CHECK_THROWS_AS(analysis::beta_fn(1.0, -0.5), RangeError);
}

TEST_CASE("closed-form decay constants at hand-worked values") {
    auto unit = Params::make(1, 1, 1, 1, 1, {}, 0.3);
    CHECK(analysis::const_C1(unit) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    auto dc_unit = analysis::decay_constants(unit);
    CHECK(dc_unit.C2 == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(dc_unit.beta_term == 0.0);

    // Nonproportional example: lambda3 = 2 shifts C2 to 7/12 through a
    // beta term of -1/2.
    auto p = Params::make(1, 1, 2, 1, 1, {}, 0.3);
    auto dc = analysis::decay_constants(p);
    CHECK(dc.C1 == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(dc.beta_term == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(dc.C2 == doctest::Approx(7.0 / 12.0).epsilon(1e-13));

    // Second nonproportional spot value.
    auto q = Params::make(1, 2, 1, 3, 1, {{0.3, 0.3}, {-0.3, 0.0}}, 0.3);
    CHECK(analysis::const_C1(q) == doctest::Approx(0.025).epsilon(1e-15));
}

TEST_CASE("pairing quadrature reproduces the decay constant across the battery") {
    for (const auto& p : battery()) {
        const double C1 = analysis::const_C1(p);
        const auto I = analysis::integral_I(p);
        CHECK(std::abs(I.value - C1) <= 1e-8 * std::abs(C1));
    }
}

TEST_CASE("density masses match their closed forms") {
    for (const auto& p : battery()) {
        const auto [q2, closed2] = analysis::rho2_mass(p);
        CHECK(std::abs(q2.value - closed2) <= 1e-8 * std::abs(closed2));
        const auto [q1, closed1] = analysis::rho1_mass(p);
        CHECK(closed1 == doctest::Approx(8.0 * kPi * (p.N() + 1)).epsilon(1e-15));
        CHECK(std::abs(q1.value - closed1) <= 1e-8 * closed1);
    }
    // Spot values: N = 0 unit gives pi; N = 1 with kappa = 1 gives pi^2/2.
    auto unit = Params::make(1, 1, 1, 1, 1, {}, 0.3);
    CHECK(analysis::rho2_mass(unit).first.value == doctest::Approx(kPi).epsilon(1e-10));
    auto k1 = Params::make(1, 2, 0.5, 1, 1, {{0.0, 0.0}}, 0.3);
    CHECK(analysis::rho2_mass(k1).first.value ==
          doctest::Approx(kPi * kPi / 2.0).epsilon(1e-10));
}

TEST_CASE("vortex mass identity holds for N up to 5") {
    std::vector<std::complex<double>> strings;
    for (int N = 0; N <= 5; ++N) {
        auto p = Params::make(1, 1.7, 1, 1.7, 1, strings, 0.3);
        const auto [q, closed] = analysis::rho1_mass(p);
        CHECK(closed == doctest::Approx(8.0 * kPi * (N + 1)).epsilon(1e-15));
        CHECK(std::abs(q.value - closed) <= 1e-8 * closed);
        strings.emplace_back(0.1 * (N + 1), -0.05 * N);
    }
}

TEST_CASE("tail slope constants at hand-worked values") {
    // N = 1, kappa = 2: (1/4) * (1/2) * B(1/2, 3/2) = pi/16.
    auto p = Params::make(1, 1, 1, 1, 1, {{0.0, 0.0}}, 0.3);
    CHECK(analysis::w1_slope_constant(p) == doctest::Approx(kPi / 16.0).epsilon(1e-13));
    // N = 0, kappa = 3: (1/2) * (1/3) * B(1, 2) = 1/12.
    auto q = Params::make(1, 2, 1.5, 3, 1, {}, 0.3);
    CHECK(analysis::w1_slope_constant(q) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
    // N = 0, kappa = 2: the slope vanishes identically.
    auto unit = Params::make(1, 1, 1, 1, 1, {}, 0.3);
    CHECK(analysis::w1_slope_constant(unit) == doctest::Approx(0.0));
    // lambda3 = 2 example: coupled slope is -1/2 once the beta term acts.
    auto r = Params::make(1, 1, 2, 1, 1, {}, 0.3);
    CHECK(analysis::w2_slope_constant(r) == doctest::Approx(-0.5).epsilon(1e-13));
}

TEST_CASE("slope quadrature agrees with the slope constant") {
    for (const auto& p : battery()) {
        const auto q = analysis::w1_slope_integral(p);
        const double c = analysis::w1_slope_constant(p);
        CHECK(std::abs(q.value - c) <= std::max(1e-9 * std::abs(c), 1e-11));
    }
}

TEST_CASE("pairing integrals against the translation kernel") {
    // Reduced route at the all-unit set: (pi/4) int (t-1)/(1+t)^4 dt = -pi/24.
    auto unit = Params::make(1, 1, 1, 1, 1, {}, 0.3);
    auto w1u = radial::solve_w1_formula(unit, default_radial_grid());
    auto [pair_u, red_u] = analysis::integral_Ipm(unit, w1u);
    CHECK(std::abs(red_u.value + kPi / 24.0) <= 1e-8);
    // The 2-D pairing route vanishes at this set (the correction's slope
    // is zero), which the reduced route misses entirely.
    CHECK(std::abs(pair_u.value) < 1e-6);

    // N = 1 unit set: pairing route -3 pi^2/128, reduced route -pi^2/32.
    auto n1 = Params::make(1, 1, 1, 1, 1, {{0.0, 0.0}}, 0.3);
    auto w1n1 = radial::solve_w1_formula(n1, default_radial_grid());
    auto [pair_1, red_1] = analysis::integral_Ipm(n1, w1n1);
    CHECK(pair_1.value == doctest::Approx(-3.0 * kPi * kPi / 128.0).epsilon(1e-6));
    CHECK(red_1.value == doctest::Approx(-kPi * kPi / 32.0).epsilon(1e-8));

    // N = 2 with kappa = 1: pairing route equals
    // -(pi/6) Gamma(1/3) Gamma(5/3) / 4.
    auto n2 = Params::make(1, 2, 0.5, 1, 1, {{0.3, 0.0}, {-0.3, 0.0}}, 0.3);
    auto w1n2 = radial::solve_w1_formula(n2, default_radial_grid());
    auto [pair_2, red_2] = analysis::integral_Ipm(n2, w1n2);
    const double expected =
        -(kPi / 6.0) * std::tgamma(1.0 / 3.0) * std::tgamma(5.0 / 3.0) / 4.0;
    CHECK(pair_2.value == doctest::Approx(expected).epsilon(1e-5));
    CHECK(red_2.value < 0.0);
}

TEST_CASE("operator identity for the squared-denominator profile") {
    for (const auto& p : battery()) {
        const double dev =
            analysis::check_L_identity(p, {0.3, 0.7, 1.0, 1.5, 2.5, 4.0, 7.0, 12.0});
        CHECK(dev < 1e-8);
    }
}

TEST_CASE("non-integrable second density is rejected") {
    // kappa = 0.05 with N = 0: rho2 decays too slowly to carry a mass.
    auto p = Params::make(1, 4, 0.025, 0.1, 1, {}, 0.3);
    CHECK(p.regime == Regime::Proportional);
    CHECK_THROWS_AS(analysis::rho2_mass(p), RangeError);
    CHECK_THROWS_AS(analysis::w1_slope_constant(p), RangeError);
}
