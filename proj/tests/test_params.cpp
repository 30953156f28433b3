#include "doctest.h"

#include "wstring/errors.hpp"
#include "wstring/params.hpp"

#include <cmath>
#include <limits>

using namespace wstring;

TEST_CASE("unit couplings are proportional") {
    auto p = Params::make(1, 1, 1, 1, 1, {{0.5, 0.0}, {-0.5, 0.0}}, 0.3);
    CHECK(p.regime == Regime::Proportional);
    CHECK(p.N() == 2);
    CHECK(p.kappa() == doctest::Approx(2.0));
    CHECK(regime_name(p.regime) == "proportional");
}

TEST_CASE("nonproportional couplings under the decay bound are accepted") {
    auto p = Params::make(1, 1, 2, 1, 1, {{0.0, 0.0}}, 0.2);
    CHECK(p.regime == Regime::NonproportionalDecay);
    CHECK(regime_name(p.regime) == "nonproportional-decay");
}

TEST_CASE("nonproportional couplings violating the decay bound are rejected") {
    // lambda2/(2 lambda4) = 5 against N + 1 = 2.
    CHECK_THROWS_AS(Params::make(1, 4, 1, 0.4, 1, {{0.0, 0.0}}, 0.3), AdmissibilityError);
    // The same couplings become admissible with enough strings.
    auto p = Params::make(1, 4, 1, 0.4, 1,
                          {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}}, 0.3);
    CHECK(p.regime == Regime::NonproportionalDecay);
}

TEST_CASE("coupling positivity rules") {
    CHECK_THROWS_AS(Params::make(1, 0, 1, 1, 1, {}, 0.3), AdmissibilityError);
    CHECK_THROWS_AS(Params::make(1, 1, 1, 0, 1, {}, 0.3), AdmissibilityError);
    CHECK_THROWS_AS(Params::make(1, 1, 1, 1, 0, {}, 0.3), AdmissibilityError);
    CHECK_THROWS_AS(Params::make(-1, 1, 1, 1, 1, {}, 0.3), AdmissibilityError);
    CHECK_THROWS_AS(Params::make(1, 1, -2, 1, 1, {}, 0.3), AdmissibilityError);
    // Vanishing source couplings are allowed (they just switch a
    // correction off); proportionality then pairs them.
    auto p = Params::make(0, 1, 0, 1, 1, {}, 0.3);
    CHECK(p.regime == Regime::Proportional);
}

TEST_CASE("epsilon range is enforced") {
    CHECK_THROWS_AS(Params::make(1, 1, 1, 1, 1, {}, 0.0), AdmissibilityError);
    CHECK_THROWS_AS(Params::make(1, 1, 1, 1, 1, {}, -0.1), AdmissibilityError);
    CHECK_THROWS_AS(Params::make(1, 1, 1, 1, 1, {}, 1.5), AdmissibilityError);
    CHECK_NOTHROW(Params::make(1, 1, 1, 1, 1, {}, 1.0));
}

TEST_CASE("string locations must be finite") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(Params::make(1, 1, 1, 1, 1, {{nan, 0.0}}, 0.3), AdmissibilityError);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Params::make(1, 1, 1, 1, 1, {{0.0, inf}}, 0.3), AdmissibilityError);
}

TEST_CASE("physical preset lands exactly on the proportional ray") {
    PhysicalPreset preset;
    preset.m_w = 1.3;
    preset.e_charge = 0.8;
    preset.G = 0.05;
    auto p = preset.to_params(1.0, {{0.5, 0.0}}, 0.3);
    const double pi = 3.14159265358979323846;
    CHECK(p.lambda1 == doctest::Approx(2.0 * 1.69).epsilon(1e-15));
    CHECK(p.lambda2 == doctest::Approx(4.0 * 0.64).epsilon(1e-15));
    CHECK(p.lambda3 == doctest::Approx(16.0 * pi * 0.05 * 1.69 * 1.69 / 0.64).epsilon(1e-15));
    CHECK(p.lambda4 == doctest::Approx(32.0 * pi * 0.05 * 1.69).epsilon(1e-15));
    CHECK(p.lambda1 * p.lambda4 == doctest::Approx(p.lambda2 * p.lambda3).epsilon(1e-14));
    CHECK(p.regime == Regime::Proportional);
    CHECK_THROWS_AS((PhysicalPreset{1.0, 0.0, 1.0}.to_params(1.0, {}, 0.3)), AdmissibilityError);
}

TEST_CASE("accessors expose the derived quantities") {
    auto p = Params::make(1, 2, 0.5, 1, 1, {{0.0, 0.0}, {1.0, 1.0}}, 0.25, 0.1, -0.2);
    CHECK(p.kappa() == doctest::Approx(1.0));
    CHECK(p.N() == 2);
    CHECK(p.a() == std::complex<double>(0.1, -0.2));
    CHECK(p.epsilon == 0.25);
}
