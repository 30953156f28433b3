#include "wstring/params.hpp"
#include "wstring/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace wstring {

Params Params::make(double lambda1, double lambda2, double lambda3, double lambda4,
                    double c0, std::vector<std::complex<double>> strings, double epsilon,
                    double a1, double a2) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            std::ostringstream msg;
            msg << name << " must be positive and finite, got " << v;
            throw AdmissibilityError(msg.str());
        }
    };
    auto nonnegative = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            std::ostringstream msg;
            msg << name << " must be nonnegative and finite, got " << v;
            throw AdmissibilityError(msg.str());
        }
    };
    // The source couplings may vanish (a zero lambda1 just turns off the
    // first correction); the two that appear in denominators may not.
    nonnegative(lambda1, "lambda1");
    positive(lambda2, "lambda2");
    nonnegative(lambda3, "lambda3");
    positive(lambda4, "lambda4");
    positive(c0, "c0");
    if (!(epsilon > 0.0) || epsilon > 1.0) {
        std::ostringstream msg;
        msg << "epsilon must lie in (0, 1], got " << epsilon;
        throw AdmissibilityError(msg.str());
    }
    for (const auto& s : strings) {
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw AdmissibilityError("string locations must be finite");
    }

    Params p;
    p.lambda1 = lambda1;
    p.lambda2 = lambda2;
    p.lambda3 = lambda3;
    p.lambda4 = lambda4;
    p.c0 = c0;
    p.strings = std::move(strings);
    p.epsilon = epsilon;
    p.a1 = a1;
    p.a2 = a2;

    const double cross = lambda1 * lambda4 - lambda2 * lambda3;
    const double scale = std::max(lambda1 * lambda4, lambda2 * lambda3);
    if (std::abs(cross) <= 1e-12 * scale) {
        p.regime = Regime::Proportional;
    } else if (lambda2 / (2.0 * lambda4) < p.N() + 1) {
        p.regime = Regime::NonproportionalDecay;
    } else {
        std::ostringstream msg;
        msg << "inadmissible couplings: lambda1*lambda4 - lambda2*lambda3 = " << cross
            << " and lambda2/(2*lambda4) = " << lambda2 / (2.0 * lambda4)
            << " >= N + 1 = " << p.N() + 1;
        throw AdmissibilityError(msg.str());
    }
    return p;
}

Params PhysicalPreset::to_params(double c0, std::vector<std::complex<double>> strings,
                                 double epsilon, double a1, double a2) const {
    if (!(m_w > 0.0) || !(e_charge > 0.0) || !(G > 0.0))
        throw AdmissibilityError("physical preset requires m_w, e_charge, G all positive");
    const double pi = std::numbers::pi;
    const double m2 = m_w * m_w;
    return Params::make(2.0 * m2, 4.0 * e_charge * e_charge,
                        16.0 * pi * G * m2 * m2 / (e_charge * e_charge),
                        32.0 * pi * G * m2, c0, std::move(strings), epsilon, a1, a2);
}

std::string regime_name(Regime r) {
    return r == Regime::Proportional ? "proportional" : "nonproportional-decay";
}

} // namespace wstring
