#pragma once

#include <complex>
#include <string>
#include <vector>

namespace wstring {

enum class Regime { Proportional, NonproportionalDecay };

// Coupling constants, string locations, and scaling parameters for one run.
// Construct through make() so the admissibility conditions are enforced.
struct Params {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double lambda3 = 1.0;
    double lambda4 = 1.0;
    double c0 = 1.0;
    std::vector<std::complex<double>> strings; // repeats encode multiplicity
    double epsilon = 0.1;
    double a1 = 0.0;
    double a2 = 0.0;
    Regime regime = Regime::Proportional;

    int N() const { return static_cast<int>(strings.size()); }
    double kappa() const { return 2.0 * lambda4 / lambda2; }
    std::complex<double> a() const { return {a1, a2}; }

    // Validates positivity, epsilon in (0, 1], and the admissibility
    // dichotomy: either lambda1*lambda4 == lambda2*lambda3 to relative
    // 1e-12 (proportional) or lambda2/(2*lambda4) < N + 1 (decay).
    // Throws AdmissibilityError otherwise.
    static Params make(double lambda1, double lambda2, double lambda3, double lambda4,
                       double c0, std::vector<std::complex<double>> strings,
                       double epsilon, double a1 = 0.0, double a2 = 0.0);
};

// Symmetry-broken gauge couplings: any (m_w, e_charge, G) triple lands
// exactly on the proportional ray lambda1*lambda4 = lambda2*lambda3.
struct PhysicalPreset {
    double m_w = 1.0;
    double e_charge = 1.0;
    double G = 1.0;

    Params to_params(double c0, std::vector<std::complex<double>> strings, double epsilon,
                     double a1 = 0.0, double a2 = 0.0) const;
};

std::string regime_name(Regime r);

} // namespace wstring
