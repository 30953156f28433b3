#pragma once

#include <functional>
#include <vector>

namespace wstring {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
};

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    long max_evaluations = 1000000;
    // Equal panels evaluated before adaptive refinement starts.  The
    // sweep protects against localized features the 15 nodes of a single
    // opening panel would miss entirely; callers integrating over
    // segments they have already sized (cumulative stops) drop it to 1.
    int initial_panels = 16;
};

// Globally adaptive Gauss-Kronrod 7/15 integration of f over [a, b].
// Keeps a worst-first queue of panels and bisects until the summed error
// estimate meets max(abs_tol, rel_tol * |value|).  Throws NumericalError
// with the panel diagnostics if the evaluation budget runs out first.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

// Integral of g over [0, inf), computed on the compactified variable
// r = s / (1 - s), s in [0, 1).  The Jacobian 1/(1-s)^2 is applied
// internally; g must decay fast enough for the integral to exist.
QuadratureResult integrate_radial_to_infinity(const std::function<double(double)>& g,
                                              const QuadratureOptions& opts = {});

// Running integral of f along sorted stop points: result[k] holds the
// integral from stops[0] to stops[k], each panel integrated adaptively.
// The summed error estimate and evaluation count land in *total if given.
std::vector<double> integrate_cumulative(const std::function<double(double)>& f,
                                         const std::vector<double>& stops,
                                         const QuadratureOptions& opts = {},
                                         QuadratureResult* total = nullptr);

} // namespace wstring
