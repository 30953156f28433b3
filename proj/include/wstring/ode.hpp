#pragma once

#include <functional>
#include <vector>

namespace wstring {

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 1e-4;
    double min_step = 1e-14;
    long max_steps = 20000000;
};

// Integrates y' = f(t, y) from stops.front() to stops.back() with an
// embedded Dormand-Prince 5(4) pair and standard step control, clipping
// steps so every stop point is hit exactly.  on_stop(t, y) fires at each
// stop, including the first.  Throws NumericalError on step underflow or
// step budget exhaustion.
void integrate_ode(const std::function<void(double, const std::vector<double>&, std::vector<double>&)>& f,
                   std::vector<double> y0,
                   const std::vector<double>& stops,
                   const std::function<void(double, const std::vector<double>&)>& on_stop,
                   const OdeOptions& opts = {});

} // namespace wstring
