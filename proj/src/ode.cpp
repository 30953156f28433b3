#include "wstring/ode.hpp"
#include "wstring/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wstring {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

} // namespace

void integrate_ode(const std::function<void(double, const std::vector<double>&, std::vector<double>&)>& f,
                   std::vector<double> y,
                   const std::vector<double>& stops,
                   const std::function<void(double, const std::vector<double>&)>& on_stop,
                   const OdeOptions& opts) {
    if (stops.size() < 2) {
        if (!stops.empty() && on_stop) on_stop(stops.front(), y);
        return;
    }
    const size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);
    double t = stops.front();
    if (on_stop) on_stop(t, y);
    double h = opts.initial_step;
    long steps = 0;
    bool fresh_k1 = false;
    for (size_t target_idx = 1; target_idx < stops.size(); ++target_idx) {
        const double target = stops[target_idx];
        while (t < target) {
            if (++steps > opts.max_steps) {
                std::ostringstream msg;
                msg << "ODE step budget exhausted at t = " << t;
                throw NumericalError(msg.str());
            }
            const bool clipped = h > target - t;
            const double hs = clipped ? target - t : h;
            if (!fresh_k1) f(t, y, k1);
            for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
            f(t + c2 * hs, ytmp, k2);
            for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
            f(t + c3 * hs, ytmp, k3);
            for (size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            f(t + c4 * hs, ytmp, k4);
            for (size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            f(t + c5 * hs, ytmp, k5);
            for (size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                       a65 * k5[i]);
            f(t + hs, ytmp, k6);
            for (size_t i = 0; i < n; ++i)
                ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                       b6 * k6[i]);
            f(t + hs, ynew, k7);
            double errnorm = 0.0;
            for (size_t i = 0; i < n; ++i) {
                const double err = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                         e6 * k6[i] + e7 * k7[i]);
                const double scale =
                    opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                errnorm = std::max(errnorm, std::abs(err) / scale);
            }
            const double factor =
                std::clamp(0.9 * std::pow(std::max(errnorm, 1e-16), -0.2), 0.2, 5.0);
            if (errnorm <= 1.0) {
                t += hs;
                y.swap(ynew);
                k1.swap(k7); // FSAL
                fresh_k1 = true;
                if (!clipped) h = hs * factor;
            } else {
                fresh_k1 = false;
                h = hs * factor;
            }
            if (h < opts.min_step) {
                std::ostringstream msg;
                msg << "ODE step size underflow (h = " << h << ") at t = " << t;
                throw NumericalError(msg.str());
            }
        }
        t = target;
        if (on_stop) on_stop(t, y);
    }
}

} // namespace wstring
