#include "wstring/analysis.hpp"

#include "wstring/errors.hpp"
#include "wstring/profiles.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace wstring {
namespace analysis {
namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_pair(double x, double y, const char* who) {
    if (!(x > 0.0) || !(y > 0.0)) {
        std::ostringstream msg;
        msg << who << " needs positive arguments, got (" << x << ", " << y << ")";
        throw RangeError(msg.str());
    }
}

// kappa > 1/(N+1) is the convergence threshold shared by the rho2 mass,
// the beta closed forms, and the slope integrals.
void require_integrable_tail(const Params& p, const char* who) {
    const double m = 1.0 / (p.N() + 1);
    if (!(p.kappa() > m)) {
        std::ostringstream msg;
        msg << who << " diverges: kappa = " << p.kappa() << " <= 1/(N+1) = " << m;
        throw RangeError(msg.str());
    }
}

QuadratureOptions tight_opts() {
    QuadratureOptions o;
    o.abs_tol = 1e-13;
    o.rel_tol = 1e-11;
    o.max_evaluations = 4000000;
    return o;
}

// Sum of adaptive panels over a log-structured split of [0, r_max]; the
// plain compactified map wastes panels when the integrand lives near
// r ~ 1 and the interval runs to 1e5.
QuadratureResult integrate_split(const std::function<double(double)>& f, double r_max,
                                 const QuadratureOptions& opts) {
    std::vector<double> stops{0.0};
    for (double s : {0.5, 1.0, 2.0, 5.0, 10.0, 100.0, 1e3, 1e4})
        if (s < r_max) stops.push_back(s);
    stops.push_back(r_max);
    QuadratureResult total;
    integrate_cumulative(f, stops, opts, &total);
    return total;
}

} // namespace

double beta_fn(double x, double y) {
    require_positive_pair(x, y, "beta_fn");
    return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

QuadratureResult beta_fn_integral(double x, double y) {
    require_positive_pair(x, y, "beta_fn_integral");
    QuadratureOptions opts;
    opts.abs_tol = 1e-14;
    opts.rel_tol = 1e-12;
    opts.max_evaluations = 20000000;
    // Fold the interval at 1/2 so each endpoint singularity sits at a
    // left endpoint: refinement toward t = 1 would eventually round a
    // node onto the singular point (doubles below 1 step by ~1e-16),
    // while t = 0 is approached through subnormals without ever landing
    // on it.
    auto half = [&opts](double u, double v) {
        return integrate(
            [u, v](double t) { return std::pow(t, u - 1.0) * std::pow(1.0 - t, v - 1.0); }, 0.0,
            0.5, opts);
    };
    const QuadratureResult lo = half(x, y);
    const QuadratureResult hi = half(y, x);
    QuadratureResult out;
    out.value = lo.value + hi.value;
    out.abs_error_estimate = lo.abs_error_estimate + hi.abs_error_estimate;
    out.evaluations = lo.evaluations + hi.evaluations;
    return out;
}

double const_C1(const Params& p) {
    return p.c0 * p.lambda1 * p.lambda2 * p.lambda4 /
           (2.0 * (p.N() + 1) * (p.lambda2 + p.lambda4) * (p.lambda2 + 2.0 * p.lambda4));
}

DecayConstants decay_constants(const Params& p) {
    DecayConstants out;
    out.C1 = const_C1(p);
    if (p.regime == Regime::Proportional) {
        out.beta_term = 0.0;
    } else {
        require_integrable_tail(p, "decay_constants");
        const double m = 1.0 / (p.N() + 1);
        out.beta_term = (p.lambda1 * p.lambda4 - p.lambda2 * p.lambda3) / p.lambda2 *
                        p.c0 * beta_fn(m, p.kappa() - m) / (2.0 * (p.N() + 1));
    }
    out.C2 = p.lambda4 / p.lambda2 * out.C1 - out.beta_term;
    return out;
}

QuadratureResult integral_I(const Params& p) {
    require_integrable_tail(p, "integral_I");
    const double norm = p.lambda1 * p.lambda2 / (8.0 * (p.N() + 1) * (p.N() + 1));
    return integrate_radial_to_infinity(
        [&p, norm](double r) {
            return norm * profiles::phi0(p.N(), r) * profiles::rho1(p, r) *
                   profiles::rho2(p, r) * r;
        },
        tight_opts());
}

QuadratureResult w1_slope_integral(const Params& p) {
    require_integrable_tail(p, "w1_slope_integral");
    return integrate_radial_to_infinity(
        [&p](double r) {
            return p.lambda1 * profiles::phi0(p.N(), r) * profiles::rho2(p, r) * r;
        },
        tight_opts());
}

double w1_slope_constant(const Params& p) {
    require_integrable_tail(p, "w1_slope_constant");
    const double m = 1.0 / (p.N() + 1);
    const double k = p.kappa();
    return p.lambda1 * p.c0 / (2.0 * (p.N() + 1)) * (k - 2.0 * m) / k *
           beta_fn(m, k - m);
}

double w2_slope_constant(const Params& p) {
    const double slope1 = w1_slope_constant(p);
    if (p.regime == Regime::Proportional) return p.lambda4 / p.lambda2 * slope1;
    const double m = 1.0 / (p.N() + 1);
    return p.lambda4 / p.lambda2 * slope1 +
           (p.lambda1 * p.lambda4 - p.lambda2 * p.lambda3) / p.lambda2 * p.c0 *
               beta_fn(m, p.kappa() - m) / (2.0 * (p.N() + 1));
}

std::pair<QuadratureResult, double> rho2_mass(const Params& p) {
    require_integrable_tail(p, "rho2_mass");
    QuadratureResult quad = integrate_radial_to_infinity(
        [&p](double r) { return 2.0 * kPi * profiles::rho2(p, r) * r; }, tight_opts());
    const double m = 1.0 / (p.N() + 1);
    const double closed = kPi * p.c0 / (p.N() + 1) * beta_fn(m, p.kappa() - m);
    return {quad, closed};
}

std::pair<QuadratureResult, double> rho1_mass(const Params& p) {
    QuadratureResult quad = integrate_radial_to_infinity(
        [&p](double r) { return 2.0 * kPi * p.lambda2 * profiles::rho1(p, r) * r; },
        tight_opts());
    return {quad, 8.0 * kPi * (p.N() + 1)};
}

std::pair<QuadratureResult, QuadratureResult> integral_Ipm(const Params& p,
                                                           const RadialFunction& w1) {
    require_integrable_tail(p, "integral_Ipm");
    const int N = p.N();
    const double rmax = w1.r_max();

    auto pm2 = [N](double r) {
        const double f = profiles::phi_pm_radial(N, r);
        return f * f;
    };
    QuadratureResult direct = integrate_split(
        [&](double r) {
            const double weight =
                p.lambda2 * profiles::rho1(p, r) * w1.eval(r) + p.lambda1 * profiles::rho2(p, r);
            return kPi * weight * pm2(r) * r;
        },
        rmax, tight_opts());

    // Tail beyond the w1 grid: |w1| grows at most logarithmically, so
    // bound it by (C+1) ln r and fold the bound into the error estimate.
    const double log_cap =
        std::max(std::abs(const_C1(p)), std::abs(w1_slope_constant(p))) + 1.0;
    QuadratureOptions loose = tight_opts();
    loose.rel_tol = 1e-6;
    QuadratureResult tail = integrate(
        [&](double s) {
            const double om = 1.0 - s;
            const double r = rmax + s / om;
            const double bound = p.lambda2 * profiles::rho1(p, r) * log_cap * std::log(r) +
                                 p.lambda1 * profiles::rho2(p, r);
            return kPi * bound * pm2(r) * r / (om * om);
        },
        0.0, 1.0 - 1e-14, loose);
    direct.abs_error_estimate += std::abs(tail.value) + tail.abs_error_estimate;
    direct.evaluations += tail.evaluations;

    // Reduced 1-D form in the variable t = r^2-like radial power.
    QuadratureResult reduced = integrate_radial_to_infinity(
        [&](double t) {
            const double tp = std::pow(t, N + 1);
            if (std::isinf(tp)) return 0.0;
            const double den = 1.0 + tp;
            return kPi * p.lambda1 * p.c0 / 4.0 * (tp - 1.0) /
                   std::pow(den, 2.0 + p.kappa());
        },
        tight_opts());
    return {direct, reduced};
}

double check_L_identity(const Params& p, const std::vector<double>& radii) {
    const int N = p.N();
    const double pw = 2.0 * N + 2.0;
    double worst = 0.0;
    for (double r : radii) {
        if (!(r >= 0.0)) throw RangeError("check_L_identity needs r >= 0");
        const double t = std::pow(r, pw);
        const double den = 1.0 + t;
        const double u = 1.0 / (16.0 * den * den);
        // u'' + u'/r for u = (1+r^pw)^-2 / 16, written without a bare /r
        // so r = 0 is fine.
        const double lap = -(pw * pw / 8.0) * (std::pow(r, pw - 2.0) / (den * den * den) -
                                               3.0 * std::pow(r, 2.0 * pw - 2.0) /
                                                   (den * den * den * den));
        const double lhs = lap + p.lambda2 * profiles::rho1(p, r) * u;
        const double rhs =
            (N + 1) * (N + 1) * std::pow(r, 4.0 * N + 2.0) / (den * den * den * den);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

} // namespace analysis
} // namespace wstring
