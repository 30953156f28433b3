#include "wstring/quadrature.hpp"
#include "wstring/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace wstring {
namespace {

// Kronrod 15-point nodes on [-1, 1] (positive half) and weights; the
// embedded Gauss 7-point rule uses the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);
    double resk = 0.0, resg = 0.0;
    for (int i = 0; i < 7; ++i) resk += kWgk[i] * (fv[i] + fv[14 - i]);
    resk += kWgk[7] * fv[7];
    for (int i = 0; i < 3; ++i) resg += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    resg += kWg[3] * fv[7];
    Panel p;
    p.a = a;
    p.b = b;
    p.value = resk * h;
    p.error = std::abs((resk - resg) * h);
    return p;
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
    QuadratureResult res;
    if (a == b) return res;
    std::priority_queue<Panel> queue;
    long panels = std::max(1, opts.initial_panels);
    panels = std::min(panels, std::max(1L, opts.max_evaluations / 15));
    double total = 0.0;
    double toterr = 0.0;
    for (long k = 0; k < panels; ++k) {
        const double pa = a + (b - a) * static_cast<double>(k) / static_cast<double>(panels);
        const double pb = k + 1 == panels
                              ? b
                              : a + (b - a) * static_cast<double>(k + 1) / static_cast<double>(panels);
        Panel panel = evaluate_panel(f, pa, pb);
        res.evaluations += 15;
        total += panel.value;
        toterr += panel.error;
        queue.push(panel);
    }
    while (toterr > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
        if (queue.empty()) break;
        if (res.evaluations + 30 > opts.max_evaluations) {
            std::ostringstream msg;
            msg << "quadrature did not converge on [" << a << ", " << b
                << "]: error estimate " << toterr << " after " << res.evaluations
                << " evaluations (value so far " << total << ")";
            throw NumericalError(msg.str());
        }
        Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Panel collapsed to machine width; its error is irreducible.
            // Keep it out of the queue and accept the remaining estimate.
            toterr -= worst.error;
            continue;
        }
        Panel left = evaluate_panel(f, worst.a, mid);
        Panel right = evaluate_panel(f, mid, worst.b);
        res.evaluations += 30;
        total += left.value + right.value - worst.value;
        toterr += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
    }
    res.value = total;
    res.abs_error_estimate = toterr;
    return res;
}

QuadratureResult integrate_radial_to_infinity(const std::function<double(double)>& g,
                                              const QuadratureOptions& opts) {
    auto mapped = [&g](double s) {
        const double om = 1.0 - s;
        const double r = s / om;
        return g(r) / (om * om);
    };
    // Stop a hair short of s = 1; the integrand must already be negligible
    // there (r ~ 1e14) for the integral to exist.
    return integrate(mapped, 0.0, 1.0 - 1e-14, opts);
}

std::vector<double> integrate_cumulative(const std::function<double(double)>& f,
                                         const std::vector<double>& stops,
                                         const QuadratureOptions& opts,
                                         QuadratureResult* total) {
    std::vector<double> out;
    out.reserve(stops.size());
    double acc = 0.0, errs = 0.0;
    long evals = 0;
    QuadratureOptions seg_opts = opts;
    seg_opts.initial_panels = 1; // the stops themselves size the panels
    for (size_t i = 0; i < stops.size(); ++i) {
        if (i > 0) {
            QuadratureResult r = integrate(f, stops[i - 1], stops[i], seg_opts);
            acc += r.value;
            errs += r.abs_error_estimate;
            evals += r.evaluations;
        }
        out.push_back(acc);
    }
    if (total) {
        total->value = acc;
        total->abs_error_estimate = errs;
        total->evaluations = evals;
    }
    return out;
}

} // namespace wstring
