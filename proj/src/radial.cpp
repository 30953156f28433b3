#include "wstring/radial.hpp"

#include "wstring/errors.hpp"
#include "wstring/ode.hpp"
#include "wstring/profiles.hpp"
#include "wstring/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wstring {

RadialFunction::RadialFunction(std::vector<double> nodes, std::vector<double> values)
    : r_(std::move(nodes)), v_(std::move(values)) {
    if (r_.size() != v_.size() || r_.size() < 4)
        throw RangeError("radial function needs at least 4 matching nodes/values");
    if (!(r_.front() > 0.0) || r_.front() > 1e-3)
        throw RangeError("radial grid must start in (0, 1e-3]");
    for (size_t i = 0; i < r_.size(); ++i) {
        if (!std::isfinite(r_[i]) || !std::isfinite(v_[i]))
            throw RangeError("radial function entries must be finite");
        if (i > 0 && !(r_[i] > r_[i - 1]))
            throw RangeError("radial grid must be strictly increasing");
    }
    // Slopes of the interpolating parabola through each node triple;
    // exact for quadratics, one-sided at the ends.
    const size_t n = r_.size();
    m_.resize(n);
    for (size_t i = 1; i + 1 < n; ++i) {
        const double hm = r_[i] - r_[i - 1], hp = r_[i + 1] - r_[i];
        const double dm = (v_[i] - v_[i - 1]) / hm, dp = (v_[i + 1] - v_[i]) / hp;
        m_[i] = (dm * hp + dp * hm) / (hm + hp);
    }
    {
        const double h0 = r_[1] - r_[0], h1 = r_[2] - r_[1];
        const double d0 = (v_[1] - v_[0]) / h0, d1 = (v_[2] - v_[1]) / h1;
        m_[0] = d0 - h0 * (d1 - d0) / (h0 + h1);
        const double hn = r_[n - 1] - r_[n - 2], hn1 = r_[n - 2] - r_[n - 3];
        const double dn = (v_[n - 1] - v_[n - 2]) / hn,
                     dn1 = (v_[n - 2] - v_[n - 3]) / hn1;
        m_[n - 1] = dn + hn * (dn - dn1) / (hn + hn1);
    }
}

double RadialFunction::eval(double r) const {
    if (!(r >= 0.0) || r > r_.back()) {
        std::ostringstream msg;
        msg << "radial evaluation at r = " << r << " outside [0, " << r_.back() << "]";
        throw RangeError(msg.str());
    }
    if (r <= r_.front()) return v_.front();
    const auto it = std::upper_bound(r_.begin(), r_.end(), r);
    const size_t i = static_cast<size_t>(it - r_.begin()) - 1;
    const size_t j = std::min(i, r_.size() - 2);
    const double h = r_[j + 1] - r_[j];
    const double t = (r - r_[j]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * v_[j] + (t3 - 2 * t2 + t) * h * m_[j] +
           (-2 * t3 + 3 * t2) * v_[j + 1] + (t3 - t2) * h * m_[j + 1];
}

void RadialFunction::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw RangeError("cannot open " + path + " for writing");
    out << "r,value\n";
    char buf[64];
    for (size_t i = 0; i < r_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", r_[i], v_[i]);
        out << buf;
    }
}

RadialFunction RadialFunction::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RangeError("cannot open " + path);
    std::string line;
    std::getline(in, line); // header
    std::vector<double> r, v;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw RangeError("malformed row in " + path);
        r.push_back(std::stod(line.substr(0, comma)));
        v.push_back(std::stod(line.substr(comma + 1)));
    }
    return RadialFunction(std::move(r), std::move(v));
}

std::vector<double> default_radial_grid() {
    std::vector<double> g{1e-4, 2.5e-4, 5e-4, 1e-3, 2e-3, 3.5e-3};
    for (int k = 1; k <= 2000; ++k) g.push_back(0.005 * k);
    for (int k = 1; k <= 1999; ++k) g.push_back(std::pow(10.0, 1.0 + 4.0 * k / 1999.0));
    g.back() = 1e5;
    return g;
}

std::vector<double> uniform_radial_grid(double h, double r1) {
    if (!(h > 0.0) || !(r1 > h)) throw RangeError("uniform grid needs 0 < h < r1");
    std::vector<double> g;
    for (double lead : {1e-4, 2.5e-4, 5e-4, 1e-3})
        if (lead < h) g.push_back(lead);
    const int n = static_cast<int>(std::round(r1 / h));
    for (int k = 1; k <= n; ++k) g.push_back(h * k);
    return g;
}

DecayFit fit_decay(const RadialFunction& f, double r_lo, double r_hi) {
    const auto& r = f.nodes();
    const auto& v = f.values();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < r.size(); ++i) {
        if (r[i] < r_lo || r[i] > r_hi) continue;
        const double x = std::log(r[i]);
        sx += x;
        sy += v[i];
        sxx += x * x;
        sxy += x * v[i];
        ++n;
    }
    if (n < 10) {
        std::ostringstream msg;
        msg << "decay fit window [" << r_lo << ", " << r_hi << "] holds only " << n
            << " nodes (need 10)";
        throw DegeneracyError(msg.str());
    }
    const double det = n * sxx - sx * sx;
    DecayFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sxx * sy - sx * sxy) / det;
    fit.nodes_used = n;
    double ss = 0;
    for (size_t i = 0; i < r.size(); ++i) {
        if (r[i] < r_lo || r[i] > r_hi) continue;
        const double e = v[i] - (fit.slope * std::log(r[i]) + fit.intercept);
        ss += e * e;
    }
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

namespace radial {
namespace {

// Geometric sum S(r) = 1 + r + ... + r^(2N+1), the factor through which
// (1 - r^(2N+2))/(1 - r) stays polynomial.
double geom_sum(int N, double r) {
    double s = 0.0, p = 1.0;
    for (int k = 0; k < 2 * N + 2; ++k) {
        s += p;
        p *= r;
    }
    return s;
}

// Smooth inner-profile factor Q(r) = (1 + r^(2N+2))^2 / (r S(r)^2);
// equals ((1+r^p)/(1-r^p))^2 (1-r)^2 / r away from r = 1 but has no pole
// there, and Q'(1) = 0, which is what makes the outer integrand's point
// at r = 1 removable.
double q_factor(int N, double r) {
    const double t = std::pow(r, 2 * N + 2);
    const double s = geom_sum(N, r);
    return (1.0 + t) * (1.0 + t) / (r * s * s);
}

struct HermiteTable {
    std::vector<double> x, y, m;
    double eval(double r) const {
        const auto it = std::upper_bound(x.begin(), x.end(), r);
        size_t j = it == x.begin() ? 0 : static_cast<size_t>(it - x.begin()) - 1;
        j = std::min(j, x.size() - 2);
        const double h = x[j + 1] - x[j];
        const double t = std::clamp((r - x[j]) / h, 0.0, 1.0);
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y[j] + (t3 - 2 * t2 + t) * h * m[j] +
               (-2 * t3 + 3 * t2) * y[j + 1] + (t3 - t2) * h * m[j + 1];
    }
};

HermiteTable make_table(std::vector<double> x, std::vector<double> y) {
    HermiteTable tbl;
    tbl.x = std::move(x);
    tbl.y = std::move(y);
    const size_t n = tbl.x.size();
    tbl.m.assign(n, 0.0);
    for (size_t i = 1; i + 1 < n; ++i) {
        const double hm = tbl.x[i] - tbl.x[i - 1], hp = tbl.x[i + 1] - tbl.x[i];
        const double dm = (tbl.y[i] - tbl.y[i - 1]) / hm,
                     dp = (tbl.y[i + 1] - tbl.y[i]) / hp;
        tbl.m[i] = (dm * hp + dp * hm) / (hm + hp);
    }
    tbl.m[0] = (tbl.y[1] - tbl.y[0]) / (tbl.x[1] - tbl.x[0]);
    tbl.m[n - 1] = (tbl.y[n - 1] - tbl.y[n - 2]) / (tbl.x[n - 1] - tbl.x[n - 2]);
    return tbl;
}

} // namespace

RadialFunction solve_w1_formula(const Params& p, const std::vector<double>& grid) {
    const int N = p.N();
    auto source = [&](double r) { return -p.lambda1 * profiles::rho2(p, r); };

    // Stop list: the grid plus the patch boundaries and r = 1 itself, so
    // cumulative panels never straddle the integrand switch; r = 1 is
    // needed even when the grid ends below it, since the boundary term
    // carries J(1).
    std::vector<double> stops = grid;
    for (double extra : {0.99, 1.0, 1.01}) stops.push_back(extra);
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
    std::vector<double> stops0 = stops;
    stops0.insert(stops0.begin(), 0.0);

    QuadratureOptions inner_opts;
    inner_opts.abs_tol = 1e-13;
    inner_opts.rel_tol = 1e-11;
    inner_opts.max_evaluations = 40000000;

    // J(r) = int_0^r phi0(t) t f(t) dt, tabulated from 0 so the 1/r in
    // Q(r) meets the genuine O(r^2) vanishing of J instead of an
    // extrapolation artifact.
    auto j_integrand = [&](double t) { return profiles::phi0(N, t) * t * source(t); };
    std::vector<double> jvals = integrate_cumulative(j_integrand, stops0, inner_opts);
    HermiteTable jtab = make_table(stops0, jvals);

    const double phi_f_1 = jtab.eval(1.0) / ((N + 1) * (N + 1));

    auto phi_f = [&](double r) { return q_factor(N, r) * jtab.eval(r); };

    // Quartic Taylor coefficients of phi_f at r = 1 from a 5-point
    // stencil; phi_f'(1) vanishes identically, so the patch starts at
    // the second derivative.
    const double fd = 2e-3;
    const double fm2 = phi_f(1 - 2 * fd), fm1 = phi_f(1 - fd), f0 = phi_f_1,
                 fp1 = phi_f(1 + fd), fp2 = phi_f(1 + 2 * fd);
    const double d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * fd * fd);
    const double d3 = (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * fd * fd * fd);
    const double d4 = (fp2 - 4 * fp1 + 6 * f0 - 4 * fm1 + fm2) / (fd * fd * fd * fd);

    auto outer_integrand = [&](double s) {
        const double d = s - 1.0;
        if (std::abs(d) < 0.01) return d2 / 2 + d3 * d / 6 + d4 * d * d / 24;
        return (phi_f(s) - phi_f_1) / (d * d);
    };

    QuadratureOptions outer_opts = inner_opts;
    std::vector<double> kvals = integrate_cumulative(outer_integrand, stops0, outer_opts);
    kvals.erase(kvals.begin());

    // Assemble on the requested grid only.  The boundary-term product
    // phi0 * r/(1-r) is rewritten as r S(r)/(1+r^(2N+2)), which is finite
    // everywhere including r = 1.
    std::vector<double> values;
    values.reserve(grid.size());
    size_t si = 0;
    for (double r : grid) {
        while (stops[si] != r) ++si;
        const double t = std::pow(r, 2 * N + 2);
        const double boundary = phi_f_1 * r * geom_sum(N, r) / (1.0 + t);
        values.push_back(profiles::phi0(N, r) * kvals[si] + boundary);
    }
    return RadialFunction(grid, values);
}

RadialFunction solve_w1_ode(const Params& p, const std::vector<double>& grid, double v0) {
    const int N = p.N();
    const double rho1_0 = N == 0 ? 8.0 / p.lambda2 : 0.0;
    const double c2 = -(p.lambda2 * rho1_0 * v0 + p.lambda1 * p.c0) / 4.0;
    const double r_start = 1e-6;

    std::vector<double> stops{r_start};
    for (double r : grid)
        if (r > r_start) stops.push_back(r);

    auto rhs = [&](double r, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = -y[1] / r - p.lambda2 * profiles::rho1(p, r) * y[0] -
                p.lambda1 * profiles::rho2(p, r);
    };

    std::vector<double> values;
    values.reserve(grid.size());
    OdeOptions opts;
    opts.rel_tol = 1e-11;
    opts.abs_tol = 1e-13;
    integrate_ode(rhs, {v0 + c2 * r_start * r_start, 2.0 * c2 * r_start}, stops,
                  [&](double t, const std::vector<double>& y) {
                      if (t > r_start || grid.front() == r_start) values.push_back(y[0]);
                  },
                  opts);
    // Grid nodes at or below the series start (none with the standard
    // grids) would have been skipped; guard against miscounts.
    if (values.size() != grid.size())
        throw NumericalError("ODE route missed grid nodes below the series start");
    return RadialFunction(grid, values);
}

RadialFunction solve_w2(const Params& p, const RadialFunction& w1,
                        const std::vector<double>& grid) {
    if (w1.nodes() != grid)
        throw RangeError("solve_w2 requires w1 sampled on the same grid");
    const double ratio = p.lambda4 / p.lambda2;
    const double q = (p.lambda1 * p.lambda4 - p.lambda2 * p.lambda3) / p.lambda2;

    std::vector<double> values(grid.size());
    if (q == 0.0 || p.regime == Regime::Proportional) {
        for (size_t i = 0; i < grid.size(); ++i) values[i] = ratio * w1.values()[i];
        return RadialFunction(grid, values);
    }

    // V(r) = ln r * int_0^r rho2 s ds + int_r^inf rho2 ln s * s ds solves
    // Delta V = rho2 and stays bounded at the origin.
    QuadratureOptions opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-11;
    opts.max_evaluations = 40000000;
    std::vector<double> stops0 = grid;
    stops0.insert(stops0.begin(), 0.0);
    auto mass_integrand = [&](double s) { return profiles::rho2(p, s) * s; };
    auto log_integrand = [&](double s) {
        return s <= 0.0 ? 0.0 : profiles::rho2(p, s) * std::log(s) * s;
    };
    std::vector<double> inner = integrate_cumulative(mass_integrand, stops0, opts);
    std::vector<double> logpart = integrate_cumulative(log_integrand, stops0, opts);
    inner.erase(inner.begin());
    logpart.erase(logpart.begin());

    // Tail of the ln-weighted integral beyond the grid, on the
    // compactified variable shifted to start at r_max.
    const double rmax = grid.back();
    QuadratureResult tail = integrate(
        [&](double s) {
            const double om = 1.0 - s;
            const double r = rmax + s / om;
            return profiles::rho2(p, r) * std::log(r) * r / (om * om);
        },
        0.0, 1.0 - 1e-14, opts);
    const double log_total = logpart.back() + tail.value;

    for (size_t i = 0; i < grid.size(); ++i) {
        const double V = std::log(grid[i]) * inner[i] + (log_total - logpart[i]);
        values[i] = ratio * w1.values()[i] + q * V;
    }
    return RadialFunction(grid, values);
}

namespace {

std::vector<double> residual_impl(const RadialFunction& w,
                                  const std::function<double(double, double)>& lhs_rest) {
    const auto& r = w.nodes();
    const auto& v = w.values();
    std::vector<double> res(r.size(), 0.0);
    for (size_t i = 1; i + 1 < r.size(); ++i) {
        const double hm = r[i] - r[i - 1], hp = r[i + 1] - r[i];
        const double d2 =
            2.0 * (hm * v[i + 1] + hp * v[i - 1] - (hm + hp) * v[i]) / (hm * hp * (hm + hp));
        const double d1 = (hm * hm * v[i + 1] - hp * hp * v[i - 1] +
                           (hp * hp - hm * hm) * v[i]) /
                          (hm * hp * (hm + hp));
        res[i] = d2 + d1 / r[i] + lhs_rest(r[i], v[i]);
    }
    return res;
}

} // namespace

std::vector<double> ode_residual_w1(const Params& p, const RadialFunction& w1) {
    return residual_impl(w1, [&](double r, double v) {
        return p.lambda2 * profiles::rho1(p, r) * v + p.lambda1 * profiles::rho2(p, r);
    });
}

std::vector<double> ode_residual_w2(const Params& p, const RadialFunction& w1,
                                    const RadialFunction& w2) {
    if (w1.nodes() != w2.nodes())
        throw RangeError("residual check requires w1 and w2 on the same grid");
    size_t idx = 0;
    return residual_impl(w2, [&, idx](double r, double) mutable {
        while (idx < w1.nodes().size() && w1.nodes()[idx] != r) ++idx;
        const double w1v = idx < w1.nodes().size() ? w1.values()[idx] : w1.eval(r);
        return p.lambda4 * profiles::rho1(p, r) * w1v + p.lambda3 * profiles::rho2(p, r);
    });
}

} // namespace radial
} // namespace wstring
