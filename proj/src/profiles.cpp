#include "wstring/profiles.hpp"
#include "wstring/errors.hpp"

#include <cmath>
#include <sstream>

namespace wstring {
namespace profiles {
namespace {

// ln(1 + |w|^2) without forming |w|^2 when it would lose precision or
// overflow; for large |w| uses 2 ln|w| + ln(1 + 1/|w|^2).
double log1p_sqr_abs(Complex w) {
    const double aw = std::abs(w);
    if (aw < 1e8) return std::log1p(aw * aw);
    return 2.0 * std::log(aw) + std::log1p(1.0 / (aw * aw));
}

} // namespace

Complex eval_f(const Params& p, Complex z) {
    Complex prod(1.0, 0.0);
    for (const auto& zj : p.strings) prod *= z - zj;
    return static_cast<double>(p.N() + 1) * prod;
}

std::vector<Complex> f_coefficients(const Params& p) {
    // Multiply out prod (z - z_j) one root at a time.
    std::vector<Complex> c{Complex(1.0, 0.0)};
    for (const auto& zj : p.strings) {
        std::vector<Complex> next(c.size() + 1, Complex(0.0, 0.0));
        for (size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= zj * c[k];
        }
        c = std::move(next);
    }
    const double lead = p.N() + 1;
    for (auto& ck : c) ck *= lead;
    return c;
}

Complex eval_F(const Params& p, Complex z) {
    const std::vector<Complex> c = f_coefficients(p);
    // Horner on the antiderivative sum_k c_k z^(k+1) / (k+1).
    Complex acc(0.0, 0.0);
    for (size_t k = c.size(); k-- > 0;) {
        acc = acc * z + c[k] / static_cast<double>(k + 1);
    }
    return acc * z;
}

Complex eval_G(const Params& p, Complex z) {
    return std::pow(p.epsilon, p.N() + 1) * eval_F(p, z) + p.a();
}

double log_denom(const Params& p, Complex z) { return log1p_sqr_abs(eval_G(p, z)); }

double log_rho_I(const Params& p, Complex z) {
    // Sum the root logs instead of taking log of the product so the
    // numerator cannot overflow however far out z sits; the result is
    // -inf exactly at string points.
    double lf = std::log(static_cast<double>(p.N() + 1));
    for (const auto& zj : p.strings) lf += std::log(std::abs(z - zj));
    return std::log(8.0 / p.lambda2) + (2.0 * p.N() + 2.0) * std::log(p.epsilon) +
           2.0 * lf - 2.0 * log1p_sqr_abs(eval_G(p, z));
}

double rho_I(const Params& p, Complex z) { return std::exp(log_rho_I(p, z)); }

double log_rho_II(const Params& p, Complex z) {
    return std::log(p.c0) + 4.0 * std::log(p.epsilon) -
           p.kappa() * log1p_sqr_abs(eval_G(p, z));
}

double rho_II(const Params& p, Complex z) { return std::exp(log_rho_II(p, z)); }

double g_I(const Params& p, Complex y) {
    return rho_I(p, y / p.epsilon) / (p.epsilon * p.epsilon);
}

double g_II(const Params& p, Complex y) {
    const double e2 = p.epsilon * p.epsilon;
    return rho_II(p, y / p.epsilon) / (e2 * e2);
}

double rho1(const Params& p, double r) {
    const int N = p.N();
    const double t = std::pow(r, 2 * N + 2);
    const double den = 1.0 + t;
    return 8.0 * (N + 1) * (N + 1) * std::pow(r, 2 * N) / (p.lambda2 * den * den);
}

double rho2(const Params& p, double r) {
    const double t = std::pow(r, 2 * p.N() + 2);
    return p.c0 * std::exp(-p.kappa() * std::log1p(t));
}

double phi0(int N, double r) {
    const double t = std::pow(r, 2 * N + 2);
    if (std::isinf(t)) return -1.0;
    return (1.0 - t) / (1.0 + t);
}

double phi_pm_radial(int N, double r) {
    const double s = std::pow(r, N + 1);
    if (std::isinf(s)) return 0.0;
    return s / (1.0 + s * s);
}

double phi_plus(int N, Complex z) {
    const Complex zp = std::pow(z, N + 1);
    const double n = std::norm(zp);
    if (!std::isfinite(n)) return 0.0;
    return zp.real() / (1.0 + n);
}

double phi_minus(int N, Complex z) {
    const Complex zp = std::pow(z, N + 1);
    const double n = std::norm(zp);
    if (!std::isfinite(n)) return 0.0;
    return zp.imag() / (1.0 + n);
}

std::pair<double, double> liouville_residual(const Params& p, Complex z, double h) {
    if (!(h > 0.0)) throw RangeError("liouville_residual requires h > 0");
    for (const auto& zj : p.strings) {
        if (std::abs(z - zj) < 10.0 * h) {
            std::ostringstream msg;
            msg << "evaluation point (" << z.real() << ", " << z.imag()
                << ") is within 10 h of the string at (" << zj.real() << ", " << zj.imag()
                << ")";
            throw RangeError(msg.str());
        }
    }
    auto lap = [&](auto&& g) {
        return (g(z + Complex(h, 0)) + g(z - Complex(h, 0)) + g(z + Complex(0, h)) +
                g(z - Complex(0, h)) - 4.0 * g(z)) /
               (h * h);
    };
    const double rho = rho_I(p, z);
    const double res1 =
        lap([&](Complex w) { return log_rho_I(p, w); }) + p.lambda2 * rho;
    const double res2 =
        lap([&](Complex w) { return log_rho_II(p, w); }) + p.lambda4 * rho;
    return {res1, res2};
}

} // namespace profiles
} // namespace wstring
