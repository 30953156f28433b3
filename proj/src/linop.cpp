#include "wstring/linop.hpp"

#include "wstring/errors.hpp"
#include "wstring/parallel.hpp"
#include "wstring/profiles.hpp"

#include <cmath>
#include <sstream>

namespace wstring {
namespace linop {
namespace {

double potential(int N, double r, double coeff) {
    const double t = std::pow(r, 2 * N + 2);
    const double den = 1.0 + t;
    return coeff * (N + 1) * (N + 1) * std::pow(r, 2 * N) / (den * den);
}

double kernel_value(int N, Kernel which, double x, double y) {
    const std::complex<double> z{x, y};
    switch (which) {
        case Kernel::Plus: return profiles::phi_plus(N, z);
        case Kernel::Minus: return profiles::phi_minus(N, z);
        case Kernel::Zero: return profiles::phi0(N, std::abs(z));
    }
    return 0.0;
}

} // namespace

Field2D apply_L(const Params& p, const Field2D& f) {
    const Grid2D& g = f.grid;
    const double h2 = g.h() * g.h();
    Field2D out(g);
    parallel_for_chunks(static_cast<size_t>(g.n) - 2, [&](size_t, size_t jb, size_t je) {
        for (size_t jj = jb; jj < je; ++jj) {
            const int j = static_cast<int>(jj) + 1;
            for (int i = 1; i + 1 < g.n; ++i) {
                const double lap = (f.at(i + 1, j) + f.at(i - 1, j) + f.at(i, j + 1) +
                                    f.at(i, j - 1) - 4.0 * f.at(i, j)) /
                                   h2;
                const double r = std::abs(g.node(i, j));
                out.at(i, j) = lap + p.lambda2 * profiles::rho1(p, r) * f.at(i, j);
            }
        }
    });
    return out;
}

KernelCheck kernel_residual(int N, Kernel which, double half_width, double h,
                            double rho1_coefficient) {
    if (!(h > 0.0) || !(half_width > 4.0 * h))
        throw RangeError("kernel_residual needs 0 < h << half_width");
    const long n = 2 * static_cast<long>(std::llround(half_width / h)) + 1;
    auto coord = [&](long k) { return -half_width + k * h; };

    // Rolling three rows of kernel samples per chunk; chunks own disjoint
    // j-ranges, so each recomputes its fringe rows and nothing is shared.
    std::vector<KernelCheck> partial(kParallelChunks);
    const double lo = -half_width / 2.0, hi = half_width / 2.0;
    parallel_for_chunks(static_cast<size_t>(n) - 2, [&](size_t c, size_t jb, size_t je) {
        std::vector<double> rows[3];
        for (auto& row : rows) row.resize(static_cast<size_t>(n));
        auto fill_row = [&](long j, std::vector<double>& row) {
            for (long i = 0; i < n; ++i)
                row[static_cast<size_t>(i)] = kernel_value(N, which, coord(i), coord(j));
        };
        long jprev = -10;
        double linf = 0.0, l2 = 0.0;
        for (size_t jj = jb; jj < je; ++jj) {
            const long j = static_cast<long>(jj) + 1;
            if (j == jprev + 1) {
                std::swap(rows[0], rows[1]);
                std::swap(rows[1], rows[2]);
                fill_row(j + 1, rows[2]);
            } else {
                fill_row(j - 1, rows[0]);
                fill_row(j, rows[1]);
                fill_row(j + 1, rows[2]);
            }
            jprev = j;
            const double yj = coord(j);
            if (yj < lo || yj > hi) continue;
            for (long i = 1; i + 1 < n; ++i) {
                const double xi = coord(i);
                if (xi < lo || xi > hi) continue;
                const size_t ii = static_cast<size_t>(i);
                const double lap = (rows[1][ii + 1] + rows[1][ii - 1] + rows[2][ii] +
                                    rows[0][ii] - 4.0 * rows[1][ii]) /
                                   (h * h);
                const double r = std::hypot(xi, yj);
                const double res = lap + potential(N, r, rho1_coefficient) * rows[1][ii];
                linf = std::max(linf, std::abs(res));
                l2 += res * res;
            }
        }
        partial[c].linf = linf;
        partial[c].l2 = l2;
    });
    KernelCheck out;
    for (const auto& pc : partial) {
        out.linf = std::max(out.linf, pc.linf);
        out.l2 += pc.l2;
    }
    out.l2 = std::sqrt(out.l2 * h * h);
    return out;
}

std::pair<Field2D, Field2D> apply_A(const Params& p, const RadialFunction& w1,
                                    const Field2D& nu1, const Field2D& nu2,
                                    double alpha1, double alpha2) {
    if (!(nu1.grid == nu2.grid)) throw RangeError("apply_A needs nu1, nu2 on one grid");
    const Grid2D& g = nu1.grid;
    const double h2 = g.h() * g.h();
    const int N = p.N();
    Field2D a1(g), a2(g);
    parallel_for_chunks(static_cast<size_t>(g.n) - 2, [&](size_t, size_t jb, size_t je) {
        for (size_t jj = jb; jj < je; ++jj) {
            const int j = static_cast<int>(jj) + 1;
            for (int i = 1; i + 1 < g.n; ++i) {
                const auto z = g.node(i, j);
                const double r = std::abs(z);
                const double r1 = profiles::rho1(p, r);
                const double r2 = profiles::rho2(p, r);
                const double w = w1.eval(r);
                const double ang = profiles::phi_plus(N, z) * alpha1 +
                                   profiles::phi_minus(N, z) * alpha2;
                const double lap1 = (nu1.at(i + 1, j) + nu1.at(i - 1, j) + nu1.at(i, j + 1) +
                                     nu1.at(i, j - 1) - 4.0 * nu1.at(i, j)) /
                                    h2;
                const double lap2 = (nu2.at(i + 1, j) + nu2.at(i - 1, j) + nu2.at(i, j + 1) +
                                     nu2.at(i, j - 1) - 4.0 * nu2.at(i, j)) /
                                    h2;
                a1.at(i, j) = lap1 + p.lambda2 * r1 * nu1.at(i, j) -
                              4.0 * (p.lambda2 * w * r1 + p.lambda1 * r2) * ang;
                a2.at(i, j) = lap2 + p.lambda4 * r1 * nu1.at(i, j) -
                              4.0 * (p.lambda4 * w * r1 + p.lambda3 * r2) * ang;
            }
        }
    });
    return {std::move(a1), std::move(a2)};
}

Projection project_to_image(const Params& p, const Field2D& f1, const Field2D& weight,
                            std::pair<double, double> Ipm) {
    if (!(f1.grid == weight.grid))
        throw RangeError("project_to_image needs f1 and weight on one grid");
    const double scale = std::max(std::abs(Ipm.first), std::abs(Ipm.second));
    if (!(scale > 1e-12))
        throw DegeneracyError("pairing integrals vanish; the projection system is singular");
    const Grid2D& g = f1.grid;
    const int N = p.N();
    const double h2 = g.h() * g.h();
    // 2x2 normal system: rows pair against phi+, phi-.
    double wpp = 0, wpm = 0, wmm = 0, bp = 0, bm = 0;
    for (int j = 1; j + 1 < g.n; ++j)
        for (int i = 1; i + 1 < g.n; ++i) {
            const auto z = g.node(i, j);
            const double fp = profiles::phi_plus(N, z);
            const double fm = profiles::phi_minus(N, z);
            const double w = weight.at(i, j);
            wpp += w * fp * fp;
            wpm += w * fp * fm;
            wmm += w * fm * fm;
            bp += f1.at(i, j) * fp;
            bm += f1.at(i, j) * fm;
        }
    wpp *= h2;
    wpm *= h2;
    wmm *= h2;
    bp *= h2;
    bm *= h2;
    const double det = wpp * wmm - wpm * wpm;
    if (std::abs(det) <= 1e-12 * (std::abs(wpp) + std::abs(wmm)) * (std::abs(wpp) + std::abs(wmm))) {
        std::ostringstream msg;
        msg << "projection system is numerically singular: det = " << det;
        throw DegeneracyError(msg.str());
    }
    Projection out;
    out.alpha1 = (wmm * bp - wpm * bm) / det;
    out.alpha2 = (wpp * bm - wpm * bp) / det;
    return out;
}

DaLimits check_da_limits(const Params& p, const std::vector<double>& eps_list,
                         const std::vector<std::complex<double>>& probes, double step) {
    if (probes.size() < 10)
        throw ConfigError("check_da_limits needs at least 10 probe points");
    DaLimits out;
    for (double eps : eps_list) {
        if (!(eps > 0.0) || eps > 1.0) throw ConfigError("eps sweep values must lie in (0, 1]");
        const double scale = std::pow(eps, p.N() + 1);
        double d = step;
        if (d == 0.0) {
            d = 1e-3 * scale;
        } else if (!(d < 0.01 * scale)) {
            std::ostringstream msg;
            msg << "finite-difference step " << d << " is not small against the eps^(N+1) scale "
                << scale;
            throw ConfigError(msg.str());
        }
        Params pp = p;
        Params pm = p;
        std::array<double, 4> dev{0, 0, 0, 0};
        for (const auto& y : probes) {
            const double r = std::abs(y);
            const double t1 = -4.0 * profiles::rho1(p, r);
            const double t2 = -4.0 * p.lambda4 / p.lambda2 * profiles::rho2(p, r);
            Params base = p;
            base.epsilon = eps;
            base.a1 = base.a2 = 0.0;
            for (int comp = 0; comp < 2; ++comp) {
                pp = base;
                pm = base;
                (comp == 0 ? pp.a1 : pp.a2) = d;
                (comp == 0 ? pm.a1 : pm.a2) = -d;
                const double dgI = (profiles::g_I(pp, y) - profiles::g_I(pm, y)) / (2.0 * d);
                const double dgII = (profiles::g_II(pp, y) - profiles::g_II(pm, y)) / (2.0 * d);
                const double target = comp == 0 ? profiles::phi_plus(p.N(), y)
                                                : profiles::phi_minus(p.N(), y);
                dev[static_cast<size_t>(comp)] =
                    std::max(dev[static_cast<size_t>(comp)], std::abs(dgI - t1 * target));
                dev[static_cast<size_t>(2 + comp)] =
                    std::max(dev[static_cast<size_t>(2 + comp)], std::abs(dgII - t2 * target));
            }
        }
        out.eps.push_back(eps);
        out.deviation.push_back(dev);
    }
    return out;
}

double weighted_norm(const Field2D& f, double alpha) {
    const double h2 = f.grid.h() * f.grid.h();
    double acc = 0.0;
    for (int j = 0; j < f.grid.n; ++j)
        for (int i = 0; i < f.grid.n; ++i) {
            const double r = std::abs(f.grid.node(i, j));
            acc += (1.0 + std::pow(r, 2.0 + alpha)) * f.at(i, j) * f.at(i, j) * h2;
        }
    return std::sqrt(acc);
}

} // namespace linop
} // namespace wstring
