#include "wstring/solver.hpp"

#include "wstring/errors.hpp"
#include "wstring/parallel.hpp"
#include "wstring/profiles.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>
#include <fstream>
#include <sstream>

namespace wstring {
namespace solver {
namespace {

constexpr double kExpGuard = 700.0;
constexpr double kLogFloor = -745.0;

// ln prod |z - z_j|^2 at a node; -inf only on an exact string hit.
double log_pi(const Params& p, std::complex<double> z) {
    double acc = 0.0;
    for (const auto& zj : p.strings) acc += 2.0 * std::log(std::abs(z - zj));
    return acc;
}

struct NodeData {
    std::vector<double> log_pi_v; // per node
};

NodeData precompute(const Params& p, const Grid2D& g) {
    NodeData nd;
    nd.log_pi_v.resize(static_cast<size_t>(g.n) * g.n);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            nd.log_pi_v[static_cast<size_t>(i) + static_cast<size_t>(g.n) * j] =
                log_pi(p, g.node(i, j));
    return nd;
}

double guarded_exp(double arg, int i, int j, const char* what) {
    if (arg > kExpGuard) {
        std::ostringstream msg;
        msg << "overflow in " << what << " at node (" << i << ", " << j
            << "): exponent " << arg;
        throw NumericalError(msg.str());
    }
    return std::exp(arg);
}

void residual_into(const Params& p, const NodeData& nd, const Field2D& U,
                   const Field2D& eta, Field2D& R1, Field2D& R2) {
    const Grid2D& g = U.grid;
    const double h2 = g.h() * g.h();
    parallel_for_chunks(static_cast<size_t>(g.n) - 2, [&](size_t, size_t jb, size_t je) {
        for (size_t jj = jb; jj < je; ++jj) {
            const int j = static_cast<int>(jj) + 1;
            for (int i = 1; i + 1 < g.n; ++i) {
                const size_t idx = static_cast<size_t>(i) + static_cast<size_t>(g.n) * j;
                const double eeta = guarded_exp(eta.at(i, j), i, j, "exp(eta)");
                const double pieu =
                    guarded_exp(U.at(i, j) + nd.log_pi_v[idx], i, j, "Pi exp(U)");
                const double lapU = (U.at(i + 1, j) + U.at(i - 1, j) + U.at(i, j + 1) +
                                     U.at(i, j - 1) - 4.0 * U.at(i, j)) /
                                    h2;
                const double lapE = (eta.at(i + 1, j) + eta.at(i - 1, j) + eta.at(i, j + 1) +
                                     eta.at(i, j - 1) - 4.0 * eta.at(i, j)) /
                                    h2;
                R1.at(i, j) = lapU + p.lambda1 * eeta + p.lambda2 * pieu;
                R2.at(i, j) = lapE + p.lambda3 * eeta + p.lambda4 * pieu;
            }
        }
    });
}

double interior_max_norm(const Field2D& a, const Field2D& b) {
    return std::max(a.max_abs_interior(), b.max_abs_interior());
}

} // namespace

std::pair<Field2D, Field2D> initial_guess(const Params& p, const RadialFunction& w1,
                                          const RadialFunction& w2, const Grid2D& grid) {
    const int N = p.N();
    const double e2 = p.epsilon * p.epsilon;
    const double lead_u = std::log(8.0 * (N + 1) * (N + 1) / p.lambda2) +
                          (2.0 * N + 2.0) * std::log(p.epsilon);
    const double lead_eta = std::log(p.c0) + 4.0 * std::log(p.epsilon);
    Field2D U0(grid), eta0(grid);
    for (int j = 0; j < grid.n; ++j)
        for (int i = 0; i < grid.n; ++i) {
            const auto z = grid.node(i, j);
            const double ld = profiles::log_denom(p, z);
            const double r_scaled = p.epsilon * std::abs(z);
            U0.at(i, j) = lead_u - 2.0 * ld + e2 * w1.eval(r_scaled);
            eta0.at(i, j) = lead_eta - p.kappa() * ld + e2 * w2.eval(r_scaled);
        }
    return {std::move(U0), std::move(eta0)};
}

Field2D unregularized_u(const Params& p, const Field2D& U) {
    Field2D u(U.grid);
    for (int j = 0; j < U.grid.n; ++j)
        for (int i = 0; i < U.grid.n; ++i) {
            const double lp = log_pi(p, U.grid.node(i, j));
            u.at(i, j) = std::max(U.at(i, j) + lp, kLogFloor);
        }
    return u;
}

std::pair<Field2D, Field2D> assemble_residual(const Params& p, const Field2D& U,
                                              const Field2D& eta) {
    if (!(U.grid == eta.grid)) throw RangeError("residual needs U and eta on one grid");
    const NodeData nd = precompute(p, U.grid);
    Field2D R1(U.grid), R2(U.grid);
    residual_into(p, nd, U, eta, R1, R2);
    return {std::move(R1), std::move(R2)};
}

void NewtonReport::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw RangeError("cannot open " + path + " for writing");
    out << "converged=" << (converged ? "true" : "false") << "\n";
    out << "iterations=" << iterations << "\n";
    out << "final_residual=" << final_residual << "\n";
    out << "linear_solver=" << linear_solver << "\n";
    for (size_t k = 0; k < residual_history.size(); ++k)
        out << "residual_" << k << "=" << residual_history[k] << "\n";
    for (size_t k = 0; k < step_lengths.size(); ++k)
        out << "step_" << k << "=" << step_lengths[k] << "\n";
}

SolveResult newton_solve(const Params& p, Field2D U, Field2D eta, const NewtonOptions& opts) {
    if (!(U.grid == eta.grid)) throw RangeError("newton_solve needs matching grids");
    const Grid2D& g = U.grid;
    const int n = g.n;
    const int m = n - 2; // interior nodes per axis
    const long unknowns = 2L * m * m;
    const double h2 = g.h() * g.h();
    const NodeData nd = precompute(p, g);

    SolveResult out;
    out.report.linear_solver = n <= opts.direct_solver_max_n ? "sparse-lu" : "bicgstab-ilut";

    Field2D R1(g), R2(g), R1t(g), R2t(g);
    residual_into(p, nd, U, eta, R1, R2);
    double norm = interior_max_norm(R1, R2);
    out.report.residual_history.push_back(norm);

    auto interior_index = [m](int i, int j) { return (i - 1) + static_cast<long>(m) * (j - 1); };

    Eigen::SparseMatrix<double> J(unknowns, unknowns);
    Eigen::VectorXd rhs(unknowns), delta(unknowns);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(unknowns) * 6);

    for (int iter = 0; iter < opts.max_iter && norm > opts.tol; ++iter) {
        trips.clear();
        for (int j = 1; j + 1 < n; ++j)
            for (int i = 1; i + 1 < n; ++i) {
                const long k = interior_index(i, j);
                const long ru = 2 * k, re = 2 * k + 1;
                const size_t idx = static_cast<size_t>(i) + static_cast<size_t>(n) * j;
                const double eeta = std::exp(eta.at(i, j));
                const double pieu = std::exp(U.at(i, j) + nd.log_pi_v[idx]);
                trips.emplace_back(ru, ru, -4.0 / h2 + p.lambda2 * pieu);
                trips.emplace_back(ru, re, p.lambda1 * eeta);
                trips.emplace_back(re, re, -4.0 / h2 + p.lambda3 * eeta);
                trips.emplace_back(re, ru, p.lambda4 * pieu);
                const int di[4] = {1, -1, 0, 0};
                const int dj[4] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    const int ii = i + di[d], jj = j + dj[d];
                    if (ii < 1 || ii >= n - 1 || jj < 1 || jj >= n - 1) continue;
                    const long kk = interior_index(ii, jj);
                    trips.emplace_back(ru, 2 * kk, 1.0 / h2);
                    trips.emplace_back(re, 2 * kk + 1, 1.0 / h2);
                }
                rhs[ru] = -R1.at(i, j);
                rhs[re] = -R2.at(i, j);
            }
        J.setFromTriplets(trips.begin(), trips.end());

        if (n <= opts.direct_solver_max_n) {
            Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
            lu.compute(J);
            if (lu.info() != Eigen::Success)
                throw NumericalError("sparse LU factorization of the Jacobian failed");
            delta = lu.solve(rhs);
        } else {
            Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> it;
            it.preconditioner().setDroptol(1e-5);
            it.preconditioner().setFillfactor(12);
            it.setTolerance(1e-12);
            it.setMaxIterations(2000);
            it.compute(J);
            delta = it.solve(rhs);
            if (it.info() != Eigen::Success)
                throw NumericalError("iterative Jacobian solve stalled (BiCGSTAB)");
        }

        // Backtracking line search on the residual max-norm.
        double step = 1.0;
        double new_norm = norm;
        while (true) {
            Field2D Ut = U, etat = eta;
            for (int j = 1; j + 1 < n; ++j)
                for (int i = 1; i + 1 < n; ++i) {
                    const long k = interior_index(i, j);
                    Ut.at(i, j) += step * delta[2 * k];
                    etat.at(i, j) += step * delta[2 * k + 1];
                }
            bool overflowed = false;
            try {
                residual_into(p, nd, Ut, etat, R1t, R2t);
            } catch (const NumericalError&) {
                overflowed = true;
            }
            if (!overflowed) {
                new_norm = interior_max_norm(R1t, R2t);
                if (new_norm < norm) {
                    U = std::move(Ut);
                    eta = std::move(etat);
                    R1 = std::move(R1t);
                    R2 = std::move(R2t);
                    R1t = Field2D(g);
                    R2t = Field2D(g);
                    break;
                }
            }
            step *= opts.backtrack;
            if (step < opts.min_step) break;
        }
        if (step < opts.min_step) {
            out.report.converged = false;
            out.report.iterations = iter;
            out.report.final_residual = norm;
            out.U = std::move(U);
            out.eta = std::move(eta);
            return out;
        }
        norm = new_norm;
        out.report.residual_history.push_back(norm);
        out.report.step_lengths.push_back(step);
        out.report.iterations = iter + 1;
    }

    out.report.converged = norm <= opts.tol;
    out.report.final_residual = norm;
    out.U = std::move(U);
    out.eta = std::move(eta);
    return out;
}

FluxReport verify_boundary_condition(const Params& p, const Field2D& U, const Field2D& eta) {
    if (!(U.grid == eta.grid)) throw RangeError("flux audit needs matching grids");
    const Grid2D& g = U.grid;
    const int n = g.n;
    const double h2 = g.h() * g.h();
    const NodeData nd = precompute(p, g);
    FluxReport rep;

    double src_u = 0.0, src_eta = 0.0;
    for (int j = 1; j + 1 < n; ++j)
        for (int i = 1; i + 1 < n; ++i) {
            const size_t idx = static_cast<size_t>(i) + static_cast<size_t>(n) * j;
            const double eeta = std::exp(eta.at(i, j));
            const double eu = std::exp(U.at(i, j) + nd.log_pi_v[idx]);
            rep.integral_eu += eu * h2;
            rep.integral_eeta += eeta * h2;
            src_u += (p.lambda1 * eeta + p.lambda2 * eu) * h2;
            src_eta += (p.lambda3 * eeta + p.lambda4 * eu) * h2;
        }

    // Telescoped flux of the 5-point Laplacian over the interior block:
    // sum_interior Delta_h F h^2 collapses to boundary-facing differences.
    auto flux = [&](const Field2D& F) {
        double acc = 0.0;
        for (int i = 1; i + 1 < n; ++i) {
            acc += F.at(i, 0) - F.at(i, 1);
            acc += F.at(i, n - 1) - F.at(i, n - 2);
            acc += F.at(0, i) - F.at(1, i);
            acc += F.at(n - 1, i) - F.at(n - 2, i);
        }
        return acc;
    };
    rep.flux_u = flux(U);
    rep.flux_eta = flux(eta);
    rep.flux_u_rel_err = std::abs(rep.flux_u + src_u) / std::max(1e-300, std::abs(src_u));
    rep.flux_eta_rel_err = std::abs(rep.flux_eta + src_eta) / std::max(1e-300, std::abs(src_eta));
    return rep;
}

VStar extract_vstar(const Params& p, const RadialFunction& w1, const RadialFunction& w2,
                    const Field2D& U, const Field2D& eta) {
    if (!(U.grid == eta.grid)) throw RangeError("extract_vstar needs matching grids");
    const Grid2D& g = U.grid;
    const int N = p.N();
    const double e2 = p.epsilon * p.epsilon;
    const double lead_u = std::log(8.0 * (N + 1) * (N + 1) / p.lambda2) +
                          (2.0 * N + 2.0) * std::log(p.epsilon);
    const double lead_eta = std::log(p.c0) + 4.0 * std::log(p.epsilon);
    VStar out;
    out.v1 = Field2D(g);
    out.v2 = Field2D(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const auto z = g.node(i, j);
            const double ld = profiles::log_denom(p, z);
            const double rs = p.epsilon * std::abs(z);
            const double v1 = (U.at(i, j) - (lead_u - 2.0 * ld) - e2 * w1.eval(rs)) / e2;
            const double v2 = (eta.at(i, j) - (lead_eta - p.kappa() * ld) - e2 * w2.eval(rs)) / e2;
            out.v1.at(i, j) = v1;
            out.v2.at(i, j) = v2;
            const double wgt = std::log(std::exp(1.0) + std::abs(z));
            out.bound1 = std::max(out.bound1, std::abs(v1) / wgt);
            out.bound2 = std::max(out.bound2, std::abs(v2) / wgt);
            out.bound_total = std::max(out.bound_total, (std::abs(v1) + std::abs(v2)) / wgt);
        }
    return out;
}

} // namespace solver
} // namespace wstring
