#pragma once

#include "wstring/field2d.hpp"
#include "wstring/params.hpp"
#include "wstring/radial.hpp"

#include <string>
#include <utility>
#include <vector>

namespace wstring {
namespace solver {

// Smooth regularized initial guess on the grid:
//   U0  = ln(8 eps^(2N+2) (N+1)^2 / lambda2) - 2 ln(1+|G|^2) + eps^2 w1(eps |z|)
//   eta0 = ln c0 + 4 ln eps - kappa ln(1+|G|^2) + eps^2 w2(eps |z|)
// U is the string-regularized field u - sum_j ln|z - z_j|^2, so both
// components are finite everywhere, string nodes included.
std::pair<Field2D, Field2D> initial_guess(const Params& p, const RadialFunction& w1,
                                          const RadialFunction& w2, const Grid2D& grid);

// u = U + sum_j ln|z-z_j|^2, clamped at -745 so exact string hits stay
// finite (exp underflows to zero there anyway).
Field2D unregularized_u(const Params& p, const Field2D& U);

// Interior defect of the regularized system
//   R1 = Delta_h U  + lambda1 e^eta + lambda2 Pi e^U
//   R2 = Delta_h eta + lambda3 e^eta + lambda4 Pi e^U
// with Pi = prod |z - z_j|^2 folded into the exponent.  Boundary rows
// are zero (Dirichlet data is pinned).  Throws NumericalError naming the
// node if an exponent exceeds the overflow guard.
std::pair<Field2D, Field2D> assemble_residual(const Params& p, const Field2D& U,
                                              const Field2D& eta);

struct NewtonOptions {
    double tol = 1e-9;        // max-norm of the interior residual
    int max_iter = 30;
    double backtrack = 0.5;   // step-halving factor
    double min_step = 1.0 / 1024.0;
    int direct_solver_max_n = 257; // sparse LU at or below, BiCGSTAB above
};

struct NewtonReport {
    bool converged = false;
    int iterations = 0;
    std::vector<double> residual_history; // accepted-step norms, strictly decreasing
    std::vector<double> step_lengths;
    double final_residual = 0.0;
    std::string linear_solver;

    void write(const std::string& path) const; // key=value lines
};

struct SolveResult {
    Field2D U;
    Field2D eta;
    NewtonReport report;
};

// Damped Newton iteration on the regularized system with boundary values
// frozen at the initial guess.
SolveResult newton_solve(const Params& p, Field2D U0, Field2D eta0,
                         const NewtonOptions& opts = {});

struct FluxReport {
    double integral_eu = 0.0;   // sum of e^u over interior cells
    double integral_eeta = 0.0;
    double flux_u = 0.0;        // telescoped discrete boundary flux
    double flux_eta = 0.0;
    double flux_u_rel_err = 0.0;  // |flux + source sum| / |source sum|
    double flux_eta_rel_err = 0.0;
};

// Divergence-theorem audit: the telescoped boundary flux of the discrete
// Laplacian must balance the interior source sums at the solution.
FluxReport verify_boundary_condition(const Params& p, const Field2D& U, const Field2D& eta);

struct VStar {
    Field2D v1;
    Field2D v2;
    double bound1 = 0.0;    // sup |v1| / ln(e + |z|)
    double bound2 = 0.0;
    double bound_total = 0.0; // sup (|v1|+|v2|) / ln(e + |z|)
};

// Error fields of the expansion: v_k = (field - log profile - eps^2 w_k)/eps^2,
// with the growth-weighted sup norms used by the epsilon-sweep check.
VStar extract_vstar(const Params& p, const RadialFunction& w1, const RadialFunction& w2,
                    const Field2D& U, const Field2D& eta);

} // namespace solver
} // namespace wstring
