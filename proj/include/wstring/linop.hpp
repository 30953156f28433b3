#pragma once

#include "wstring/field2d.hpp"
#include "wstring/params.hpp"
#include "wstring/radial.hpp"

#include <array>
#include <utility>
#include <vector>

namespace wstring {
namespace linop {

enum class Kernel { Plus, Minus, Zero };

// Action of L = Delta_h + lambda2 rho1(|z|) on a stored field, with
// Dirichlet truncation: output boundary rows are zero.
Field2D apply_L(const Params& p, const Field2D& f);

struct KernelCheck {
    double linf = 0.0; // interior half-box max norm
    double l2 = 0.0;   // interior half-box grid L2 norm
};

// Streaming evaluation of L applied to an analytic kernel element on the
// box [-half_width, half_width]^2 with spacing h, measured on the
// half-size interior box only.  rho1_coefficient scales the potential's
// leading constant (8 for the genuine operator); tests corrupt it to
// prove the check has teeth.  Memory stays O(n) regardless of h.
KernelCheck kernel_residual(int N, Kernel which, double half_width, double h,
                            double rho1_coefficient = 8.0);

// The coupled linearized action on a field pair:
//   A1 = Delta nu1 + lambda2 rho1 nu1 - 4 (lambda2 w1 rho1 + lambda1 rho2) (phi+ a1 + phi- a2)
//   A2 = Delta nu2 + lambda4 rho1 nu1 - 4 (lambda4 w1 rho1 + lambda3 rho2) (phi+ a1 + phi- a2)
// evaluated on the scaled plane with w1 interpolated radially.
std::pair<Field2D, Field2D> apply_A(const Params& p, const RadialFunction& w1,
                                    const Field2D& nu1, const Field2D& nu2,
                                    double alpha1, double alpha2);

struct Projection {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
};

// Coefficients (alpha1, alpha2) solving the two pairing conditions
//   int (f1 - weight (alpha1 phi+ + alpha2 phi-)) phi_{+,-} dx = 0
// on f1's grid.  The passed pairing integrals guard degeneracy: either
// |I| below 1e-12 or a numerically singular 2x2 system throws
// DegeneracyError.
Projection project_to_image(const Params& p, const Field2D& f1, const Field2D& weight,
                            std::pair<double, double> Ipm);

struct DaLimits {
    std::vector<double> eps;                    // sweep values, as given
    std::vector<std::array<double, 4>> deviation; // per eps: dgI/da1, dgI/da2, dgII/da1, dgII/da2
};

// Central finite differences of the blow-up profiles in the translation
// parameters at a = 0, compared against the closed-form limits
// -4 rho1 phi± and -(4 lambda4/lambda2) rho2 phi± at the probe points.
// step = 0 picks 1e-3 * eps^(N+1); an explicit step that is not well
// below eps^(N+1) throws ConfigError.
DaLimits check_da_limits(const Params& p, const std::vector<double>& eps_list,
                         const std::vector<std::complex<double>>& probes, double step = 0.0);

// Diagnostic weighted norm sqrt( sum (1+|z|^(2+alpha)) f^2 h^2 ) with
// alpha = 1/4, over the whole grid.
double weighted_norm(const Field2D& f, double alpha = 0.25);

} // namespace linop
} // namespace wstring
