#pragma once

#include "wstring/params.hpp"

#include <complex>
#include <utility>
#include <vector>

namespace wstring {
namespace profiles {

using Complex = std::complex<double>;

// f(z) = (N+1) * prod_j (z - z_j).
Complex eval_f(const Params& p, Complex z);

// Antiderivative of f with F(0) = 0, evaluated through the monomial
// expansion of the product (exact for polynomial f).
Complex eval_F(const Params& p, Complex z);

// Monomial coefficients of f, low order first (degree N polynomial).
std::vector<Complex> f_coefficients(const Params& p);

// G(z) = epsilon^(N+1) F(z) + a; the profiles depend on F and a only
// through this combination, which stays well scaled for small epsilon.
Complex eval_G(const Params& p, Complex z);

// ln(1 + |G(z)|^2), the shared denominator of both densities; kept
// separate because the regularized solver needs it without the |f|^2
// numerator.
double log_denom(const Params& p, Complex z);

// log rho_I(z); -inf at string points.  rho_I is the vortex-sector
// density 8 eps^(2N+2) |f|^2 / (lambda2 (1+|G|^2)^2), evaluated in log
// space so huge |z| and small epsilon cannot overflow.
double log_rho_I(const Params& p, Complex z);
double rho_I(const Params& p, Complex z);

// log rho_II(z) = log c0 + 4 log eps - kappa * log(1+|G|^2).
double log_rho_II(const Params& p, Complex z);
double rho_II(const Params& p, Complex z);

// Blow-up profiles: g_I(y) = eps^-2 rho_I(y/eps), g_II(y) = eps^-4 rho_II(y/eps).
double g_I(const Params& p, Complex y);
double g_II(const Params& p, Complex y);

// Radial limit densities of the blow-up (strings collapsed to the origin):
// rho1(r) = 8 (N+1)^2 r^(2N) / (lambda2 (1+r^(2N+2))^2),
// rho2(r) = c0 / (1+r^(2N+2))^kappa.
double rho1(const Params& p, double r);
double rho2(const Params& p, double r);

// Kernel elements of L = Delta + lambda2 * rho1:
// phi0 radial, phi_plus/phi_minus with cos/sin angular factors.
double phi0(int N, double r);
double phi_pm_radial(int N, double r); // r^(N+1) / (1 + r^(2N+2))
double phi_plus(int N, Complex z);
double phi_minus(int N, Complex z);

// Discrete Laplacian check of the two log-density identities
// Delta log rho_I = -lambda2 rho_I and Delta log rho_II = -lambda4 rho_I
// at z with 5-point step h.  Throws RangeError if z is within 10 h of a
// string point (the log is singular there and the stencil meaningless).
std::pair<double, double> liouville_residual(const Params& p, Complex z, double h);

} // namespace profiles
} // namespace wstring
