#pragma once

#include "wstring/params.hpp"

#include <string>
#include <vector>

namespace wstring {

// Radial profile sampled on a strictly increasing positive grid, with
// cubic Hermite evaluation between nodes.  The first node must sit at or
// below 1e-3 so the short-range behaviour is resolved.
class RadialFunction {
  public:
    RadialFunction(std::vector<double> nodes, std::vector<double> values);

    const std::vector<double>& nodes() const { return r_; }
    const std::vector<double>& values() const { return v_; }
    double r_max() const { return r_.back(); }

    // Cubic Hermite interpolation; constant extension below the first
    // node (the profiles are even in r, so the error there is O(r0^2)).
    // Throws RangeError above r_max.
    double eval(double r) const;

    void write_csv(const std::string& path) const;
    static RadialFunction read_csv(const std::string& path);

  private:
    std::vector<double> r_, v_, m_; // nodes, values, Hermite slopes
};

// Graded default grid: a short lead-in below 1e-3, 2000 uniform nodes on
// (0, 10], then 2000 log-spaced nodes up to 1e5.
std::vector<double> default_radial_grid();

// Uniform grid with spacing h on [h, r1] plus the standard lead-in block,
// for stencil-based residual studies.
std::vector<double> uniform_radial_grid(double h, double r1);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    int nodes_used = 0;
};

// Least-squares fit of v against ln r over nodes with r in [r_lo, r_hi].
// Throws DegeneracyError when fewer than 10 nodes fall in the window.
DecayFit fit_decay(const RadialFunction& f, double r_lo, double r_hi);

namespace radial {

// First radial correction, quadrature route: the closed-form
// representation of the solution of
//   w1'' + w1'/r + lambda2 rho1 w1 + lambda1 rho2 = 0,  w1(0) = 0,
// built from the homogeneous solution phi0 via cumulative integrals.
// The inner-profile factor is smooth across r = 1 (both apparent
// singularities cancel algebraically); the outer integrand's removable
// point at r = 1 is bridged by a quartic Taylor expansion on
// |r - 1| < 0.01 with numerically differentiated coefficients.
RadialFunction solve_w1_formula(const Params& p, const std::vector<double>& grid);

// Same correction by direct adaptive integration of the ODE from a
// series start near r = 0 with w1(0) = v0, w1'(0) = 0.
RadialFunction solve_w1_ode(const Params& p, const std::vector<double>& grid, double v0);

// Second radial correction via the coupling decomposition
//   w2 = (lambda4/lambda2) w1 + ((lambda1 lambda4 - lambda2 lambda3)/lambda2) V,
// where Delta V = rho2 and V is assembled from Newtonian potential
// integrals.  w1 must be sampled on the same grid.
RadialFunction solve_w2(const Params& p, const RadialFunction& w1,
                        const std::vector<double>& grid);

// Pointwise defect of the defining equations at interior nodes, using
// second-order finite differences on the (possibly nonuniform) grid:
// residual_w1[i] = w1'' + w1'/r + lambda2 rho1 w1 + lambda1 rho2 at r_i.
std::vector<double> ode_residual_w1(const Params& p, const RadialFunction& w1);
std::vector<double> ode_residual_w2(const Params& p, const RadialFunction& w1,
                                    const RadialFunction& w2);

} // namespace radial
} // namespace wstring
