#pragma once

#include <string>

#include "mcl/chebyshev.hpp"
#include "mcl/config.hpp"
#include "mcl/types.hpp"

namespace mcl {

// Static capillary surface on (-ell, ell): P0 = g*z - sigma*H(z),
// sigma*z'/sqrt(1+z'^2)(+-ell) = +-gamma_jump, integral(z) = volume.
class EquilibriumSurface {
  public:
    Vec x;        // Chebyshev-Lobatto nodes, ascending
    Vec zeta;     // surface height at nodes
    Vec dzeta;    // first derivative at nodes
    Vec d2zeta;   // second derivative at nodes
    Vec d3zeta;   // third derivative at nodes
    double P0 = 0.0;
    double omega_eq = 0.0;  // contact angle at +ell (mirror convention at -ell)
    double min_height = 0.0;
    double ell = 1.0;

    double value(double xq) const { return cheb::interpolate(x, zeta, xq); }
    double slope(double xq) const { return cheb::interpolate(x, dzeta, xq); }
    double curvature_arg(double xq) const { return cheb::interpolate(x, d2zeta, xq); }
    double third(double xq) const { return cheb::interpolate(x, d3zeta, xq); }
    // H(zeta) = z'' / (1 + z'^2)^(3/2)
    double mean_curvature(double xq) const {
        double s = slope(xq);
        return curvature_arg(xq) / std::pow(1.0 + s * s, 1.5);
    }
    bool flat() const { return dzeta.lpNorm<Eigen::Infinity>() < 1e-13; }
};

struct EquilibriumResidual {
    double ode_residual_max = 0.0;
    double slope_residual_left = 0.0;
    double slope_residual_right = 0.0;
    double volume_error = 0.0;
};

EquilibriumSurface solve_equilibrium(const PhysicalParams& params, double tol, int cheb_n = 64,
                                     int max_iter = 60);

// Residuals on a grid at least 2x finer than the solve grid.
EquilibriumResidual equilibrium_residual(const EquilibriumSurface& s, const PhysicalParams& params,
                                         int fine_factor = 2);

// Angle between the free surface and the wall at +ell, measured in the fluid.
double contact_angle(const EquilibriumSurface& s);

// Two-column table (x, zeta) with a header carrying P0 and omega_eq.
std::string equilibrium_table(const EquilibriumSurface& s, int samples = 129);

}  // namespace mcl
