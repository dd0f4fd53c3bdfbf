#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcl/types.hpp"

namespace mcl {

struct PhysicalParams {
    double mu = 1.0;           // viscosity
    double sigma = 1.0;        // surface tension
    double g = 1.0;            // gravity
    double beta = 1.0;         // Navier-slip friction
    double kappa = 1.0;        // contact response stiffness W'(0)
    double gamma_jump = 0.0;   // solid free-energy difference
    double ell = 1.0;          // half-width of the channel
    double volume = 2.0;       // fluid area above the reference line
    double bottom_depth = 0.5; // depth of the rectangular lower vessel
};

struct SobolevIndices {
    double omega_eq = 1.5707963267948966; // equilibrium contact angle
    double eps_max = 1.0;
    double eps_minus = 0.3;
    double eps_plus = 0.5;
    double alpha = 0.1;
    double q_minus = 0.0;
    double q_plus = 0.0;
};

// Monotone response W(z) = kappa*z + kappa*c*z^3 by default, or tabulated.
// hatW(z) := W(z)/kappa - z, so the cubic default gives hatW(z) = c*z^3.
class ContactLaw {
  public:
    ContactLaw() = default;
    ContactLaw(double kappa, double cubic_c);
    // Tabulated variant: strictly increasing samples of (z, W(z)) through (0, 0).
    static ContactLaw tabulated(double kappa, const Vec& z, const Vec& w);

    double response(double z) const;   // W(z)
    double hatW(double z) const;       // W(z)/kappa - z
    double hatWp(double z) const;      // d/dz hatW
    double hatWpp(double z) const;
    double kappa() const { return kappa_; }
    double cubic_coeff() const { return c_; }

  private:
    double kappa_ = 1.0;
    double c_ = 0.0;
    bool tab_ = false;
    Vec tz_, tw_, tm_;  // table nodes, values, Hermite slopes
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool valid() const { return violations.empty(); }
    std::string str() const;
};

double eps_max_of(double omega_eq);
ValidationReport validate(const PhysicalParams& p, const SobolevIndices& ix);
// Throws ChainViolation naming the first failed inequality.
SobolevIndices derive_indices(double omega_eq, double alpha, double eps_minus, double eps_plus);

struct DiscretizationParams {
    int nx = 12;        // element columns across (-ell, ell)
    int ny_top = 6;     // element rows between the reference line and the surface
    int ny_bot = 3;     // element rows in the bottom vessel
    int basis_m = 48;   // Galerkin modes
    int surface_modes = 64;  // cosine modes for surface functions
    int cheb_n = 64;    // equilibrium collocation order
};

struct RunParams {
    double epsilon = 0.1;
    double dt = 2.5e-4;
    double t_final = 0.0;     // 0 => use min(eps^2, t_cap) * time_scale
    double t_cap = 0.05;
    double time_scale = 1.0;
    double amplitude = 1e-3;  // initial surface perturbation amplitude
    int mode = 2;             // cosine mode of the initial perturbation
    double delta = 0.1;       // smallness radius for the iteration space
    double fp_tol = 1e-8;
    int max_iter = 12;
    std::vector<double> epsilon_list = {0.1, 0.05, 0.025};
    double equilibrium_tol = 1e-11;
    unsigned long long seed = 1;
    int threads = 1;
};

struct Config {
    PhysicalParams physical;
    SobolevIndices indices;
    ContactLaw law;
    double law_cubic_c = 1.0;
    DiscretizationParams discretization;
    RunParams run;
};

// Flat sectioned key=value file ([physical] / [indices] / [law] /
// [discretization] / [run]). Environment variables MCL_<SECTION>_<KEY>
// override file values.
Config load_config(const std::string& path);
Config parse_config(const std::string& text);
std::string dump_config(const Config& c);

}  // namespace mcl
