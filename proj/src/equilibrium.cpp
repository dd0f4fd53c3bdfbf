#include "mcl/equilibrium.hpp"

#include <cmath>
#include <sstream>

namespace mcl {

namespace {

// Residual of the collocation system. Unknowns: zeta at the n+1 Lobatto
// nodes plus P0. Rows: interior ODE residuals, the two slope conditions,
// and the volume constraint closing P0.
Vec system_residual(const Vec& z, double P0, const Mat& D, const Vec& w,
                    const PhysicalParams& p) {
    const int n = int(z.size()) - 1;
    Vec zp = D * z;
    Vec zpp = D * zp;
    Vec r(n + 2);
    for (int i = 1; i < n; ++i) {
        double s = zp[i];
        r[i - 1] = p.g * z[i] - p.sigma * zpp[i] / std::pow(1.0 + s * s, 1.5) - P0;
    }
    auto slope_term = [&](double s) { return p.sigma * s / std::sqrt(1.0 + s * s); };
    r[n - 1] = slope_term(zp[0]) + p.gamma_jump;   // at -ell: sigma s/sqrt(1+s^2) = -gamma_jump
    r[n] = slope_term(zp[n]) - p.gamma_jump;       // at +ell
    r[n + 1] = w.dot(z) - p.volume;
    return r;
}

}  // namespace

EquilibriumSurface solve_equilibrium(const PhysicalParams& p, double tol, int cheb_n,
                                     int max_iter) {
    if (!(std::abs(p.gamma_jump) < p.sigma))
        throw std::invalid_argument("Young relation |gamma_jump| < sigma violated");
    if (!(p.volume > 0)) throw std::invalid_argument("volume must be positive");

    const int n = cheb_n;
    const Mat D = cheb::diff_matrix(n, -p.ell, p.ell);
    const Vec w = cheb::quad_weights(n, -p.ell, p.ell);
    const Vec x = cheb::points(n, -p.ell, p.ell);

    const double h0 = p.volume / (2.0 * p.ell);
    Vec z = Vec::Constant(n + 1, h0);
    double P0 = p.g * h0;

    double resnorm = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Vec r = system_residual(z, P0, D, w, p);
        resnorm = r.lpNorm<Eigen::Infinity>();
        if (resnorm <= tol) {
            if (z.minCoeff() <= 0.0) throw PinchOff(z.minCoeff());
            EquilibriumSurface s;
            s.x = x;
            s.zeta = z;
            s.dzeta = D * z;
            s.d2zeta = D * s.dzeta;
            s.d3zeta = D * s.d2zeta;
            s.P0 = P0;
            s.ell = p.ell;
            s.min_height = z.minCoeff();
            s.omega_eq = contact_angle(s);
            return s;
        }
        // Jacobian of the residual w.r.t. (z, P0).
        Vec zp = D * z;
        Vec zpp = D * zp;
        Mat D2 = D * D;
        Mat Jm = Mat::Zero(n + 2, n + 2);
        for (int i = 1; i < n; ++i) {
            double s = zp[i];
            double c32 = std::pow(1.0 + s * s, 1.5);
            double c52 = std::pow(1.0 + s * s, 2.5);
            for (int j = 0; j <= n; ++j)
                Jm(i - 1, j) = -p.sigma * D2(i, j) / c32 + p.sigma * zpp[i] * 3.0 * s * D(i, j) / c52;
            Jm(i - 1, i) += p.g;
            Jm(i - 1, n + 1) = -1.0;
        }
        auto dslope = [&](double s) { return p.sigma / std::pow(1.0 + s * s, 1.5); };
        for (int j = 0; j <= n; ++j) {
            Jm(n - 1, j) = dslope(zp[0]) * D(0, j);
            Jm(n, j) = dslope(zp[n]) * D(n, j);
        }
        for (int j = 0; j <= n; ++j) Jm(n + 1, j) = w[j];

        Vec step = Jm.partialPivLu().solve(-r);
        // damped update, guarding against pinch-off mid-iteration
        double lambda = 1.0;
        for (int back = 0; back < 30; ++back) {
            Vec zc = z + lambda * step.head(n + 1);
            double Pc = P0 + lambda * step[n + 1];
            if (zc.minCoeff() <= 0.0) {
                lambda *= 0.5;
                continue;
            }
            Vec rc = system_residual(zc, Pc, D, w, p);
            if (rc.lpNorm<Eigen::Infinity>() <= resnorm || lambda < 1e-4) {
                z = zc;
                P0 = Pc;
                break;
            }
            lambda *= 0.5;
        }
        if (z.minCoeff() <= 0.0) throw PinchOff(z.minCoeff());
    }
    throw NoConvergence(max_iter, resnorm);
}

EquilibriumResidual equilibrium_residual(const EquilibriumSurface& s, const PhysicalParams& p,
                                         int fine_factor) {
    const int n = int(s.x.size()) - 1;
    const int nf = fine_factor * n;
    const Vec xf = cheb::points(nf, -s.ell, s.ell);
    const Vec wf = cheb::quad_weights(nf, -s.ell, s.ell);

    EquilibriumResidual r;
    double vol = 0.0;
    for (int i = 0; i <= nf; ++i) {
        double z = s.value(xf[i]);
        vol += wf[i] * z;
        if (i > 0 && i < nf) {
            double res = p.g * z - p.sigma * s.mean_curvature(xf[i]) - s.P0;
            r.ode_residual_max = std::max(r.ode_residual_max, std::abs(res));
        }
    }
    auto slope_term = [&](double sl) { return p.sigma * sl / std::sqrt(1.0 + sl * sl); };
    r.slope_residual_left = slope_term(s.slope(-s.ell)) + p.gamma_jump;
    r.slope_residual_right = slope_term(s.slope(s.ell)) - p.gamma_jump;
    r.volume_error = vol - p.volume;
    return r;
}

double contact_angle(const EquilibriumSurface& s) {
    return M_PI / 2.0 - std::atan(s.slope(s.ell));
}

std::string equilibrium_table(const EquilibriumSurface& s, int samples) {
    std::ostringstream os;
    os.precision(17);
    os << "# P0 = " << s.P0 << "  omega_eq = " << s.omega_eq << "\n";
    for (int i = 0; i < samples; ++i) {
        double xq = -s.ell + 2.0 * s.ell * i / (samples - 1);
        os << xq << " " << s.value(xq) << "\n";
    }
    return os.str();
}

}  // namespace mcl
