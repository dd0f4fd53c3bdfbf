#pragma once

#include <functional>

#include "mcl/types.hpp"

namespace mcl {

// Scalar field on (-ell, ell) held as values on the uniform (N+1)-point grid
// together with the matching cosine coefficients of the even-periodic
// extension: f(x) = sum_k coeffs[k] * cos(k*pi*(x+ell)/(2*ell)). The two
// views are exact transforms of each other (DCT-I pair).
class SurfaceFunction {
  public:
    SurfaceFunction() = default;
    SurfaceFunction(int modes, double ell);  // zero function, modes = N
    static SurfaceFunction from_nodal(const Vec& nodal, double ell);
    static SurfaceFunction from_coeffs(const Vec& coeffs, double ell);
    static SurfaceFunction sample(const std::function<double(double)>& f, int modes, double ell);
    // Single cosine mode k with zero mean enforced for k = 0.
    static SurfaceFunction mode(int k, double amplitude, int modes, double ell);

    int modes() const { return int(coeffs_.size()) - 1; }
    double ell() const { return ell_; }
    const Vec& nodal() const { return nodal_; }
    const Vec& coeffs() const { return coeffs_; }
    const Vec& grid() const { return grid_; }
    double mean() const { return mean_; }

    double value(double x) const;
    double deriv(double x) const;
    double deriv2(double x) const;
    // One-sided finite-difference slope at +-ell from nodal values; the
    // cosine series' own derivative vanishes at the ends by symmetry.
    double end_slope(int side) const;  // side = -1 or +1

    double operator()(double x) const { return value(x); }

    SurfaceFunction& operator+=(const SurfaceFunction& o);
    SurfaceFunction& operator*=(double a);
    friend SurfaceFunction operator+(SurfaceFunction a, const SurfaceFunction& b) { return a += b; }
    friend SurfaceFunction operator*(double a, SurfaceFunction f) { return f *= a; }

    SurfaceFunction zero_mean() const;

  private:
    double ell_ = 1.0;
    double mean_ = 0.0;
    Vec grid_, nodal_, coeffs_;
    void sync_from_nodal();
};

// Spectral W^{s,q} norm for q = 2: (sum_k m_k (1 + mu_k^2)^s |f_k|^2)^(1/2)
// with mu_k = k*pi/(2*ell) the physical wavenumbers. For q != 2 a quadrature
// surrogate: integer derivatives by spectral differentiation plus the
// Gagliardo seminorm of the fractional remainder on a coarse grid. Used in
// diagnostics only.
double fractional_norm(const SurfaceFunction& f, double s, double q);

// Exponential lift of the even-periodic extension. Mode k decays like
// exp(mu_k * h) for depth h = x2 - zeta0(x1) <= 0; the mean mode does not
// decay. Derivatives are with respect to the lift variables (x1, h); callers
// apply the chain rule through the shift.
class BulkLift {
  public:
    BulkLift() = default;
    explicit BulkLift(const SurfaceFunction& f);

    double value(double x1, double h) const;
    // partials in (x1, h) up to second order
    void derivs(double x1, double h, double& v, double& px, double& ph) const;
    void derivs2(double x1, double h, double& v, double& px, double& ph, double& pxx, double& pxh,
                 double& phh) const;
    void derivs3(double x1, double h, double& pxxx, double& pxxh, double& pxhh,
                 double& phhh) const;

    double ell() const { return ell_; }

  private:
    double ell_ = 1.0;
    Vec coeffs_;
    Vec mu_;
};

BulkLift poisson_extend(const SurfaceFunction& eta);

}  // namespace mcl
