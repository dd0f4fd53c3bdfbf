#pragma once

#include <vector>

#include "mcl/config.hpp"
#include "mcl/equilibrium.hpp"
#include "mcl/surface.hpp"
#include "mcl/types.hpp"

namespace mcl {

// Cutoff phi: 0 below min_zeta0/4, identity above min_zeta0/2, quintic
// smoothstep blend in between (C^2 across the seams).
struct CutoffEval {
    double phi, dphi, d2phi, d3phi;
};
CutoffEval cutoff_phi(double z, double min_zeta0);

// Remainder of the curvature linearization, pinned so that
// (y+z)/sqrt(1+(y+z)^2) = y/sqrt(1+y^2) + z/(1+y^2)^(3/2) + R(y, z).
template <typename Scalar>
Scalar curvature_remainder(Scalar y, Scalar z) {
    using std::sqrt;
    Scalar w = y + z;
    return w / sqrt(Scalar(1) + w * w) - y / sqrt(Scalar(1) + y * y) -
           z / (std::pow(Scalar(1) + y * y, Scalar(1.5)));
}
double curvature_remainder_dz(double y, double z);

// Evaluation points the cache is built on. Bulk points carry triangle
// quadrature weights (physical measure); surface points sit on the curve
// x2 = zeta0(x1) with 1D Gauss weights in x1; wall points carry the
// boundary arclength weight.
struct PointSet {
    struct BulkPt {
        double x1, x2, w;
        int elem;
    };
    struct SurfPt {
        double x1, x2, w;  // w = dx1 weight
        int elem, edge;
    };
    struct WallPt {
        double x1, x2, w;  // w = reference arclength weight
        int elem;
        Vec2 nu, tau;
    };
    std::vector<BulkPt> bulk;
    std::vector<SurfPt> surf;
    std::vector<WallPt> wall;
};

// Per-point flattening-map fields over one point list.
struct GeomFields {
    Vec A, J, K, W;
    Vec A1, A2, J1, J2;                 // spatial partials
    Vec A11, A12, A22, J11, J12, J22;   // second partials
    Vec dtA, dtJ, dtK, dtKA;            // time partials (from deta)
    Vec ebar, ebar1, ebar2;             // lifted eta: value and total partials
    Vec debar, debar1, debar2;          // lifted deta
    Vec z0, z0p;

    int size() const { return int(A.size()); }
    void resize(int n);

    Mat2 Acal(int i) const {  // (grad Phi)^{-T}
        Mat2 m;
        m << 1.0, -A[i] * K[i], 0.0, K[i];
        return m;
    }
    Mat2 Mmat(int i) const {  // K * grad Phi
        Mat2 m;
        m << K[i], 0.0, K[i] * A[i], 1.0;
        return m;
    }
    Mat2 Minv(int i) const {
        Mat2 m;
        m << J[i], 0.0, -A[i], 1.0;
        return m;
    }
    Mat2 Rmat(int i) const {  // dtM * M^{-1}
        Mat2 m;
        m << J[i] * dtK[i], 0.0, J[i] * dtKA[i], 0.0;
        return m;
    }
    // spatial gradients of M and M^{-1} (d = 0 -> x1, d = 1 -> x2)
    Mat2 dM(int i, int d) const;
    Mat2 dMinv(int i, int d) const;
    Mat2 d2M(int i, int a, int b) const;
    Mat2 d2Minv(int i, int a, int b) const;
    Mat2 dAcal(int i, int d) const;
};

class GeometryCache {
  public:
    GeomFields bulk, surf, wall;
    // surface-only data at surf points
    Vec eta_s, etap_s, deta_s, detap_s;  // eta, d1 eta, dt eta, d1 dt eta
    Vec N1_s;                            // first component of N = (-d1(zeta0+eta), 1)
    Vec N01_s;                           // first component of N0 = (-d1 zeta0, 1)
    // corner values (index 0 -> -ell, 1 -> +ell)
    double eta_c[2] = {0, 0}, deta_c[2] = {0, 0};
    double zeta0_min = 0.0;
    double min_J = 1.0;
    bool degenerate = false;

    const PointSet* points = nullptr;
};

GeometryCache build_geometry(const EquilibriumSurface& zeta0, const SurfaceFunction& eta,
                             const SurfaceFunction& deta, const PointSet& pts,
                             bool throw_on_degenerate = true);

// Certifies J * div_A(M u) = div u at the bulk points: returns the max
// pointwise defect of div_A(Mu) - K*div(u) given analytic u and grad u.
double pull_back_divergence(const std::function<Vec2(double, double)>& u,
                            const std::function<Mat2(double, double)>& grad_u,
                            const GeometryCache& cache);

// Nonlinear boundary remainders of one surface state.
struct RemainderEval {
    Vec f3;       // sigma * R(d1 zeta0, d1 eta) at surface points
    Vec f3_dz;    // sigma * dR/dz there
    double f7[2]; // kappa * hatW(dt eta(-ell)), kappa * hatW(dt eta(+ell))
};
RemainderEval boundary_remainders(const GeometryCache& cache, const ContactLaw& law, double sigma);

}  // namespace mcl
