#pragma once

#include <memory>

#include "mcl/config.hpp"
#include "mcl/geometry.hpp"
#include "mcl/mesh.hpp"
#include "mcl/surface.hpp"
#include "mcl/types.hpp"

namespace mcl {

// Eigenbasis of the t=0 generalized problem (psi, w)_W = lambda (psi, w)_H0
// on the discretely div_A-free, wall-impermeable, zero-mean-trace subspace.
// w^j(t) = M(t) phi^j / sqrt(lambda_j) with phi^j = M(0)^{-1} psi_j; traces
// w^j . N are time-independent (M^T N = N0), precomputed here once.
struct Basis {
    int m = 0;
    Vec lambda;
    Mat Psi;  // n_dofs x m, H0(0)-orthonormal eigenfields (constrained dofs zero)

    // reference-field tables at the mesh quadrature points (psi_j values and
    // gradients; push-forward composes T = M(t) M(0)^{-1} pointwise)
    struct PointTable {
        Mat val0, val1;              // npts x m (components of psi_j)
        Mat g00, g01, g10, g11;      // npts x m (d psi_r / d x_c)
    };
    PointTable bulk, surf, wall;

    Mat traces;      // n_surf_pts x m : a_j = w^j . N (time-independent)
    Mat traces_dx;   // d/dx1 along the surface
    Mat corner;      // 2 x m : a_j(-ell), a_j(+ell)
    Mat surf_form;   // m x m : (a_i, a_j)_{1,Sigma}
    Mat corner_form; // m x m : [a_i, a_j]_ell
    std::vector<SurfaceFunction> trace_sf;  // zero-mean cosine views of a_j

    double epsilon = 0.0;  // the W-inner product used to build the basis
    std::shared_ptr<GeometryCache> cache0;
    const Mesh* mesh = nullptr;
    const EquilibriumSurface* zeta0 = nullptr;

    // surface weight sigma/(1+|d1 zeta0|^2)^{3/2} and g at surface points
    Vec w_grav, w_cap;
};

// Basis fields pushed to the quadrature points of a geometry cache at time t.
struct PushedBasis {
    Mat val0, val1;          // npts x m over bulk points
    Mat g00, g01, g10, g11;
    Mat sval0, sval1;        // surface points
    Mat sg00, sg01, sg10, sg11;
    Mat wval0, wval1;        // wall points
    Mat wg00, wg01, wg10, wg11;
};

struct FormMatrices {
    Mat mass;    // (w^i, w^j)_{H0}
    Mat stiff;   // ((w^i, w^j))
    Mat surf;    // (w^i.N, w^j.N)_{1,Sigma}  (time-independent copy)
    Mat corner;  // [w^i.N, w^j.N]_ell
    Mat rcoup;   // (R w^i, w^j)_{H0}
    double max_asymmetry = 0.0;
};

Basis build_initial_basis(const Mesh& mesh, const EquilibriumSurface& zeta0,
                          const PhysicalParams& phys, double epsilon,
                          const SurfaceFunction& eta0, int m);

PushedBasis push_forward(const Basis& basis, const GeometryCache& cache);

FormMatrices assemble(const Basis& basis, const GeometryCache& cache, const PushedBasis& pb,
                      const PhysicalParams& phys);

// Sparse full-space operators used by the eigen build and pressure recovery.
struct FullSpaceOps {
    SpMat stiff;       // ((.,.)) at the cache geometry, full P2 dofs
    SpMat mass;        // J-weighted vector mass
    SpMat surf_h1;     // (u.N, v.N)_{1,Sigma}
    SpMat corner;      // [u.N, v.N]_ell
    SpMat div_b;       // n_p1 x n_dofs : (q_p, div_A u)_{H0}
    Vec mean_trace;    // n_dofs : integral of u.N over the surface
    Vec pressure_mean; // n_p1 : integral of q_p over Omega
};
FullSpaceOps assemble_full_ops(const Mesh& mesh, const EquilibriumSurface& zeta0,
                               const GeometryCache& cache, const PhysicalParams& phys,
                               const SurfaceFunction& eta);

// Binary basis checkpoint with a versioned header.
void save_basis(const std::string& path, const Basis& basis, unsigned long long mesh_checksum);
bool load_basis(const std::string& path, Basis& basis, unsigned long long mesh_checksum);

}  // namespace mcl
