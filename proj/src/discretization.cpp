#include "mcl/discretization.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace mcl {

namespace {

// local 12-dof indexing: dof l*2 + c for local node l, component c
inline int ldof(int l, int c) { return 2 * l + c; }

struct TraceShape {
    // u.N and d/dx1(u.N) along the curve as functionals of the local dofs
    double t[12];
    double tdx[12];
};

TraceShape trace_shape(const Mesh::ShapeTab& tab, int i, double N1, double dN1, double z0p) {
    TraceShape s{};
    const double Ncomp[2] = {N1, 1.0};
    for (int l = 0; l < 6; ++l) {
        const double v = tab.N(i, l);
        const double dtang = tab.Nx(i, l) + z0p * tab.Ny(i, l);
        for (int c = 0; c < 2; ++c) {
            s.t[ldof(l, c)] = v * Ncomp[c];
            // product rule: (d1 u + z0p d2 u).N + u . d1 N, with d1 N = (dN1, 0)
            s.tdx[ldof(l, c)] = dtang * Ncomp[c] + (c == 0 ? v * dN1 : 0.0);
        }
    }
    return s;
}

}  // namespace

FullSpaceOps assemble_full_ops(const Mesh& mesh, const EquilibriumSurface& zeta0,
                               const GeometryCache& cache, const PhysicalParams& phys,
                               const SurfaceFunction& eta) {
    FullSpaceOps ops;
    const int n = mesh.n_dofs();
    std::vector<Triplet> t_stiff, t_mass, t_surf, t_corner, t_div;
    ops.mean_trace = Vec::Zero(n);
    ops.pressure_mean = Vec::Zero(mesh.n_p1);

    // bulk: stiffness (viscous part), mass, divergence pairing, pressure mean
    const auto& tb = mesh.shp_bulk;
    for (int i = 0; i < int(mesh.pset.bulk.size()); ++i) {
        const double w = mesh.pset.bulk[i].w;
        const double J = cache.bulk.J[i];
        const double K = cache.bulk.K[i];
        const double a12 = -cache.bulk.A[i] * K;
        const Mat2 Minv = cache.bulk.Minv(i);
        const Mat2 dMinv1 = cache.bulk.dMinv(i, 0), dMinv2 = cache.bulk.dMinv(i, 1);

        double D11[12], D22[12], D12[12], val[12][2], divv[12];
        for (int l = 0; l < 6; ++l) {
            const double Nx = tb.Nx(i, l), Ny = tb.Ny(i, l), N = tb.N(i, l);
            for (int c = 0; c < 2; ++c) {
                // G(r, k) = d u_r/d x_k for u = N e_c
                const double g0 = (c == 0) ? Nx : 0.0, g1 = (c == 0) ? Ny : 0.0;
                const double h0 = (c == 1) ? Nx : 0.0, h1 = (c == 1) ? Ny : 0.0;
                const double AG11 = g0 + a12 * g1;   // (A G^T)_11
                const double AG12 = h0 + a12 * h1;   // (A G^T)_12
                const double AG21 = K * g1;
                const double AG22 = K * h1;
                const int d = ldof(l, c);
                D11[d] = 2.0 * AG11;
                D22[d] = 2.0 * AG22;
                D12[d] = AG12 + AG21;
                val[d][0] = (c == 0) ? N : 0.0;
                val[d][1] = (c == 1) ? N : 0.0;
                // div(Minv u) = sum_r [dMinv_r u + Minv d_r u]_r
                divv[d] = dMinv1(0, c) * N + dMinv2(1, c) * N + Minv(0, c) * Nx + Minv(1, c) * Ny;
            }
        }
        for (int a = 0; a < 12; ++a) {
            const int ga = mesh.dof(tb.dofs(i, a / 2), a % 2);
            for (int b = 0; b < 12; ++b) {
                const int gb = mesh.dof(tb.dofs(i, b / 2), b % 2);
                const double st =
                    0.5 * phys.mu * w * J * (D11[a] * D11[b] + D22[a] * D22[b] + 2.0 * D12[a] * D12[b]);
                if (st != 0.0) t_stiff.emplace_back(ga, gb, st);
                const double ms = w * J * (val[a][0] * val[b][0] + val[a][1] * val[b][1]);
                if (ms != 0.0) t_mass.emplace_back(ga, gb, ms);
            }
            for (int pl = 0; pl < 3; ++pl) {
                const int gp = tb.dofsP1(i, pl);
                const double bv = w * tb.NP1(i, pl) * divv[a];
                if (bv != 0.0) t_div.emplace_back(gp, ga, bv);
            }
        }
        for (int pl = 0; pl < 3; ++pl) ops.pressure_mean[tb.dofsP1(i, pl)] += w * tb.NP1(i, pl);
    }

    // wall: slip friction into stiff
    const auto& tw = mesh.shp_wall;
    for (int i = 0; i < int(mesh.pset.wall.size()); ++i) {
        const double w = mesh.pset.wall[i].w;
        const double J = cache.wall.J[i];
        const Vec2 tau = mesh.pset.wall[i].tau;
        double s[12];
        for (int l = 0; l < 6; ++l)
            for (int c = 0; c < 2; ++c) s[ldof(l, c)] = tw.N(i, l) * tau[c];
        for (int a = 0; a < 12; ++a) {
            const int ga = mesh.dof(tw.dofs(i, a / 2), a % 2);
            for (int b = 0; b < 12; ++b) {
                const int gb = mesh.dof(tw.dofs(i, b / 2), b % 2);
                const double v = phys.beta * w * J * s[a] * s[b];
                if (v != 0.0) t_stiff.emplace_back(ga, gb, v);
            }
        }
    }

    // surface: H1-type trace form and the mean-trace functional
    const auto& ts = mesh.shp_surf;
    for (int i = 0; i < int(mesh.pset.surf.size()); ++i) {
        const double w = mesh.pset.surf[i].w;
        const double x1 = mesh.pset.surf[i].x1;
        const double z0p = zeta0.slope(x1);
        const double N1 = -z0p - eta.deriv(x1);
        const double dN1 = -zeta0.curvature_arg(x1) - eta.deriv2(x1);
        const double cap = phys.sigma / std::pow(1.0 + z0p * z0p, 1.5);
        const TraceShape sh = trace_shape(ts, i, N1, dN1, z0p);
        for (int a = 0; a < 12; ++a) {
            const int ga = mesh.dof(ts.dofs(i, a / 2), a % 2);
            ops.mean_trace[ga] += w * sh.t[a];
            for (int b = 0; b < 12; ++b) {
                const int gb = mesh.dof(ts.dofs(i, b / 2), b % 2);
                const double v = w * (phys.g * sh.t[a] * sh.t[b] + cap * sh.tdx[a] * sh.tdx[b]);
                if (v != 0.0) t_surf.emplace_back(ga, gb, v);
            }
        }
    }

    // corner bracket
    for (int cidx = 0; cidx < 2; ++cidx) {
        const int node = mesh.corner_node[cidx];
        const double xc = (cidx == 0) ? -mesh.ell : mesh.ell;
        const double N1 = -zeta0.slope(xc) - eta.deriv(xc);
        const double Nc[2] = {N1, 1.0};
        for (int c1 = 0; c1 < 2; ++c1)
            for (int c2 = 0; c2 < 2; ++c2)
                t_corner.emplace_back(mesh.dof(node, c1), mesh.dof(node, c2),
                                      phys.kappa * Nc[c1] * Nc[c2]);
    }

    ops.stiff.resize(n, n);
    ops.stiff.setFromTriplets(t_stiff.begin(), t_stiff.end());
    ops.mass.resize(n, n);
    ops.mass.setFromTriplets(t_mass.begin(), t_mass.end());
    ops.surf_h1.resize(n, n);
    ops.surf_h1.setFromTriplets(t_surf.begin(), t_surf.end());
    ops.corner.resize(n, n);
    ops.corner.setFromTriplets(t_corner.begin(), t_corner.end());
    ops.div_b.resize(mesh.n_p1, n);
    ops.div_b.setFromTriplets(t_div.begin(), t_div.end());
    return ops;
}

namespace {

void fill_point_table(Basis::PointTable& pt, const Mesh::ShapeTab& tab, const Mat& Psi,
                      const Mesh& mesh, int npts, int m) {
    pt.val0.setZero(npts, m);
    pt.val1.setZero(npts, m);
    pt.g00.setZero(npts, m);
    pt.g01.setZero(npts, m);
    pt.g10.setZero(npts, m);
    pt.g11.setZero(npts, m);
    for (int i = 0; i < npts; ++i) {
        for (int l = 0; l < 6; ++l) {
            const int nd = tab.dofs(i, l);
            const double N = tab.N(i, l), Nx = tab.Nx(i, l), Ny = tab.Ny(i, l);
            pt.val0.row(i) += N * Psi.row(mesh.dof(nd, 0));
            pt.val1.row(i) += N * Psi.row(mesh.dof(nd, 1));
            pt.g00.row(i) += Nx * Psi.row(mesh.dof(nd, 0));
            pt.g01.row(i) += Ny * Psi.row(mesh.dof(nd, 0));
            pt.g10.row(i) += Nx * Psi.row(mesh.dof(nd, 1));
            pt.g11.row(i) += Ny * Psi.row(mesh.dof(nd, 1));
        }
    }
}

void finalize_basis(Basis& b, const Mesh& mesh, const EquilibriumSurface& zeta0,
                    const PhysicalParams& phys, const SurfaceFunction& eta0, int surface_modes) {
    const int m = b.m;
    fill_point_table(b.bulk, mesh.shp_bulk, b.Psi, mesh, int(mesh.pset.bulk.size()), m);
    fill_point_table(b.surf, mesh.shp_surf, b.Psi, mesh, int(mesh.pset.surf.size()), m);
    fill_point_table(b.wall, mesh.shp_wall, b.Psi, mesh, int(mesh.pset.wall.size()), m);

    const int ns = int(mesh.pset.surf.size());
    b.traces.resize(ns, m);
    b.traces_dx.resize(ns, m);
    b.w_grav = Vec::Constant(ns, phys.g);
    b.w_cap = Vec(ns);
    Vec invsq = b.lambda.array().sqrt().inverse();
    for (int i = 0; i < ns; ++i) {
        const double x1 = mesh.pset.surf[i].x1;
        const double z0p = zeta0.slope(x1);
        const double N1 = -z0p - eta0.deriv(x1);
        const double dN1 = -zeta0.curvature_arg(x1) - eta0.deriv2(x1);
        b.w_cap[i] = phys.sigma / std::pow(1.0 + z0p * z0p, 1.5);
        // a_j = psi_j . N(0) / sqrt(lambda); tangential derivative by product rule
        b.traces.row(i) = (b.surf.val0.row(i) * N1 + b.surf.val1.row(i)).cwiseProduct(
            invsq.transpose());
        Eigen::RowVectorXd dtang0 = b.surf.g00.row(i) + z0p * b.surf.g01.row(i);
        Eigen::RowVectorXd dtang1 = b.surf.g10.row(i) + z0p * b.surf.g11.row(i);
        b.traces_dx.row(i) =
            (dtang0 * N1 + dtang1 + b.surf.val0.row(i) * dN1).cwiseProduct(invsq.transpose());
    }
    b.corner.resize(2, m);
    for (int cidx = 0; cidx < 2; ++cidx) {
        const int node = mesh.corner_node[cidx];
        const double xc = (cidx == 0) ? -mesh.ell : mesh.ell;
        const double N1 = -zeta0.slope(xc) - eta0.deriv(xc);
        for (int j = 0; j < m; ++j)
            b.corner(cidx, j) =
                (b.Psi(mesh.dof(node, 0), j) * N1 + b.Psi(mesh.dof(node, 1), j)) * invsq[j];
    }

    // time-independent surface and corner forms
    Vec wq(ns);
    for (int i = 0; i < ns; ++i) wq[i] = mesh.pset.surf[i].w;
    b.surf_form = b.traces.transpose() * (wq.cwiseProduct(b.w_grav)).asDiagonal() * b.traces +
                  b.traces_dx.transpose() * (wq.cwiseProduct(b.w_cap)).asDiagonal() * b.traces_dx;
    b.surf_form = 0.5 * (b.surf_form + b.surf_form.transpose()).eval();
    b.corner_form = phys.kappa * (b.corner.row(0).transpose() * b.corner.row(0) +
                                  b.corner.row(1).transpose() * b.corner.row(1));

    // cosine views of the traces (exact zero mean by construction)
    b.trace_sf.clear();
    b.trace_sf.reserve(m);
    for (int j = 0; j < m; ++j) {
        Vec col = b.Psi.col(j);
        auto fn = [&](double x1) {
            // locate the surface edge containing x1
            int eidx = std::min(int((x1 + mesh.ell) / (2.0 * mesh.ell / mesh.nx)), mesh.nx - 1);
            const auto& ed = mesh.surf_edges[eidx];
            Vec2 v = mesh.eval_vec(col, ed.elem, x1, zeta0.value(x1));
            const double N1 = -zeta0.slope(x1) - eta0.deriv(x1);
            return (v[0] * N1 + v[1]) * invsq[j];
        };
        SurfaceFunction sf = SurfaceFunction::sample(fn, surface_modes, mesh.ell);
        Vec c = sf.coeffs();
        c[0] = 0.0;
        b.trace_sf.push_back(SurfaceFunction::from_coeffs(c, mesh.ell));
    }
}

}  // namespace

Basis build_initial_basis(const Mesh& mesh, const EquilibriumSurface& zeta0,
                          const PhysicalParams& phys, double epsilon,
                          const SurfaceFunction& eta0, int m) {
    SurfaceFunction zero(eta0.modes(), eta0.ell());
    auto cache0 = std::make_shared<GeometryCache>(
        build_geometry(zeta0, eta0, zero, mesh.pset));
    FullSpaceOps ops = assemble_full_ops(mesh, zeta0, *cache0, phys, eta0);

    SpMat Wfull = ops.stiff + epsilon * ops.surf_h1 + ops.corner;
    const int nf = mesh.n_free;

    // reduce to free dofs
    Mat Wr = Mat::Zero(nf, nf), Hr = Mat::Zero(nf, nf);
    for (int k = 0; k < Wfull.outerSize(); ++k)
        for (SpMat::InnerIterator it(Wfull, k); it; ++it) {
            int r = mesh.free_index[it.row()], c = mesh.free_index[it.col()];
            if (r >= 0 && c >= 0) Wr(r, c) += it.value();
        }
    for (int k = 0; k < ops.mass.outerSize(); ++k)
        for (SpMat::InnerIterator it(ops.mass, k); it; ++it) {
            int r = mesh.free_index[it.row()], c = mesh.free_index[it.col()];
            if (r >= 0 && c >= 0) Hr(r, c) += it.value();
        }

    // constraints: P1 divergence rows plus the mean-trace row
    Mat C = Mat::Zero(mesh.n_p1 + 1, nf);
    for (int k = 0; k < ops.div_b.outerSize(); ++k)
        for (SpMat::InnerIterator it(ops.div_b, k); it; ++it) {
            int c = mesh.free_index[it.col()];
            if (c >= 0) C(it.row(), c) += it.value();
        }
    for (int d = 0; d < mesh.n_dofs(); ++d) {
        int c = mesh.free_index[d];
        if (c >= 0) C(mesh.n_p1, c) = ops.mean_trace[d];
    }

    Eigen::FullPivLU<Mat> lu(C);
    lu.setThreshold(1e-9);
    Mat Z = lu.kernel();
    const int kdim = int(Z.cols());
    if (m > kdim) throw SubspaceTooSmall(m, kdim);

    Mat Gw = Z.transpose() * Wr * Z;
    Mat Gh = Z.transpose() * Hr * Z;
    Gw = 0.5 * (Gw + Gw.transpose()).eval();
    Gh = 0.5 * (Gh + Gh.transpose()).eval();

    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(Gw, Gh);
    if (es.info() != Eigen::Success) throw EigensolveFailure("generalized eigensolver failed");

    Basis b;
    b.m = m;
    b.epsilon = epsilon;
    b.lambda = es.eigenvalues().head(m);
    if (b.lambda[0] <= 0.0) throw EigensolveFailure("nonpositive leading eigenvalue");
    Mat Xr = Z * es.eigenvectors().leftCols(m);  // free-dof coefficients
    b.Psi = Mat::Zero(mesh.n_dofs(), m);
    for (int d = 0; d < mesh.n_dofs(); ++d) {
        int c = mesh.free_index[d];
        if (c >= 0) b.Psi.row(d) = Xr.row(c);
    }
    b.cache0 = cache0;
    b.mesh = &mesh;
    b.zeta0 = &zeta0;
    finalize_basis(b, mesh, zeta0, phys, eta0, std::max(32, eta0.modes()));
    return b;
}

PushedBasis push_forward(const Basis& basis, const GeometryCache& cache) {
    PushedBasis pb;
    const int m = basis.m;
    const GeometryCache& c0 = *basis.cache0;
    Vec invsq = basis.lambda.array().sqrt().inverse();

    auto push = [&](const Basis::PointTable& pt, const GeomFields& gf, const GeomFields& gf0,
                    Mat& v0, Mat& v1, Mat& g00, Mat& g01, Mat& g10, Mat& g11) {
        const int n = pt.val0.rows();
        v0.resize(n, m);
        v1.resize(n, m);
        g00.resize(n, m);
        g01.resize(n, m);
        g10.resize(n, m);
        g11.resize(n, m);
        for (int i = 0; i < n; ++i) {
            const Mat2 T = gf.Mmat(i) * gf0.Minv(i);
            Mat2 dT[2];
            for (int d = 0; d < 2; ++d)
                dT[d] = gf.dM(i, d) * gf0.Minv(i) + gf.Mmat(i) * gf0.dMinv(i, d);
            // values
            v0.row(i) = T(0, 0) * pt.val0.row(i) + T(0, 1) * pt.val1.row(i);
            v1.row(i) = T(1, 0) * pt.val0.row(i) + T(1, 1) * pt.val1.row(i);
            // gradients: d_c (T psi)_r = (d_c T psi)_r + (T d_c psi)_r
            g00.row(i) = dT[0](0, 0) * pt.val0.row(i) + dT[0](0, 1) * pt.val1.row(i) +
                         T(0, 0) * pt.g00.row(i) + T(0, 1) * pt.g10.row(i);
            g01.row(i) = dT[1](0, 0) * pt.val0.row(i) + dT[1](0, 1) * pt.val1.row(i) +
                         T(0, 0) * pt.g01.row(i) + T(0, 1) * pt.g11.row(i);
            g10.row(i) = dT[0](1, 0) * pt.val0.row(i) + dT[0](1, 1) * pt.val1.row(i) +
                         T(1, 0) * pt.g00.row(i) + T(1, 1) * pt.g10.row(i);
            g11.row(i) = dT[1](1, 0) * pt.val0.row(i) + dT[1](1, 1) * pt.val1.row(i) +
                         T(1, 0) * pt.g01.row(i) + T(1, 1) * pt.g11.row(i);
        }
        // scale by 1/sqrt(lambda)
        for (Mat* mm : {&v0, &v1, &g00, &g01, &g10, &g11})
            *mm = mm->array().rowwise() * invsq.transpose().array();
    };

    push(basis.bulk, cache.bulk, c0.bulk, pb.val0, pb.val1, pb.g00, pb.g01, pb.g10, pb.g11);
    push(basis.surf, cache.surf, c0.surf, pb.sval0, pb.sval1, pb.sg00, pb.sg01, pb.sg10, pb.sg11);
    push(basis.wall, cache.wall, c0.wall, pb.wval0, pb.wval1, pb.wg00, pb.wg01, pb.wg10, pb.wg11);
    return pb;
}

FormMatrices assemble(const Basis& basis, const GeometryCache& cache, const PushedBasis& pb,
                      const PhysicalParams& phys) {
    const Mesh& mesh = *basis.mesh;
    const int m = basis.m;
    const int nb = int(mesh.pset.bulk.size());
    FormMatrices f;

    Vec wJ(nb), wJr11(nb), wJr21(nb);
    for (int i = 0; i < nb; ++i) {
        const double w = mesh.pset.bulk[i].w;
        wJ[i] = w * cache.bulk.J[i];
        wJr11[i] = wJ[i] * cache.bulk.J[i] * cache.bulk.dtK[i];
        wJr21[i] = wJ[i] * cache.bulk.J[i] * cache.bulk.dtKA[i];
    }

    f.mass = pb.val0.transpose() * wJ.asDiagonal() * pb.val0 +
             pb.val1.transpose() * wJ.asDiagonal() * pb.val1;

    // Rcoup(j, i) = ((R w^i) . w^j)_{H0}; R has only its first column nonzero
    f.rcoup = (pb.val0.transpose() * wJr11.asDiagonal() * pb.val0 +
               pb.val1.transpose() * wJr21.asDiagonal() * pb.val0);

    // viscous part of ((.,.)): D entries per point
    Mat D11(nb, m), D22(nb, m), D12(nb, m);
    for (int i = 0; i < nb; ++i) {
        const double K = cache.bulk.K[i];
        const double a12 = -cache.bulk.A[i] * K;
        D11.row(i) = 2.0 * (pb.g00.row(i) + a12 * pb.g01.row(i));
        D22.row(i) = 2.0 * K * pb.g11.row(i);
        D12.row(i) = (pb.g10.row(i) + a12 * pb.g11.row(i)) + K * pb.g01.row(i);
    }
    Vec hw = 0.5 * phys.mu * wJ;
    f.stiff = D11.transpose() * hw.asDiagonal() * D11 + D22.transpose() * hw.asDiagonal() * D22 +
              2.0 * (D12.transpose() * hw.asDiagonal() * D12);

    // slip part
    const int nw = int(mesh.pset.wall.size());
    Mat s(nw, m);
    Vec ws(nw);
    for (int i = 0; i < nw; ++i) {
        const Vec2 tau = mesh.pset.wall[i].tau;
        s.row(i) = tau[0] * pb.wval0.row(i) + tau[1] * pb.wval1.row(i);
        ws[i] = phys.beta * mesh.pset.wall[i].w * cache.wall.J[i];
    }
    f.stiff += s.transpose() * ws.asDiagonal() * s;

    f.surf = basis.surf_form;
    f.corner = basis.corner_form;

    auto asym = [](const Mat& a) { return (a - a.transpose()).cwiseAbs().maxCoeff(); };
    f.max_asymmetry = std::max(asym(f.mass), asym(f.stiff));
    f.mass = 0.5 * (f.mass + f.mass.transpose()).eval();
    f.stiff = 0.5 * (f.stiff + f.stiff.transpose()).eval();
    return f;
}

namespace {
constexpr std::uint32_t kBasisMagic = 0x4d434c42u;  // "MCLB"
constexpr std::uint32_t kBasisVersion = 1;
}  // namespace

void save_basis(const std::string& path, const Basis& basis, unsigned long long mesh_checksum) {
    std::ofstream f(path, std::ios::binary);
    auto put = [&](const void* p, size_t nbytes) { f.write(reinterpret_cast<const char*>(p), nbytes); };
    std::uint32_t magic = kBasisMagic, ver = kBasisVersion;
    std::uint64_t chk = mesh_checksum;
    std::int32_t n = int(basis.Psi.rows()), m = basis.m;
    double eps = basis.epsilon;
    put(&magic, 4);
    put(&ver, 4);
    put(&chk, 8);
    put(&n, 4);
    put(&m, 4);
    put(&eps, 8);
    put(basis.lambda.data(), sizeof(double) * m);
    put(basis.Psi.data(), sizeof(double) * size_t(n) * m);
}

bool load_basis(const std::string& path, Basis& basis, unsigned long long mesh_checksum) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return false;
    auto get = [&](void* p, size_t nbytes) { f.read(reinterpret_cast<char*>(p), nbytes); };
    std::uint32_t magic = 0, ver = 0;
    std::uint64_t chk = 0;
    std::int32_t n = 0, m = 0;
    double eps = 0;
    get(&magic, 4);
    get(&ver, 4);
    get(&chk, 8);
    get(&n, 4);
    get(&m, 4);
    get(&eps, 8);
    if (!f || magic != kBasisMagic || ver != kBasisVersion || chk != mesh_checksum) return false;
    basis.m = m;
    basis.epsilon = eps;
    basis.lambda.resize(m);
    basis.Psi.resize(n, m);
    get(basis.lambda.data(), sizeof(double) * m);
    get(basis.Psi.data(), sizeof(double) * size_t(n) * m);
    return bool(f);
}

}  // namespace mcl
