#include "mcl/geometry.hpp"

#include <cmath>

namespace mcl {

CutoffEval cutoff_phi(double z, double min_zeta0) {
    const double z1 = 0.25 * min_zeta0, z2 = 0.5 * min_zeta0;
    if (z <= z1) return {0.0, 0.0, 0.0, 0.0};
    if (z >= z2) return {z, 1.0, 0.0, 0.0};
    const double d = z2 - z1, t = (z - z1) / d;
    const double S = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    const double Sp = 30.0 * t * t * (1.0 + t * (-2.0 + t));
    const double Spp = t * (60.0 + t * (-180.0 + 120.0 * t));
    const double Sppp = 60.0 + t * (-360.0 + 360.0 * t);
    return {z * S, S + z * Sp / d, 2.0 * Sp / d + z * Spp / (d * d),
            3.0 * Spp / (d * d) + z * Sppp / (d * d * d)};
}

double curvature_remainder_dz(double y, double z) {
    double w = y + z;
    return 1.0 / std::pow(1.0 + w * w, 1.5) - 1.0 / std::pow(1.0 + y * y, 1.5);
}

void GeomFields::resize(int n) {
    for (Vec* v : {&A, &J, &K, &W, &A1, &A2, &J1, &J2, &A11, &A12, &A22, &J11, &J12, &J22, &dtA,
                   &dtJ, &dtK, &dtKA, &ebar, &ebar1, &ebar2, &debar, &debar1, &debar2, &z0, &z0p})
        *v = Vec::Zero(n);
}

Mat2 GeomFields::dM(int i, int d) const {
    const double Jd = (d == 0) ? J1[i] : J2[i];
    const double Ad = (d == 0) ? A1[i] : A2[i];
    const double Kd = -K[i] * K[i] * Jd;
    Mat2 m;
    m << Kd, 0.0, Kd * A[i] + K[i] * Ad, 0.0;
    return m;
}

Mat2 GeomFields::dMinv(int i, int d) const {
    const double Jd = (d == 0) ? J1[i] : J2[i];
    const double Ad = (d == 0) ? A1[i] : A2[i];
    Mat2 m;
    m << Jd, 0.0, -Ad, 0.0;
    return m;
}

Mat2 GeomFields::d2M(int i, int a, int b) const {
    const double Ja = (a == 0) ? J1[i] : J2[i];
    const double Jb = (b == 0) ? J1[i] : J2[i];
    const double Aa = (a == 0) ? A1[i] : A2[i];
    const double Ab = (b == 0) ? A1[i] : A2[i];
    const double Jab = (a == 0 && b == 0) ? J11[i] : (a == 1 && b == 1) ? J22[i] : J12[i];
    const double Aab = (a == 0 && b == 0) ? A11[i] : (a == 1 && b == 1) ? A22[i] : A12[i];
    const double k = K[i];
    const double Ka = -k * k * Ja, Kb = -k * k * Jb;
    const double Kab = 2.0 * k * k * k * Ja * Jb - k * k * Jab;
    Mat2 m;
    m << Kab, 0.0, Kab * A[i] + Ka * Ab + Kb * Aa + k * Aab, 0.0;
    return m;
}

Mat2 GeomFields::d2Minv(int i, int a, int b) const {
    const double Jab = (a == 0 && b == 0) ? J11[i] : (a == 1 && b == 1) ? J22[i] : J12[i];
    const double Aab = (a == 0 && b == 0) ? A11[i] : (a == 1 && b == 1) ? A22[i] : A12[i];
    Mat2 m;
    m << Jab, 0.0, -Aab, 0.0;
    return m;
}

Mat2 GeomFields::dAcal(int i, int d) const {
    const double Jd = (d == 0) ? J1[i] : J2[i];
    const double Ad = (d == 0) ? A1[i] : A2[i];
    const double Kd = -K[i] * K[i] * Jd;
    Mat2 m;
    m << 0.0, -(Ad * K[i] + A[i] * Kd), 0.0, Kd;
    return m;
}

GeometryCache build_geometry(const EquilibriumSurface& zeta0, const SurfaceFunction& eta,
                             const SurfaceFunction& deta, const PointSet& pts,
                             bool throw_on_degenerate) {
    GeometryCache c;
    c.points = &pts;
    c.zeta0_min = zeta0.min_height;

    const BulkLift Le = poisson_extend(eta);
    const BulkLift Ld = poisson_extend(deta);

    auto fill = [&](GeomFields& f, auto begin, auto end) {
        const int n = int(std::distance(begin, end));
        f.resize(n);
        int i = 0;
        for (auto it = begin; it != end; ++it, ++i) {
            const double x1 = it->x1, x2 = it->x2;
            const double z = zeta0.value(x1), zp = zeta0.slope(x1),
                         zpp = zeta0.curvature_arg(x1), zppp = zeta0.third(x1);
            const CutoffEval cp = cutoff_phi(x2, zeta0.min_height);
            const double h = x2 - z;

            double v, px, ph, pxx, pxh, phh;
            Le.derivs2(x1, h, v, px, ph, pxx, pxh, phh);
            double pxxx, pxxh, pxhh, phhh;
            Le.derivs3(x1, h, pxxx, pxxh, pxhh, phhh);

            // totals through the shift
            const double F = v;
            const double F1 = px - zp * ph;
            const double F2 = ph;
            const double F11 = pxx - 2 * zp * pxh + zp * zp * phh - zpp * ph;
            const double F12 = pxh - zp * phh;
            const double F22 = phh;
            const double F111 = pxxx - 3 * zp * pxxh + 3 * zp * zp * pxhh - zp * zp * zp * phhh -
                                3 * zpp * pxh + 3 * zp * zpp * phh - zppp * ph;
            const double F112 = pxxh - 2 * zp * pxhh + zp * zp * phhh - zpp * phh;
            const double F122 = pxhh - zp * phhh;
            const double F222 = phhh;

            double gv, gx, gh;
            Ld.derivs(x1, h, gv, gx, gh);
            const double G = gv, G1 = gx - zp * gh, G2 = gh;

            const double W = cp.phi / z;
            const double W1 = -cp.phi * zp / (z * z);
            const double W2 = cp.dphi / z;
            const double W11 = -cp.phi * (zpp / (z * z) - 2 * zp * zp / (z * z * z));
            const double W12 = -cp.dphi * zp / (z * z);
            const double W22 = cp.d2phi / z;
            // Q := phi * zp / z^2 (the coefficient of -eta_bar in A)
            const double Q = cp.phi * zp / (z * z);
            const double Q1 = cp.phi * (zpp / (z * z) - 2 * zp * zp / (z * z * z));
            const double Q2 = cp.dphi * zp / (z * z);
            const double Q11 =
                cp.phi * (zppp / (z * z) - 6 * zp * zpp / (z * z * z) + 6 * zp * zp * zp / (z * z * z * z));
            const double Q12 = cp.dphi * (zpp / (z * z) - 2 * zp * zp / (z * z * z));
            const double Q22 = cp.d2phi * zp / (z * z);
            // Pc := phi' / z (the coefficient of eta_bar in J)
            const double Pc = cp.dphi / z;
            const double Pc1 = -cp.dphi * zp / (z * z);
            const double Pc2 = cp.d2phi / z;
            const double Pc11 = cp.dphi * (2 * zp * zp / (z * z * z) - zpp / (z * z));
            const double Pc12 = -cp.d2phi * zp / (z * z);
            const double Pc22 = cp.d3phi / z;

            const double A = W * F1 - Q * F;
            const double J = 1.0 + Pc * F + W * F2;
            const double A1 = W1 * F1 + W * F11 - Q1 * F - Q * F1;
            const double A2 = W2 * F1 + W * F12 - Q2 * F - Q * F2;
            const double J1 = Pc1 * F + Pc * F1 + W1 * F2 + W * F12;
            const double J2 = Pc2 * F + Pc * F2 + W2 * F2 + W * F22;
            const double A11 = W11 * F1 + 2 * W1 * F11 + W * F111 - Q11 * F - 2 * Q1 * F1 - Q * F11;
            const double A12 = W12 * F1 + W1 * F12 + W2 * F11 + W * F112 - Q12 * F - Q1 * F2 -
                               Q2 * F1 - Q * F12;
            const double A22 = W22 * F1 + 2 * W2 * F12 + W * F122 - Q22 * F - 2 * Q2 * F2 - Q * F22;
            const double J11 = Pc11 * F + 2 * Pc1 * F1 + Pc * F11 + W11 * F2 + 2 * W1 * F12 + W * F112;
            const double J12 =
                Pc12 * F + Pc1 * F2 + Pc2 * F1 + Pc * F12 + W12 * F2 + W1 * F22 + W2 * F12 + W * F122;
            const double J22 = Pc22 * F + 2 * Pc2 * F2 + Pc * F22 + W22 * F2 + 2 * W2 * F22 + W * F222;

            const double dtJ = Pc * G + W * G2;
            const double dtA = W * G1 - Q * G;

            f.A[i] = A;
            f.J[i] = J;
            f.W[i] = W;
            f.A1[i] = A1;
            f.A2[i] = A2;
            f.J1[i] = J1;
            f.J2[i] = J2;
            f.A11[i] = A11;
            f.A12[i] = A12;
            f.A22[i] = A22;
            f.J11[i] = J11;
            f.J12[i] = J12;
            f.J22[i] = J22;
            f.ebar[i] = F;
            f.ebar1[i] = F1;
            f.ebar2[i] = F2;
            f.debar[i] = G;
            f.debar1[i] = G1;
            f.debar2[i] = G2;
            f.z0[i] = z;
            f.z0p[i] = zp;
            f.dtJ[i] = dtJ;
            f.dtA[i] = dtA;
            if (J <= 0.0) {
                c.degenerate = true;
            }
            c.min_J = std::min(c.min_J, J);
            const double K = 1.0 / J;
            f.K[i] = K;
            f.dtK[i] = -K * K * dtJ;
            f.dtKA[i] = f.dtK[i] * A + K * dtA;
        }
    };

    fill(c.bulk, pts.bulk.begin(), pts.bulk.end());
    fill(c.surf, pts.surf.begin(), pts.surf.end());
    fill(c.wall, pts.wall.begin(), pts.wall.end());

    const int ns = int(pts.surf.size());
    c.eta_s = Vec(ns);
    c.etap_s = Vec(ns);
    c.deta_s = Vec(ns);
    c.detap_s = Vec(ns);
    c.N1_s = Vec(ns);
    c.N01_s = Vec(ns);
    for (int i = 0; i < ns; ++i) {
        const double x1 = pts.surf[i].x1;
        c.eta_s[i] = eta.value(x1);
        c.etap_s[i] = eta.deriv(x1);
        c.deta_s[i] = deta.value(x1);
        c.detap_s[i] = deta.deriv(x1);
        c.N01_s[i] = -zeta0.slope(x1);
        c.N1_s[i] = c.N01_s[i] - c.etap_s[i];
    }
    const double ell = zeta0.ell;
    c.eta_c[0] = eta.value(-ell);
    c.eta_c[1] = eta.value(ell);
    c.deta_c[0] = deta.value(-ell);
    c.deta_c[1] = deta.value(ell);

    if (c.degenerate && throw_on_degenerate) throw DegenerateMap(c.min_J);
    return c;
}

double pull_back_divergence(const std::function<Vec2(double, double)>& u,
                            const std::function<Mat2(double, double)>& grad_u,
                            const GeometryCache& cache) {
    const PointSet& pts = *cache.points;
    double worst = 0.0;
    for (int i = 0; i < int(pts.bulk.size()); ++i) {
        const double x1 = pts.bulk[i].x1, x2 = pts.bulk[i].x2;
        const Vec2 uv = u(x1, x2);
        const Mat2 gu = grad_u(x1, x2);  // gu(r, c) = d u_r / d x_c
        const Mat2 M = cache.bulk.Mmat(i);
        const Mat2 dM1 = cache.bulk.dM(i, 0), dM2 = cache.bulk.dM(i, 1);
        // grad of v = M u: dv_r/dx_c = (d_c M) u + M du/dx_c
        Mat2 gv;
        gv.col(0) = dM1 * uv + M * gu.col(0);
        gv.col(1) = dM2 * uv + M * gu.col(1);
        const Mat2 Ac = cache.bulk.Acal(i);
        // div_A(v) = A_{ij} d_j v_i
        double divA = 0.0;
        for (int r = 0; r < 2; ++r)
            for (int cidx = 0; cidx < 2; ++cidx) divA += Ac(r, cidx) * gv(r, cidx);
        const double divu = gu(0, 0) + gu(1, 1);
        worst = std::max(worst, std::abs(divA - cache.bulk.K[i] * divu));
    }
    return worst;
}

RemainderEval boundary_remainders(const GeometryCache& cache, const ContactLaw& law, double sigma) {
    RemainderEval r;
    const int ns = cache.eta_s.size();
    r.f3 = Vec(ns);
    r.f3_dz = Vec(ns);
    for (int i = 0; i < ns; ++i) {
        const double y = -cache.N01_s[i];  // d1 zeta0
        const double zd = cache.etap_s[i];
        r.f3[i] = sigma * curvature_remainder(y, zd);
        r.f3_dz[i] = sigma * curvature_remainder_dz(y, zd);
    }
    r.f7[0] = law.kappa() * law.hatW(cache.deta_c[0]);
    r.f7[1] = law.kappa() * law.hatW(cache.deta_c[1]);
    return r;
}

}  // namespace mcl
