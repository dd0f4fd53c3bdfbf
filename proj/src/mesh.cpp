#include "mcl/mesh.hpp"

#include <cmath>
#include <sstream>

namespace mcl {

namespace {

// degree-5 triangle rule (7 points), barycentric coordinates and weights
struct TriRule {
    double l[7][3];
    double w[7];
};
TriRule tri_rule() {
    const double s15 = std::sqrt(15.0);
    const double g1 = (6.0 - s15) / 21.0, g2 = (6.0 + s15) / 21.0;
    const double w1 = (155.0 - s15) / 1200.0, w2 = (155.0 + s15) / 1200.0;
    TriRule r{};
    double pts[7][3] = {{1.0 / 3, 1.0 / 3, 1.0 / 3},
                        {1 - 2 * g1, g1, g1},
                        {g1, 1 - 2 * g1, g1},
                        {g1, g1, 1 - 2 * g1},
                        {1 - 2 * g2, g2, g2},
                        {g2, 1 - 2 * g2, g2},
                        {g2, g2, 1 - 2 * g2}};
    double ws[7] = {9.0 / 40, w1, w1, w1, w2, w2, w2};
    for (int q = 0; q < 7; ++q) {
        for (int k = 0; k < 3; ++k) r.l[q][k] = pts[q][k];
        r.w[q] = ws[q];
    }
    return r;
}

constexpr int kEdgeGauss = 5;
const double kGx[kEdgeGauss] = {0.5 - 0.45308992296933193 /*0.5*0.90617984593866396*/,
                                0.5 - 0.26923465505284155, 0.5, 0.5 + 0.26923465505284155,
                                0.5 + 0.45308992296933193};
const double kGw[kEdgeGauss] = {0.5 * 0.23692688505618909, 0.5 * 0.47862867049936647,
                                0.5 * 0.56888888888888889, 0.5 * 0.47862867049936647,
                                0.5 * 0.23692688505618909};

// P2 shapes from barycentric coordinates; node order v0 v1 v2 m01 m12 m20
void p2_shapes(const double l[3], const Vec2 gl[3], double N[6], Vec2 gN[6]) {
    for (int k = 0; k < 3; ++k) {
        N[k] = l[k] * (2 * l[k] - 1);
        gN[k] = (4 * l[k] - 1) * gl[k];
    }
    int pair[3][2] = {{0, 1}, {1, 2}, {2, 0}};
    for (int e = 0; e < 3; ++e) {
        int a = pair[e][0], b = pair[e][1];
        N[3 + e] = 4 * l[a] * l[b];
        gN[3 + e] = 4 * (l[a] * gl[b] + l[b] * gl[a]);
    }
}

}  // namespace

Vec2 Mesh::eval_vec(const Vec& coeffs, int elem, double x, double y) const {
    // barycentric coordinates w.r.t. the straight triangle
    const int* t = tris.row(elem).data();
    Vec2 p0 = nodes.row(tris(elem, 0)), p1 = nodes.row(tris(elem, 1)), p2 = nodes.row(tris(elem, 2));
    Mat2 Am;
    Am << p1.x() - p0.x(), p2.x() - p0.x(), p1.y() - p0.y(), p2.y() - p0.y();
    Vec2 rhs(x - p0.x(), y - p0.y());
    Vec2 lc = Am.inverse() * rhs;
    double l[3] = {1.0 - lc[0] - lc[1], lc[0], lc[1]};
    Mat2 AinvT = Am.inverse().transpose();
    Vec2 gl[3] = {AinvT * Vec2(-1, -1), AinvT * Vec2(1, 0), AinvT * Vec2(0, 1)};
    double N[6];
    Vec2 gN[6];
    p2_shapes(l, gl, N, gN);
    Vec2 out(0, 0);
    for (int k = 0; k < 6; ++k) {
        out[0] += N[k] * coeffs[2 * t[k]];
        out[1] += N[k] * coeffs[2 * t[k] + 1];
    }
    return out;
}

Mat2 Mesh::eval_grad(const Vec& coeffs, int elem, double x, double y) const {
    const int* t = tris.row(elem).data();
    Vec2 p0 = nodes.row(tris(elem, 0)), p1 = nodes.row(tris(elem, 1)), p2 = nodes.row(tris(elem, 2));
    Mat2 Am;
    Am << p1.x() - p0.x(), p2.x() - p0.x(), p1.y() - p0.y(), p2.y() - p0.y();
    Vec2 rhs(x - p0.x(), y - p0.y());
    Vec2 lc = Am.inverse() * rhs;
    double l[3] = {1.0 - lc[0] - lc[1], lc[0], lc[1]};
    Mat2 AinvT = Am.inverse().transpose();
    Vec2 gl[3] = {AinvT * Vec2(-1, -1), AinvT * Vec2(1, 0), AinvT * Vec2(0, 1)};
    double N[6];
    Vec2 gN[6];
    p2_shapes(l, gl, N, gN);
    Mat2 g = Mat2::Zero();  // g(r, c) = d u_r / d x_c
    for (int k = 0; k < 6; ++k) {
        g(0, 0) += gN[k][0] * coeffs[2 * t[k]];
        g(0, 1) += gN[k][1] * coeffs[2 * t[k]];
        g(1, 0) += gN[k][0] * coeffs[2 * t[k] + 1];
        g(1, 1) += gN[k][1] * coeffs[2 * t[k] + 1];
    }
    return g;
}

namespace {

void build_shape_tables(Mesh& m, const EquilibriumSurface& zeta0) {
    const TriRule rule = tri_rule();
    const int ntri = int(m.tris.rows());

    // bulk quadrature points; rule weights sum to 1 and scale the area
    m.pset.bulk.clear();
    for (int e = 0; e < ntri; ++e) {
        Vec2 p0 = m.nodes.row(m.tris(e, 0)), p1 = m.nodes.row(m.tris(e, 1)),
             p2 = m.nodes.row(m.tris(e, 2));
        double area = 0.5 * std::abs((p1.x() - p0.x()) * (p2.y() - p0.y()) -
                                     (p2.x() - p0.x()) * (p1.y() - p0.y()));
        for (int q = 0; q < 7; ++q) {
            PointSet::BulkPt bp;
            bp.x1 = rule.l[q][0] * p0.x() + rule.l[q][1] * p1.x() + rule.l[q][2] * p2.x();
            bp.x2 = rule.l[q][0] * p0.y() + rule.l[q][1] * p1.y() + rule.l[q][2] * p2.y();
            bp.w = rule.w[q] * area;
            bp.elem = e;
            m.pset.bulk.push_back(bp);
        }
    }

    // surface quadrature points ride the true curve
    m.pset.surf.clear();
    for (int s = 0; s < int(m.surf_edges.size()); ++s) {
        const auto& ed = m.surf_edges[s];
        double xl = m.nodes(ed.nodes[0], 0), xr = m.nodes(ed.nodes[2], 0);
        for (int q = 0; q < kEdgeGauss; ++q) {
            PointSet::SurfPt sp;
            sp.x1 = xl + (xr - xl) * kGx[q];
            sp.x2 = zeta0.value(sp.x1);
            sp.w = (xr - xl) * kGw[q];
            sp.elem = ed.elem;
            sp.edge = s;
            m.pset.surf.push_back(sp);
        }
    }

    // wall quadrature points
    m.pset.wall.clear();
    for (const auto& ed : m.wall_edges) {
        Vec2 a = m.nodes.row(ed.nodes[0]), b = m.nodes.row(ed.nodes[2]);
        double len = (b - a).norm();
        Vec2 tau = (b - a) / len;
        Vec2 nu(tau.y(), -tau.x());
        // orient nu outward
        Vec2 mid = 0.5 * (a + b);
        if (std::abs(mid.x() - m.ell) < 1e-12) nu = Vec2(1, 0), tau = Vec2(0, 1);
        else if (std::abs(mid.x() + m.ell) < 1e-12) nu = Vec2(-1, 0), tau = Vec2(0, 1);
        else nu = Vec2(0, -1), tau = Vec2(1, 0);
        for (int q = 0; q < kEdgeGauss; ++q) {
            PointSet::WallPt wp;
            wp.x1 = a.x() + (b.x() - a.x()) * kGx[q];
            wp.x2 = a.y() + (b.y() - a.y()) * kGx[q];
            wp.w = len * kGw[q];
            wp.elem = ed.elem;
            wp.nu = nu;
            wp.tau = tau;
            m.pset.wall.push_back(wp);
        }
    }

    // shape tables
    auto fill = [&](Mesh::ShapeTab& tab, auto& pts) {
        const int n = int(pts.size());
        tab.dofs.resize(n, 6);
        tab.N.resize(n, 6);
        tab.Nx.resize(n, 6);
        tab.Ny.resize(n, 6);
        tab.dofsP1.resize(n, 3);
        tab.NP1.resize(n, 3);
        tab.NP1x.resize(n, 3);
        tab.NP1y.resize(n, 3);
        for (int i = 0; i < n; ++i) {
            int e = pts[i].elem;
            Vec2 p0 = m.nodes.row(m.tris(e, 0)), p1 = m.nodes.row(m.tris(e, 1)),
                 p2 = m.nodes.row(m.tris(e, 2));
            Mat2 Am;
            Am << p1.x() - p0.x(), p2.x() - p0.x(), p1.y() - p0.y(), p2.y() - p0.y();
            Mat2 Ai = Am.inverse();
            Vec2 lc = Ai * Vec2(pts[i].x1 - p0.x(), pts[i].x2 - p0.y());
            double l[3] = {1.0 - lc[0] - lc[1], lc[0], lc[1]};
            Mat2 AinvT = Ai.transpose();
            Vec2 gl[3] = {AinvT * Vec2(-1, -1), AinvT * Vec2(1, 0), AinvT * Vec2(0, 1)};
            double N[6];
            Vec2 gN[6];
            p2_shapes(l, gl, N, gN);
            for (int k = 0; k < 6; ++k) {
                tab.dofs(i, k) = m.tris(e, k);
                tab.N(i, k) = N[k];
                tab.Nx(i, k) = gN[k][0];
                tab.Ny(i, k) = gN[k][1];
            }
            for (int k = 0; k < 3; ++k) {
                tab.dofsP1(i, k) = m.trisP1(e, k);
                tab.NP1(i, k) = l[k];
                tab.NP1x(i, k) = gl[k][0];
                tab.NP1y(i, k) = gl[k][1];
            }
        }
    };
    fill(m.shp_bulk, m.pset.bulk);
    fill(m.shp_surf, m.pset.surf);
    fill(m.shp_wall, m.pset.wall);

    // element-constant second derivatives of P2 shapes
    m.hess_xx.resize(ntri, 6);
    m.hess_xy.resize(ntri, 6);
    m.hess_yy.resize(ntri, 6);
    for (int e = 0; e < ntri; ++e) {
        Vec2 p0 = m.nodes.row(m.tris(e, 0)), p1 = m.nodes.row(m.tris(e, 1)),
             p2 = m.nodes.row(m.tris(e, 2));
        Mat2 Am;
        Am << p1.x() - p0.x(), p2.x() - p0.x(), p1.y() - p0.y(), p2.y() - p0.y();
        Mat2 AinvT = Am.inverse().transpose();
        Vec2 gl[3] = {AinvT * Vec2(-1, -1), AinvT * Vec2(1, 0), AinvT * Vec2(0, 1)};
        for (int k = 0; k < 3; ++k) {
            m.hess_xx(e, k) = 4 * gl[k][0] * gl[k][0];
            m.hess_xy(e, k) = 4 * gl[k][0] * gl[k][1];
            m.hess_yy(e, k) = 4 * gl[k][1] * gl[k][1];
        }
        int pair[3][2] = {{0, 1}, {1, 2}, {2, 0}};
        for (int ecur = 0; ecur < 3; ++ecur) {
            int a = pair[ecur][0], b = pair[ecur][1];
            m.hess_xx(e, 3 + ecur) = 4 * 2 * gl[a][0] * gl[b][0];
            m.hess_xy(e, 3 + ecur) = 4 * (gl[a][0] * gl[b][1] + gl[a][1] * gl[b][0]);
            m.hess_yy(e, 3 + ecur) = 4 * 2 * gl[a][1] * gl[b][1];
        }
    }

    // free-dof map
    std::vector<bool> constrained(m.n_dofs(), false);
    for (int nd : m.wall_u1_nodes) constrained[m.dof(nd, 0)] = true;
    for (int nd : m.bottom_u2_nodes) constrained[m.dof(nd, 1)] = true;
    m.free_index.assign(m.n_dofs(), -1);
    m.free_dofs.clear();
    for (int d = 0; d < m.n_dofs(); ++d) {
        if (!constrained[d]) {
            m.free_index[d] = int(m.free_dofs.size());
            m.free_dofs.push_back(d);
        }
    }
    m.n_free = int(m.free_dofs.size());

    // distance of boundary midside nodes to the curve
    m.mesh_tolerance = 0.0;
    for (const auto& ed : m.surf_edges) {
        double x = m.nodes(ed.nodes[1], 0), y = m.nodes(ed.nodes[1], 1);
        m.mesh_tolerance = std::max(m.mesh_tolerance, std::abs(y - zeta0.value(x)));
    }
}

void build_topology(Mesh& m) {
    const int nx = m.nx, nyt = m.ny_top, nyb = m.ny_bot;
    const int ncols = 2 * nx + 1, nrows = 2 * (nyt + nyb) + 1;
    const int ny = nyt + nyb;
    m.n_p2 = ncols * nrows;
    m.n_p1 = (nx + 1) * (ny + 1);
    auto nid = [&](int i, int j) { return j * ncols + i; };
    auto pid = [&](int I, int J) { return J * (nx + 1) + I; };

    m.tris.resize(2 * nx * ny, 6);
    m.trisP1.resize(2 * nx * ny, 3);
    for (int J = 0; J < ny; ++J) {
        for (int I = 0; I < nx; ++I) {
            int i = 2 * I, j = 2 * J;
            int e = 2 * (J * nx + I);
            // lower: v (i,j) (i+2,j) (i+2,j+2)
            m.tris.row(e) << nid(i, j), nid(i + 2, j), nid(i + 2, j + 2), nid(i + 1, j),
                nid(i + 2, j + 1), nid(i + 1, j + 1);
            m.trisP1.row(e) << pid(I, J), pid(I + 1, J), pid(I + 1, J + 1);
            // upper: v (i,j) (i+2,j+2) (i,j+2)
            m.tris.row(e + 1) << nid(i, j), nid(i + 2, j + 2), nid(i, j + 2), nid(i + 1, j + 1),
                nid(i + 1, j + 2), nid(i, j + 1);
            m.trisP1.row(e + 1) << pid(I, J), pid(I + 1, J + 1), pid(I, J + 1);
        }
    }

    // boundary node lists
    m.wall_u1_nodes.clear();
    m.bottom_u2_nodes.clear();
    for (int j = 0; j < nrows; ++j) {
        m.wall_u1_nodes.push_back(nid(0, j));
        m.wall_u1_nodes.push_back(nid(ncols - 1, j));
    }
    for (int i = 0; i < ncols; ++i) m.bottom_u2_nodes.push_back(nid(i, 0));
    m.corner_node[0] = nid(0, nrows - 1);
    m.corner_node[1] = nid(ncols - 1, nrows - 1);

    // surface edges: top of upper triangles in the top row of quads
    m.surf_edges.clear();
    const int jtop = nrows - 1;
    for (int I = 0; I < nx; ++I) {
        Mesh::Edge ed;
        ed.elem = 2 * ((ny - 1) * nx + I) + 1;
        ed.nodes = {nid(2 * I, jtop), nid(2 * I + 1, jtop), nid(2 * I + 2, jtop)};
        m.surf_edges.push_back(ed);
    }
    // wall edges: left, right walls plus the bottom
    m.wall_edges.clear();
    for (int J = 0; J < ny; ++J) {
        Mesh::Edge l;
        l.elem = 2 * (J * nx + 0) + 1;
        l.nodes = {nid(0, 2 * J), nid(0, 2 * J + 1), nid(0, 2 * J + 2)};
        m.wall_edges.push_back(l);
        Mesh::Edge r;
        r.elem = 2 * (J * nx + (nx - 1));
        r.nodes = {nid(ncols - 1, 2 * J), nid(ncols - 1, 2 * J + 1), nid(ncols - 1, 2 * J + 2)};
        m.wall_edges.push_back(r);
    }
    for (int I = 0; I < nx; ++I) {
        Mesh::Edge b;
        b.elem = 2 * (0 * nx + I);
        b.nodes = {nid(2 * I, 0), nid(2 * I + 1, 0), nid(2 * I + 2, 0)};
        m.wall_edges.push_back(b);
    }
}

}  // namespace

Mesh build_mesh(const EquilibriumSurface& zeta0, double depth, int nx, int ny_top, int ny_bot) {
    Mesh m;
    m.nx = nx;
    m.ny_top = ny_top;
    m.ny_bot = ny_bot;
    m.ell = zeta0.ell;
    m.depth = depth;
    build_topology(m);

    const int ncols = 2 * nx + 1, nrows = 2 * (ny_top + ny_bot) + 1;
    m.nodes.resize(m.n_p2, 2);
    auto nid = [&](int i, int j) { return j * ncols + i; };
    // vertex nodes on the grading curves
    for (int j = 0; j <= ny_top + ny_bot; ++j) {
        for (int i = 0; i <= nx; ++i) {
            double x1 = -m.ell + 2.0 * m.ell * i / nx;
            double x2;
            if (j <= ny_bot) x2 = -depth + depth * double(j) / ny_bot;
            else x2 = zeta0.value(x1) * double(j - ny_bot) / ny_top;
            m.nodes(nid(2 * i, 2 * j), 0) = x1;
            m.nodes(nid(2 * i, 2 * j), 1) = x2;
        }
    }
    // midside nodes at chord midpoints
    for (int j = 0; j < nrows; ++j) {
        for (int i = 0; i < ncols; ++i) {
            if (i % 2 == 0 && j % 2 == 0) continue;
            int ia, ja, ib, jb;
            if (i % 2 == 1 && j % 2 == 0) ia = i - 1, ja = j, ib = i + 1, jb = j;
            else if (i % 2 == 0 && j % 2 == 1) ia = i, ja = j - 1, ib = i, jb = j + 1;
            else ia = i - 1, ja = j - 1, ib = i + 1, jb = j + 1;  // diagonal
            m.nodes.row(nid(i, j)) =
                0.5 * (m.nodes.row(nid(ia, ja)) + m.nodes.row(nid(ib, jb)));
        }
    }

    build_shape_tables(m, zeta0);
    return m;
}

std::string export_mesh(const Mesh& m) {
    std::ostringstream os;
    os.precision(17);
    os << "mclmesh 1\n";
    os << m.nx << " " << m.ny_top << " " << m.ny_bot << " " << m.ell << " " << m.depth << "\n";
    os << m.n_p2 << "\n";
    for (int i = 0; i < m.n_p2; ++i) os << m.nodes(i, 0) << " " << m.nodes(i, 1) << "\n";
    os << m.tris.rows() << "\n";
    for (int e = 0; e < m.tris.rows(); ++e) {
        for (int k = 0; k < 6; ++k) os << m.tris(e, k) << (k < 5 ? " " : "\n");
    }
    return os.str();
}

Mesh import_mesh(const std::string& text, const EquilibriumSurface& zeta0) {
    std::istringstream is(text);
    std::string magic;
    int version;
    is >> magic >> version;
    if (magic != "mclmesh" || version != 1) throw std::runtime_error("bad mesh file header");
    Mesh m;
    is >> m.nx >> m.ny_top >> m.ny_bot >> m.ell >> m.depth;
    build_topology(m);
    int nn;
    is >> nn;
    if (nn != m.n_p2) throw std::runtime_error("mesh file node count mismatch");
    m.nodes.resize(nn, 2);
    for (int i = 0; i < nn; ++i) is >> m.nodes(i, 0) >> m.nodes(i, 1);
    int ne;
    is >> ne;
    if (ne != m.tris.rows()) throw std::runtime_error("mesh file cell count mismatch");
    for (int e = 0; e < ne; ++e) {
        for (int k = 0; k < 6; ++k) {
            int v;
            is >> v;
            if (v != m.tris(e, k)) throw std::runtime_error("mesh file connectivity mismatch");
        }
    }
    build_shape_tables(m, zeta0);
    return m;
}

}  // namespace mcl
