#pragma once

#include <array>
#include <string>
#include <vector>

#include "mcl/equilibrium.hpp"
#include "mcl/geometry.hpp"
#include "mcl/types.hpp"

namespace mcl {

// Structured triangulation of the equilibrium domain: a rectangular vessel
// below the reference line plus the graded region under x2 = zeta0(x1).
// Straight P2 triangles; vertex nodes ride the grading curves, midside nodes
// sit on chords. Velocity: vector P2 (dof = 2*node + comp); pressure
// multiplier: P1 on the vertex subgrid.
class Mesh {
  public:
    int nx = 0, ny_top = 0, ny_bot = 0;
    double ell = 1.0, depth = 0.5;

    Mat nodes;               // n_p2 x 2
    Eigen::MatrixXi tris;    // n_tri x 6 (v0 v1 v2 m01 m12 m20)
    Eigen::MatrixXi trisP1;  // n_tri x 3 (vertex ids in P1 numbering)
    int n_p2 = 0, n_p1 = 0;

    std::vector<int> wall_u1_nodes;   // u1 = 0 there (side walls incl. corners)
    std::vector<int> bottom_u2_nodes; // u2 = 0 there
    int corner_node[2] = {-1, -1};    // P2 node ids of (-ell, zeta0(-ell)), (+ell, ...)

    struct Edge {
        int elem;
        std::array<int, 3> nodes;  // endpoint, midside, endpoint
    };
    std::vector<Edge> surf_edges;  // left to right along the top
    std::vector<Edge> wall_edges;  // side walls and bottom

    PointSet pset;  // bulk + surface + wall quadrature points

    // Per-quadrature-point shape tables, aligned with pset lists.
    struct ShapeTab {
        Eigen::MatrixXi dofs;  // npts x 6 (P2 node ids)
        Mat N;                 // npts x 6
        Mat Nx, Ny;            // npts x 6
        Eigen::MatrixXi dofsP1;
        Mat NP1;               // npts x 3
        Mat NP1x, NP1y;
    };
    ShapeTab shp_bulk, shp_surf, shp_wall;

    // constant per element: second derivatives of the 6 P2 shapes
    Mat hess_xx, hess_xy, hess_yy;  // n_tri x 6

    int dof(int node, int comp) const { return 2 * node + comp; }
    int n_dofs() const { return 2 * n_p2; }

    // free-dof numbering after eliminating the wall constraints
    std::vector<int> free_index;  // n_dofs -> index or -1
    std::vector<int> free_dofs;   // inverse list
    int n_free = 0;

    double mesh_tolerance = 0.0;  // max distance of boundary midside nodes to the curve

    // P2 evaluation of a full-dof coefficient vector at an arbitrary point of
    // a given element (barycentric extension off the element is permitted).
    Vec2 eval_vec(const Vec& coeffs, int elem, double x, double y) const;
    Mat2 eval_grad(const Vec& coeffs, int elem, double x, double y) const;
};

Mesh build_mesh(const EquilibriumSurface& zeta0, double depth, int nx, int ny_top, int ny_bot);

std::string export_mesh(const Mesh& m);
// Reads node/cell lists written by export_mesh; shape tables are rebuilt.
Mesh import_mesh(const std::string& text, const EquilibriumSurface& zeta0);

}  // namespace mcl
