#pragma once

#include <cmath>

#include "mcl/types.hpp"

namespace mcl::cheb {

// Chebyshev-Gauss-Lobatto points on [a, b], ascending (x[0] = a, x[n] = b).
template <typename Scalar = double>
VecX<Scalar> points(int n, Scalar a, Scalar b) {
    VecX<Scalar> x(n + 1);
    const Scalar pi = std::acos(Scalar(-1));
    for (int i = 0; i <= n; ++i)
        x[i] = a + (b - a) * (Scalar(1) - std::cos(pi * Scalar(i) / Scalar(n))) / Scalar(2);
    return x;
}

// First-derivative collocation matrix on the ascending Lobatto grid.
template <typename Scalar = double>
MatX<Scalar> diff_matrix(int n, Scalar a, Scalar b) {
    const VecX<Scalar> x = points<Scalar>(n, a, b);
    VecX<Scalar> c(n + 1);
    for (int i = 0; i <= n; ++i) c[i] = (i == 0 || i == n) ? Scalar(2) : Scalar(1);
    MatX<Scalar> D = MatX<Scalar>::Zero(n + 1, n + 1);
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            if (i == j) continue;
            Scalar sign = ((i + j) % 2 == 0) ? Scalar(1) : Scalar(-1);
            D(i, j) = c[i] / c[j] * sign / (x[i] - x[j]);
        }
        for (int j = 0; j <= n; ++j)
            if (j != i) D(i, i) -= D(i, j);
    }
    return D;
}

// Clenshaw-Curtis weights on the ascending Lobatto grid of [a, b].
template <typename Scalar = double>
VecX<Scalar> quad_weights(int n, Scalar a, Scalar b) {
    const Scalar pi = std::acos(Scalar(-1));
    VecX<Scalar> w(n + 1);
    for (int i = 0; i <= n; ++i) {
        Scalar theta = pi * Scalar(i) / Scalar(n);
        Scalar s = 0;
        for (int k = 1; k <= n / 2; ++k) {
            Scalar bk = (2 * k == n) ? Scalar(1) : Scalar(2);
            s += bk * std::cos(Scalar(2 * k) * theta) / Scalar(4 * k * k - 1);
        }
        Scalar ci = (i == 0 || i == n) ? Scalar(1) : Scalar(2);
        w[i] = ci / Scalar(n) * (Scalar(1) - s);
    }
    return w * (b - a) / Scalar(2);
}

// Barycentric interpolation from Lobatto nodal values; exact at the nodes.
template <typename Scalar = double>
Scalar interpolate(const VecX<Scalar>& x, const VecX<Scalar>& f, Scalar xq) {
    const int n = int(x.size()) - 1;
    Scalar num = 0, den = 0;
    for (int i = 0; i <= n; ++i) {
        if (xq == x[i]) return f[i];
        Scalar wi = (i == 0 || i == n) ? Scalar(0.5) : Scalar(1);
        if (i % 2 == 1) wi = -wi;
        Scalar t = wi / (xq - x[i]);
        num += t * f[i];
        den += t;
    }
    return num / den;
}

}  // namespace mcl::cheb
