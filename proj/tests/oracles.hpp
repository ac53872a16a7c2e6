#pragma once

#include "signet/graph.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using signet::Matrix;
using signet::Vector;

inline signet::SignedGraph triangle(double w = -1.0) {
    return signet::build_graph(3, {{0, 1, w}, {0, 2, w}, {1, 2, w}});
}

/// Plain bisection; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-14) {
    double flo = f(lo);
    for (int it = 0; it < 400 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Root of tanh(a) = a / 2 on a > 0.
inline double triangle_alpha() {
    return bisect([](double a) { return std::tanh(a) - 0.5 * a; }, 1.0, 3.0);
}

/// (beta, gamma) of the all-negative triangle equilibrium (b, b, g) at gain pi.
inline std::pair<double, double> triangle_beta_gamma(double pi) {
    auto g = [pi](double b) { return std::tanh(b) + 2.0 * b / pi + std::tanh(-pi * std::tanh(b)); };
    const double b = bisect(g, 1e-3, 10.0);
    return {b, -pi * std::tanh(b)};
}

/// Frustration by enumerating all 2^n signatures on the literal
/// normalized-Laplacian formula, with the Laplacian built from scratch.
inline double brute_frustration(const signet::SignedGraph& g) {
    const int n = g.n();
    const Matrix& a = g.weights();
    Vector deg = Vector::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) deg(i) += std::abs(a(i, j));
    Matrix lap = Matrix::Identity(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) lap(i, j) -= a(i, j) / deg(i);
    double best = INFINITY;
    for (long mask = 0; mask < (1L << n); ++mask) {
        double e = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                const double si = (mask >> i) & 1 ? -1.0 : 1.0;
                const double sj = (mask >> j) & 1 ? -1.0 : 1.0;
                e += std::abs(lap(i, j)) + si * lap(i, j) * sj;
            }
        best = std::min(best, 0.5 * e);
    }
    return best;
}

/// Central-difference Jacobian.
inline Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x, double h = 1e-6) {
    const int n = static_cast<int>(x.size());
    Matrix j(n, n);
    for (int c = 0; c < n; ++c) {
        Vector xp = x, xm = x;
        xp(c) += h;
        xm(c) -= h;
        j.col(c) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return j;
}

/// Composite Simpson on [0, x].
inline double simpson(const std::function<double(double)>& f, double x, int panels = 2000) {
    const double h = x / panels;
    double s = f(0.0) + f(x);
    for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * f(k * h);
    return s * h / 3.0;
}

}  // namespace oracle
