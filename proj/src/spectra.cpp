#include "signet/spectra.hpp"

#include "signet/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace signet {

namespace {

constexpr const char* kEighOp = "spectra.eigh";

void check_symmetric(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::NotSymmetric, kEighOp, "matrix is not square");
    const double scale = std::max(m.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > tol * scale) {
        std::ostringstream msg;
        msg << "max |m - m^T| = " << asym << " exceeds " << tol << " * " << scale;
        throw Error(ErrorCode::NotSymmetric, kEighOp, msg.str());
    }
}

inline void rotate(Matrix& a, double s, double tau, int i, int j, int k, int l) {
    const double g = a(i, j);
    const double h = a(k, l);
    a(i, j) = g - s * (h + g * tau);
    a(k, l) = h + s * (g - h * tau);
}

// Cyclic Jacobi with the usual threshold strategy; works on the upper
// triangle of a.
void jacobi(Matrix a, Vector& d, Matrix& v, const EighOptions& opts) {
    const int n = static_cast<int>(a.rows());
    v.setIdentity(n, n);
    d = a.diagonal();
    Vector b = d;
    Vector z = Vector::Zero(n);
    for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
        double sm = 0.0;
        for (int ip = 0; ip < n - 1; ++ip)
            for (int iq = ip + 1; iq < n; ++iq) sm += std::abs(a(ip, iq));
        if (sm == 0.0) return;
        const double tresh = sweep < 4 ? 0.2 * sm / (n * n) : 0.0;
        for (int ip = 0; ip < n - 1; ++ip) {
            for (int iq = ip + 1; iq < n; ++iq) {
                const double g = 100.0 * std::abs(a(ip, iq));
                if (sweep > 4 && std::abs(d(ip)) + g == std::abs(d(ip)) && std::abs(d(iq)) + g == std::abs(d(iq))) {
                    a(ip, iq) = 0.0;
                } else if (std::abs(a(ip, iq)) > tresh) {
                    double h = d(iq) - d(ip);
                    double t;
                    if (std::abs(h) + g == std::abs(h)) {
                        t = a(ip, iq) / h;
                    } else {
                        const double theta = 0.5 * h / a(ip, iq);
                        t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                        if (theta < 0.0) t = -t;
                    }
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;
                    const double tau = s / (1.0 + c);
                    h = t * a(ip, iq);
                    z(ip) -= h;
                    z(iq) += h;
                    d(ip) -= h;
                    d(iq) += h;
                    a(ip, iq) = 0.0;
                    for (int j = 0; j < ip; ++j) rotate(a, s, tau, j, ip, j, iq);
                    for (int j = ip + 1; j < iq; ++j) rotate(a, s, tau, ip, j, j, iq);
                    for (int j = iq + 1; j < n; ++j) rotate(a, s, tau, ip, j, iq, j);
                    if (opts.want_vectors)
                        for (int j = 0; j < n; ++j) rotate(v, s, tau, j, ip, j, iq);
                }
            }
        }
        b += z;
        d = b;
        z.setZero();
    }
    throw Error(ErrorCode::NoConvergence, kEighOp,
                "Jacobi did not converge in " + std::to_string(opts.max_sweeps) + " sweeps");
}

// Householder reduction to tridiagonal form. On exit z holds the
// orthogonal transform (when vectors are wanted), d the diagonal and e the
// subdiagonal in e(1..n-1).
void tridiagonalize(Matrix& z, Vector& d, Vector& e, bool vectors) {
    const int n = static_cast<int>(z.rows());
    d.resize(n);
    e.resize(n);
    for (int i = n - 1; i > 0; --i) {
        const int l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (int k = 0; k < i; ++k) scale += std::abs(z(i, k));
            if (scale == 0.0) {
                e(i) = z(i, l);
            } else {
                for (int k = 0; k < i; ++k) {
                    z(i, k) /= scale;
                    h += z(i, k) * z(i, k);
                }
                double f = z(i, l);
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e(i) = scale * g;
                h -= f * g;
                z(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j < i; ++j) {
                    if (vectors) z(j, i) = z(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
                    for (int k = j + 1; k < i; ++k) g += z(k, j) * z(i, k);
                    e(j) = g / h;
                    f += e(j) * z(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j < i; ++j) {
                    f = z(i, j);
                    g = e(j) - hh * f;
                    e(j) = g;
                    for (int k = 0; k <= j; ++k) z(j, k) -= f * e(k) + g * z(i, k);
                }
            }
        } else {
            e(i) = z(i, l);
        }
        d(i) = h;
    }
    if (vectors) d(0) = 0.0;
    e(0) = 0.0;
    for (int i = 0; i < n; ++i) {
        if (vectors) {
            if (d(i) != 0.0) {
                for (int j = 0; j < i; ++j) {
                    double g = 0.0;
                    for (int k = 0; k < i; ++k) g += z(i, k) * z(k, j);
                    for (int k = 0; k < i; ++k) z(k, j) -= g * z(k, i);
                }
            }
            d(i) = z(i, i);
            z(i, i) = 1.0;
            for (int j = 0; j < i; ++j) z(j, i) = z(i, j) = 0.0;
        } else {
            d(i) = z(i, i);
        }
    }
}

// Implicit-shift QL on the tridiagonal (d, e), accumulating into z.
void tridiagonal_ql(Vector& d, Vector& e, Matrix& z, bool vectors, int max_iter) {
    const int n = static_cast<int>(d.size());
    const double eps = std::numeric_limits<double>::epsilon();
    for (int i = 1; i < n; ++i) e(i - 1) = e(i);
    e(n - 1) = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d(m)) + std::abs(d(m + 1));
                if (std::abs(e(m)) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == max_iter)
                    throw Error(ErrorCode::NoConvergence, kEighOp,
                                "QL iteration did not converge for eigenvalue " + std::to_string(l));
                double g = (d(l + 1) - d(l)) / (2.0 * e(l));
                double r = std::hypot(g, 1.0);
                g = d(m) - d(l) + e(l) / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e(i);
                    const double b = c * e(i);
                    r = std::hypot(f, g);
                    e(i + 1) = r;
                    if (r == 0.0) {
                        d(i + 1) -= p;
                        e(m) = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d(i + 1) - p;
                    r = (d(i) - g) * s + 2.0 * c * b;
                    p = s * r;
                    d(i + 1) = g + p;
                    g = c * r - b;
                    if (vectors) {
                        for (int k = 0; k < n; ++k) {
                            f = z(k, i + 1);
                            z(k, i + 1) = s * z(k, i) + c * f;
                            z(k, i) = c * z(k, i) - s * f;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d(l) -= p;
                e(l) = g;
                e(m) = 0.0;
            }
        } while (m != l);
    }
}

EigenDecomposition sorted(Vector d, Matrix v, bool vectors) {
    const int n = static_cast<int>(d.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d(a) < d(b); });
    EigenDecomposition out;
    out.values.resize(n);
    if (vectors) out.vectors.resize(n, n);
    for (int k = 0; k < n; ++k) {
        out.values(k) = d(order[k]);
        if (vectors) out.vectors.col(k) = v.col(order[k]);
    }
    return out;
}

}  // namespace

EigenDecomposition eigh(const Matrix& m, const EighOptions& opts) {
    check_symmetric(m, opts.symmetry_tol);
    const int n = static_cast<int>(m.rows());
    if (n == 0) return {};
    Vector d;
    Matrix v;
    if (n <= opts.jacobi_cutoff) {
        jacobi(m, d, v, opts);
    } else {
        v = m;
        Vector e;
        tridiagonalize(v, d, e, opts.want_vectors);
        tridiagonal_ql(d, e, v, opts.want_vectors, std::max(30, opts.max_sweeps));
    }
    return sorted(std::move(d), std::move(v), opts.want_vectors);
}

Vector eigvalsh(const Matrix& m, const EighOptions& opts) {
    EighOptions o = opts;
    o.want_vectors = false;
    return eigh(m, o).values;
}

Vector spectrum_of_normalized_laplacian(const SignedGraph& g) {
    const Vector inv_sqrt = g.degrees().cwiseSqrt().cwiseInverse();
    Matrix hs = inv_sqrt.asDiagonal() * g.weights() * inv_sqrt.asDiagonal();
    hs = (0.5 * (hs + hs.transpose())).eval();
    const Vector mu = eigvalsh(hs);
    // eig(L) = 1 - eig(H_s); reverse to keep nondecreasing order.
    return (1.0 - mu.reverse().array()).matrix();
}

double pitchfork_threshold(double lambda) {
    if (lambda >= 1.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (1.0 - lambda);
}

SpectralSummary thresholds_from_spectrum(const Vector& eigs) {
    if (eigs.size() < 2) throw Error(ErrorCode::BadArgument, "spectra.thresholds", "need at least two eigenvalues");
    SpectralSummary s;
    s.eigs = eigs;
    s.lambda1 = eigs(0);
    s.lambda2 = eigs(1);
    s.lambda_n = eigs(eigs.size() - 1);
    s.pi1 = pitchfork_threshold(s.lambda1);
    s.pi2_finite = s.lambda2 < 1.0;
    s.pi2 = pitchfork_threshold(s.lambda2);
    return s;
}

SpectralSummary thresholds(const SignedGraph& g, std::optional<double> step_size) {
    SpectralSummary s = thresholds_from_spectrum(spectrum_of_normalized_laplacian(g));
    s.max_degree = g.max_degree();
    if (step_size) {
        s.step_size = step_size;
        s.pi1d = solve_pi1d(g, *step_size);
    }
    return s;
}

double max_eig_Lpi(const SignedGraph& g, double pi) {
    const Matrix lpi = Matrix(g.degrees().asDiagonal()) - pi * g.weights();
    const Vector ev = eigvalsh(lpi);
    return ev(ev.size() - 1);
}

double solve_pi1d(const SignedGraph& g, double step_size, const Pi1dOptions& opts) {
    constexpr const char* op = "spectra.solve_pi1d";
    if (!(step_size > 0.0)) throw Error(ErrorCode::BadArgument, op, "step size must be positive");
    if (!(step_size * g.max_degree() < 2.0)) {
        std::ostringstream msg;
        msg << "step_size * max degree = " << step_size * g.max_degree() << " must be < 2";
        throw Error(ErrorCode::StepTooLarge, op, msg.str());
    }
    const double target = 2.0 / step_size;
    double lo = 0.0;
    double hi = 1.0;
    int doublings = 0;
    while (max_eig_Lpi(g, hi) <= target) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > opts.max_doublings)
            throw Error(ErrorCode::BracketFailure, op, "could not bracket lambda_n(L_pi) = 2/step");
    }
    while (hi - lo > opts.tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (max_eig_Lpi(g, mid) <= target)
            lo = mid;
        else
            hi = mid;
    }
    const double root = 0.5 * (lo + hi);
    const double residual = std::abs(max_eig_Lpi(g, root) - target);
    // lambda_n(L_pi) is Lipschitz in pi with constant ||A||_2 <= max degree.
    const double allowed = 4.0 * g.max_degree() * opts.tol + 1e-9 * target;
    if (residual > allowed) {
        std::ostringstream msg;
        msg << "residual " << residual << " exceeds " << allowed;
        throw Error(ErrorCode::BracketFailure, op, msg.str());
    }
    return root;
}

}  // namespace signet
