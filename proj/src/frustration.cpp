#include "signet/frustration.hpp"

#include "signet/error.hpp"
#include "signet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace signet {

namespace {

// (H + H^T) / 2, zero diagonal.
Matrix symmetric_interaction_part(const SignedGraph& g) {
    const Matrix h = g.degrees().cwiseInverse().asDiagonal() * g.weights();
    return 0.5 * (h + h.transpose());
}

void check_signature(const SignedGraph& g, const Signature& s, const char* op) {
    if (static_cast<int>(s.size()) != g.n())
        throw Error(ErrorCode::BadSignatureLength, op,
                    "signature length " + std::to_string(s.size()) + " != n=" + std::to_string(g.n()));
    for (int v : s)
        if (v != 1 && v != -1) throw Error(ErrorCode::BadArgument, op, "signature entries must be +-1");
}

bool lex_less(const Signature& a, const Signature& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

void canonicalize(Signature& s) {
    if (!s.empty() && s[0] == -1)
        for (int& v : s) v = -v;
}

double quadratic_energy(const Matrix& b, const Signature& s) {
    const int n = static_cast<int>(s.size());
    double q = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += b(i, j) * s[j];
        q += s[i] * row;
    }
    return 0.5 * (n - q);
}

Signature sign_of(const Vector& v) {
    Signature s(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) s[i] = v(i) >= 0.0 ? 1 : -1;
    return s;
}

struct Descent {
    Signature s;
    double energy = 0.0;
    std::vector<double> trace;
};

Descent sign_iterate_and_descend(const Matrix& b, Signature s, int max_iterations) {
    const int n = static_cast<int>(s.size());
    Vector sv(n);
    auto load = [&](const Signature& src) {
        for (int i = 0; i < n; ++i) sv(i) = src[i];
    };

    // Synchronous iteration u <- sign(B u). It either reaches a fixed point or
    // settles into a 2-cycle; in the latter case keep the better of the pair.
    Signature prev;
    for (int it = 0; it < max_iterations; ++it) {
        load(s);
        Signature next = sign_of(b * sv);
        if (next == s) break;
        if (next == prev) {
            if (quadratic_energy(b, next) < quadratic_energy(b, s)) s = std::move(next);
            break;
        }
        prev = std::move(s);
        s = std::move(next);
    }

    // Greedy single flips: flipping k changes the energy by 2 s_k f_k with
    // f = B s, so only flips with s_k f_k < 0 lower it.
    load(s);
    Vector f = b * sv;
    Descent d;
    d.energy = quadratic_energy(b, s);
    d.trace.push_back(d.energy);
    for (;;) {
        int best = -1;
        double best_delta = 0.0;
        for (int k = 0; k < n; ++k) {
            const double delta = 2.0 * s[k] * f(k);
            if (delta < best_delta) {
                best_delta = delta;
                best = k;
            }
        }
        // Ignore decrements at rounding level so the trace stays strictly decreasing.
        if (best < 0 || best_delta > -1e-13) break;
        s[best] = -s[best];
        f += (2.0 * s[best]) * b.col(best);
        d.energy = quadratic_energy(b, s);
        if (!(d.energy < d.trace.back())) {
            // Drift in f can make the predicted gain spurious; undo and stop.
            s[best] = -s[best];
            d.energy = d.trace.back();
            break;
        }
        d.trace.push_back(d.energy);
    }
    d.s = std::move(s);
    return d;
}

}  // namespace

double energy(const SignedGraph& g, const Signature& s) {
    constexpr const char* op = "frustration.energy";
    check_signature(g, s, op);
    const int n = g.n();
    const Matrix& a = g.weights();
    const Vector& d = g.degrees();

    // Literal form on the normalized Laplacian: off-diagonal entries are -a_ij / delta_i.
    double literal = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double lij = -a(i, j) / d(i);
            literal += std::abs(lij) + s[i] * lij * s[j];
        }
    }
    literal *= 0.5;

    const double quadratic = quadratic_energy(symmetric_interaction_part(g), s);
    // Both sums accumulate O(n^2) terms; the tolerance scales with n.
    const double tol = 1e-12 * std::max(1, n);
    if (std::abs(literal - quadratic) > tol) {
        std::ostringstream msg;
        msg << "Laplacian form " << literal << " vs quadratic form " << quadratic;
        throw Error(ErrorCode::FormulaMismatch, op, msg.str());
    }
    return literal;
}

FrustrationResult frustration_exact(const SignedGraph& g, int cap) {
    constexpr const char* op = "frustration.frustration_exact";
    const int n = g.n();
    if (n > cap)
        throw Error(ErrorCode::TooLargeForExact, op,
                    "n=" + std::to_string(n) + " exceeds exhaustive cap " + std::to_string(cap));

    const Matrix bm = symmetric_interaction_part(g);
    // Row-major copy for the inner loop.
    std::vector<double> b(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b[static_cast<std::size_t>(i) * n + j] = bm(i, j);

    Signature s(n, 1);
    std::vector<double> f(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) f[i] += b[static_cast<std::size_t>(i) * n + j];
    double e = quadratic_energy(bm, s);

    Signature best = s;
    double best_e = e;
    const double tie_tol = 1e-9;

    // Gray code over s_1..s_{n-1}; step k flips the vertex at the lowest set bit of k.
    const std::uint64_t total = std::uint64_t{1} << (n - 1);
    for (std::uint64_t k = 1; k < total; ++k) {
        const int i = __builtin_ctzll(k) + 1;
        e += 2.0 * s[i] * f[i];
        s[i] = -s[i];
        const double step = 2.0 * s[i];
        const double* col = &b[static_cast<std::size_t>(i) * n];  // symmetric: row i == column i
        for (int j = 0; j < n; ++j) f[j] += step * col[j];
        if (e < best_e - tie_tol) {
            best = s;
            best_e = e;
        } else if (e <= best_e + tie_tol && lex_less(s, best)) {
            best = s;
            best_e = std::min(best_e, e);
        }
    }

    FrustrationResult r;
    r.signature = best;
    r.value = energy(g, best);
    r.exact = true;
    r.method = "exhaustive";
    r.restarts_used = 0;
    return r;
}

FrustrationResult frustration_heuristic(const SignedGraph& g, const HeuristicOptions& opts) {
    constexpr const char* op = "frustration.frustration_heuristic";
    if (opts.restarts < 1) throw Error(ErrorCode::BadArgument, op, "restarts must be >= 1");
    const int n = g.n();
    const Matrix b = symmetric_interaction_part(g);

    const Vector inv_sqrt = g.degrees().cwiseSqrt().cwiseInverse();
    Matrix hs = inv_sqrt.asDiagonal() * g.weights() * inv_sqrt.asDiagonal();
    hs = (0.5 * (hs + hs.transpose())).eval();
    const EigenDecomposition eig = eigh(hs);

    Descent best;
    bool have = false;
    for (int r = 0; r < opts.restarts; ++r) {
        Signature start;
        if (r == 0) {
            start = sign_of(eig.vectors.col(n - 1));
        } else {
            Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(r)));
            start.resize(n);
            for (int i = 0; i < n; ++i) start[i] = rng.sign();
        }
        Descent d = sign_iterate_and_descend(b, std::move(start), opts.max_sign_iterations);
        canonicalize(d.s);
        if (!have || d.energy < best.energy - 1e-12 ||
            (std::abs(d.energy - best.energy) <= 1e-12 && lex_less(d.s, best.s))) {
            best = std::move(d);
            have = true;
        }
    }

    FrustrationResult res;
    res.signature = best.s;
    res.value = energy(g, best.s);
    res.exact = false;
    res.method = "sign-iteration+greedy";
    res.restarts_used = opts.restarts;
    res.energy_trace = std::move(best.trace);
    return res;
}

FrustrationResult frustration_auto(const SignedGraph& g, const HeuristicOptions& opts, int cap) {
    if (g.n() <= cap) return frustration_exact(g, cap);
    return frustration_heuristic(g, opts);
}

BoundReport check_pi1_bounds(const SignedGraph& g, const FrustrationResult& eps, double tol) {
    return check_pi1_bounds(g, thresholds(g), eps, tol);
}

BoundReport check_pi1_bounds(const SignedGraph& g, const SpectralSummary& spectrum, const FrustrationResult& eps,
                             double tol) {
    constexpr const char* op = "frustration.check_pi1_bounds";
    if (static_cast<int>(eps.signature.size()) != g.n())
        throw Error(ErrorCode::BadSignatureLength, op, "frustration result belongs to a different graph");
    const double n = g.n();
    const double room = n - 2.0 * eps.value;
    if (!(room > 0.0)) {
        std::ostringstream msg;
        msg << "n - 2 eps = " << room << " <= 0";
        throw Error(ErrorCode::DegenerateBound, op, msg.str());
    }
    BoundReport r;
    r.pi1 = spectrum.pi1;
    r.pi2 = spectrum.pi2;
    r.frustration_ceiling = n / room;
    r.upper = std::min(r.frustration_ceiling, spectrum.pi2);
    r.lower = 1.0;
    r.holds = r.pi1 >= r.lower - tol && r.pi1 <= r.upper + tol;
    r.symmetric_L = g.is_degree_regular(1e-9);
    r.exact_frustration = eps.exact;
    return r;
}

}  // namespace signet
