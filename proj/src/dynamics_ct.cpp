#include "signet/dynamics_ct.hpp"

#include "signet/error.hpp"
#include "signet/rng.hpp"
#include "signet/spectra.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace signet {

namespace {

void check_dims(const SignedGraph& g, const NonlinearityProfile& psi, const char* op) {
    if (!psi.homogeneous() && psi.n() != g.n())
        throw Error(ErrorCode::BadArgument, op,
                    "profile has " + std::to_string(psi.n()) + " agents, graph has " + std::to_string(g.n()));
}

void check_state(const Vector& x, int n, const char* op) {
    if (x.size() != n) throw Error(ErrorCode::BadArgument, op, "state has wrong length");
    if (!x.allFinite()) throw Error(ErrorCode::NonFiniteState, op, "state is not finite");
}

// Uniform sample from the l1 ball of the given radius.
Vector sample_l1_ball(Rng& rng, int n, double radius) {
    Vector e(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        e(i) = rng.exponential();
        total += e(i);
    }
    total += rng.exponential();  // slack coordinate makes the radius uniform in volume
    for (int i = 0; i < n; ++i) e(i) *= radius * rng.sign() / total;
    return e;
}

}  // namespace

CtSystem::CtSystem(const SignedGraph& g, const NonlinearityProfile& psi, double pi)
    : graph_(&g), psi_(&psi), pi_(pi), weights_(g.weights()), degrees_(g.degrees()) {
    check_dims(g, psi, "dynamics_ct");
    if (!(pi > 0.0) || !std::isfinite(pi)) throw Error(ErrorCode::BadArgument, "dynamics_ct", "pi must be positive");
    interaction_ = degrees_.cwiseInverse().asDiagonal() * weights_;
}

void CtSystem::phi(const Vector& x, Vector& out) const {
    psi_->apply_into(x, scratch_);
    out.noalias() = pi_ * (interaction_ * scratch_);
    out -= x;
}

void CtSystem::field(const Vector& x, Vector& out) const {
    psi_->apply_into(x, scratch_);
    out.noalias() = pi_ * (weights_ * scratch_);
    out -= degrees_.cwiseProduct(x);
}

Matrix CtSystem::phi_jacobian(const Vector& x) const {
    const Vector slope = psi_->d1(x);
    Matrix j = pi_ * interaction_ * slope.asDiagonal();
    j.diagonal().array() -= 1.0;
    return j;
}

Vector vector_field(const SignedGraph& g, const NonlinearityProfile& psi, double pi, const Vector& x) {
    constexpr const char* op = "dynamics_ct.vector_field";
    check_state(x, g.n(), op);
    const CtSystem sys(g, psi, pi);
    Vector normalized;
    sys.phi(x, normalized);
    normalized = g.degrees().cwiseProduct(normalized);
    Vector direct;
    sys.field(x, direct);
    const double scale = std::max({1.0, g.degrees().cwiseProduct(x).cwiseAbs().maxCoeff(), pi * g.max_degree()});
    const double gap = (normalized - direct).cwiseAbs().maxCoeff();
    if (gap > 1e-12 * scale) {
        std::ostringstream msg;
        msg << "normalized and direct forms differ by " << gap;
        throw Error(ErrorCode::FormulaMismatch, op, msg.str());
    }
    return normalized;
}

Matrix jacobian(const SignedGraph& g, const NonlinearityProfile& psi, double pi, const Vector& x) {
    check_state(x, g.n(), "dynamics_ct.jacobian");
    const CtSystem sys(g, psi, pi);
    return g.degrees().asDiagonal() * sys.phi_jacobian(x);
}

Trajectory integrate(const SignedGraph& g, const NonlinearityProfile& psi, double pi, const Vector& x0,
                     const IntegrateOptions& opts) {
    const CtSystem sys(g, psi, pi);
    return integrate(sys, x0, opts);
}

Trajectory integrate(const CtSystem& sys, const Vector& x0, const IntegrateOptions& opts) {
    constexpr const char* op = "dynamics_ct.integrate";
    check_state(x0, sys.n(), op);
    if (!(opts.step > 0.0) || !(opts.horizon > 0.0))
        throw Error(ErrorCode::BadArgument, op, "step and horizon must be positive");

    const int n = sys.n();
    Vector k1(n), k2(n), k3(n), k4(n), tmp(n);
    auto rk4 = [&](const Vector& x, double h, Vector& out) {
        sys.field(x, k1);
        tmp = x + 0.5 * h * k1;
        sys.field(tmp, k2);
        tmp = x + 0.5 * h * k2;
        sys.field(tmp, k3);
        tmp = x + h * k3;
        sys.field(tmp, k4);
        out = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    Trajectory tr;
    tr.pi = sys.pi();
    tr.step = opts.step;
    tr.method = opts.adaptive ? "rk4-step-doubling" : "rk4";
    tr.times.push_back(0.0);
    tr.states.push_back(x0);

    Vector x = x0;
    Vector next(n), half(n), f(n);
    double t = 0.0;
    double h = opts.step;
    const double min_step = opts.step * 1e-6;
    long since_record = 0;
    while (t < opts.horizon) {
        if (opts.stop_tol > 0.0) {
            sys.field(x, f);
            if (f.cwiseAbs().maxCoeff() < opts.stop_tol) {
                tr.converged = true;
                break;
            }
        }
        const double hs = std::min(h, opts.horizon - t);
        if (opts.adaptive) {
            rk4(x, hs, next);
            rk4(x, 0.5 * hs, half);
            rk4(half, 0.5 * hs, half);
            const double err = (half - next).cwiseAbs().maxCoeff() / 15.0;
            if (err > opts.local_tol && hs > min_step) {
                h = 0.5 * hs;
                continue;
            }
            next = half + (half - next) / 15.0;  // local extrapolation
            if (err < opts.local_tol / 64.0) h = std::min(opts.step, 2.0 * h);
        } else {
            rk4(x, hs, next);
        }
        if (!next.allFinite()) {
            std::ostringstream msg;
            msg << "state became non-finite at t=" << t << " (step " << hs << " too large?)";
            throw Error(ErrorCode::NonFiniteState, op, msg.str());
        }
        x.swap(next);
        t += hs;
        ++tr.steps;
        if (opts.record_every > 0 && ++since_record >= opts.record_every) {
            since_record = 0;
            tr.times.push_back(t);
            tr.states.push_back(x);
        }
    }
    if (tr.times.back() != t || tr.states.size() == 1) {
        tr.times.push_back(t);
        tr.states.push_back(x);
    }
    return tr;
}

std::string_view to_string(Stability s) noexcept {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Unstable: return "unstable";
        case Stability::Marginal: return "marginal";
    }
    return "marginal";
}

StabilityResult classify_stability(const SignedGraph& g, const NonlinearityProfile& psi, double pi, const Vector& x,
                                   double margin) {
    check_state(x, g.n(), "dynamics_ct.classify_stability");
    const Vector root = psi.d1(x).cwiseSqrt().cwiseProduct(g.degrees().cwiseSqrt().cwiseInverse());
    Matrix m = root.asDiagonal() * g.weights() * root.asDiagonal();
    m = (0.5 * (m + m.transpose())).eval();
    const Vector ev = eigvalsh(m);
    StabilityResult r;
    r.leading = pi * ev(ev.size() - 1);
    if (r.leading < 1.0 - margin)
        r.kind = Stability::Stable;
    else if (r.leading > 1.0 + margin)
        r.kind = Stability::Unstable;
    else
        r.kind = Stability::Marginal;
    return r;
}

int EquilibriumSet::nontrivial_count() const {
    return static_cast<int>(std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.is_origin; }));
}

namespace {

// Once the residual is small, keep taking Newton steps until the step itself
// is negligible. Near a degenerate root (the pitchfork point) the residual
// test alone accepts iterates that are still far from the root.
Vector polish(const CtSystem& sys, Vector x, Vector r, int budget) {
    Vector trial(x.size()), rt(x.size());
    double merit = r.norm();
    for (int it = 0; it < budget; ++it) {
        const Eigen::PartialPivLU<Matrix> lu(sys.phi_jacobian(x));
        const Vector dx = lu.solve(-r);
        if (!dx.allFinite()) break;
        const double step = dx.cwiseAbs().maxCoeff();
        if (step <= 1e-13 * std::max(1.0, x.cwiseAbs().maxCoeff())) break;
        trial = x + dx;
        sys.phi(trial, rt);
        const double m = rt.norm();
        if (!(m <= merit)) break;
        x = trial;
        r = rt;
        merit = m;
    }
    return x;
}

}  // namespace

std::optional<Vector> newton_solve(const CtSystem& sys, const Vector& x0, const FindOptions& opts) {
    const int n = sys.n();
    const Vector& d = sys.degrees();
    Vector x = x0;
    Vector r(n), trial(n), rt(n);
    sys.phi(x, r);
    double merit = r.norm();
    auto small = [&](const Vector& res) { return d.cwiseProduct(res).cwiseAbs().maxCoeff() <= opts.newton_tol; };
    for (int it = 0; it < opts.max_newton; ++it) {
        if (small(r)) return polish(sys, x, r, opts.max_newton);
        const Eigen::PartialPivLU<Matrix> lu(sys.phi_jacobian(x));
        const Vector dx = lu.solve(-r);
        if (!dx.allFinite()) return std::nullopt;
        double t = 1.0;
        bool accepted = false;
        for (int b = 0; b <= opts.max_backtracks; ++b) {
            trial = x + t * dx;
            sys.phi(trial, rt);
            const double m = rt.norm();
            if (m < (1.0 - 1e-4 * t) * merit || m == 0.0) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            // Near the solution rounding stalls the merit; accept a final full step only if it lands.
            if (small(rt)) return polish(sys, trial, rt, opts.max_newton);
            return std::nullopt;
        }
        x = trial;
        r = rt;
        merit = r.norm();
    }
    if (small(r)) return polish(sys, x, r, opts.max_newton);
    return std::nullopt;
}

EquilibriumSet find_equilibria(const SignedGraph& g, const NonlinearityProfile& psi, double pi,
                               const FindOptions& opts) {
    constexpr const char* op = "dynamics_ct.find_equilibria";
    if (opts.n_seeds < 0) throw Error(ErrorCode::BadArgument, op, "n_seeds must be >= 0");
    const CtSystem sys(g, psi, pi);
    const int n = g.n();

    std::vector<Vector> seeds;
    seeds.push_back(Vector::Zero(n));
    for (const Vector& w : opts.warm_starts) {
        check_state(w, n, op);
        seeds.push_back(w);
    }
    if (opts.spectral_directions > 0) {
        const Vector inv_sqrt = g.degrees().cwiseSqrt().cwiseInverse();
        Matrix hs = inv_sqrt.asDiagonal() * g.weights() * inv_sqrt.asDiagonal();
        hs = (0.5 * (hs + hs.transpose())).eval();
        const EigenDecomposition eig = eigh(hs);
        const int k_max = std::min(opts.spectral_directions, n);
        for (int k = 0; k < k_max; ++k) {
            // Right eigenvector of H for its k-th largest eigenvalue.
            Vector v = inv_sqrt.cwiseProduct(eig.vectors.col(n - 1 - k));
            v /= v.cwiseAbs().maxCoeff();
            for (double amp : opts.spectral_amplitudes) {
                seeds.push_back(amp * v);
                seeds.push_back(-amp * v);
            }
        }
    }
    Rng rng(opts.seed);
    for (int s = 0; s < opts.n_seeds; ++s) seeds.push_back(sample_l1_ball(rng, n, pi * n));

    EquilibriumSet set;
    set.pi = pi;
    set.seeds_used = static_cast<int>(seeds.size());
    int converged = 0;
    auto known = [&](const Vector& x) {
        for (const auto& rec : set.records)
            if ((rec.state - x).cwiseAbs().maxCoeff() <= opts.dedup_radius) return true;
        return false;
    };
    auto add = [&](const Vector& x) {
        EquilibriumRecord rec;
        rec.state = x;
        Vector f;
        sys.field(x, f);
        rec.residual = f.cwiseAbs().maxCoeff();
        rec.is_origin = x.cwiseAbs().maxCoeff() <= opts.dedup_radius;
        if (rec.is_origin) rec.state.setZero();
        const StabilityResult st = classify_stability(g, psi, pi, rec.state, opts.stability_margin);
        rec.stability = st.kind;
        rec.leading = st.leading;
        set.records.push_back(std::move(rec));
    };

    for (const Vector& s0 : seeds) {
        const std::optional<Vector> x = newton_solve(sys, s0, opts);
        if (!x) continue;
        ++converged;
        if (!known(*x)) add(*x);
        const Vector mirror = -*x;
        if (!known(mirror)) add(mirror);
    }
    if (!known(Vector::Zero(n))) add(Vector::Zero(n));
    set.converged_fraction = seeds.empty() ? 0.0 : static_cast<double>(converged) / seeds.size();
    return set;
}

double lyapunov_value(const NonlinearityProfile& psi, const Vector& x) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) v += psi.agent(static_cast<int>(i)).primitive(x(i));
    return v;
}

NormBoundReport check_norm_bound(const SignedGraph& g, double pi, const std::vector<Vector>& equilibria,
                                 const FrustrationResult& eps, double tol) {
    NormBoundReport r;
    r.bound = pi * (g.n() - 2.0 * eps.value);
    r.exact_frustration = eps.exact;
    for (const Vector& x : equilibria) {
        const double norm1 = x.cwiseAbs().sum();
        r.max_norm1 = std::max(r.max_norm1, norm1);
        const bool ok = norm1 <= r.bound + tol;
        r.inside.push_back(ok);
        r.all_inside = r.all_inside && ok;
    }
    return r;
}

NormBoundReport check_norm_bound(const SignedGraph& g, double pi, const EquilibriumSet& set,
                                 const FrustrationResult& eps, double tol) {
    std::vector<Vector> xs;
    xs.reserve(set.records.size());
    for (const auto& rec : set.records) xs.push_back(rec.state);
    return check_norm_bound(g, pi, xs, eps, tol);
}

}  // namespace signet
