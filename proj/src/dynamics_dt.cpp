#include "signet/dynamics_dt.hpp"

#include "signet/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace signet {

StepRegime step_regime(const SignedGraph& g, double step_size) {
    const double r = step_size * g.max_degree();
    if (r <= 1.0) return StepRegime::Contractive;
    if (r < 2.0) return StepRegime::Stable;
    return StepRegime::TooLarge;
}

DtMap::DtMap(const SignedGraph& g, const NonlinearityProfile& psi, double pi, double step_size)
    : psi_(&psi), pi_(pi), step_(step_size) {
    constexpr const char* op = "dynamics_dt";
    if (!(step_size > 0.0)) throw Error(ErrorCode::BadArgument, op, "step size must be positive");
    if (!(pi > 0.0)) throw Error(ErrorCode::BadArgument, op, "pi must be positive");
    if (!psi.homogeneous() && psi.n() != g.n()) throw Error(ErrorCode::BadArgument, op, "profile size mismatch");
    regime_ = step_regime(g, step_size);
    damping_ = (1.0 - step_size * g.degrees().array()).matrix();
    coupling_ = (step_size * pi) * g.weights();
}

void DtMap::apply(const Vector& x, Vector& out) const {
    psi_->apply_into(x, scratch_);
    out.noalias() = coupling_ * scratch_;
    out += damping_.cwiseProduct(x);
}

Vector step(const SignedGraph& g, const NonlinearityProfile& psi, double pi, double step_size, const Vector& x) {
    if (x.size() != g.n()) throw Error(ErrorCode::BadArgument, "dynamics_dt.step", "state has wrong length");
    const DtMap map(g, psi, pi, step_size);
    Vector out;
    map.apply(x, out);
    return out;
}

std::string_view to_string(DtKind k) noexcept {
    switch (k) {
        case DtKind::FixedPoint: return "fixed_point";
        case DtKind::Period2: return "period2";
        case DtKind::Undecided: return "undecided";
    }
    return "undecided";
}

double DtOutcome::amplitude() const {
    if (kind != DtKind::Period2) return 0.0;
    return 0.5 * (state - state_odd).cwiseAbs().maxCoeff();
}

DtOutcome simulate(const SignedGraph& g, const NonlinearityProfile& psi, double pi, double step_size,
                   const Vector& x0, const SimulateOptions& opts) {
    const DtMap map(g, psi, pi, step_size);
    return simulate(map, x0, opts);
}

DtOutcome simulate(const DtMap& map, const Vector& x0, const SimulateOptions& opts) {
    constexpr const char* op = "dynamics_dt.simulate";
    if (x0.size() != map.n()) throw Error(ErrorCode::BadArgument, op, "initial state has wrong length");
    if (!x0.allFinite()) throw Error(ErrorCode::NonFiniteState, op, "initial state is not finite");

    DtOutcome out;
    out.pi = map.pi();
    out.step_size = map.step_size();
    out.regime = map.regime();
    if (opts.record) out.trajectory.push_back(x0);

    // hist[0] = x_k, hist[1] = x_{k-1}, hist[2] = x_{k-2}, hist[3] = x_{k-3}
    std::vector<Vector> hist(4, x0);
    int filled = 1;
    long k = 0;
    Vector next(map.n());
    auto dist = [](const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); };
    auto advance = [&] {
        map.apply(hist[0], next);
        ++k;
        if (!next.allFinite()) {
            std::ostringstream msg;
            msg << "iterate " << k << " is not finite";
            throw Error(ErrorCode::NonFiniteState, op, msg.str());
        }
        std::rotate(hist.rbegin(), hist.rbegin() + 1, hist.rend());
        hist[0] = next;
        filled = std::min(filled + 1, 4);
        if (opts.record) out.trajectory.push_back(next);
    };
    auto fixed_candidate = [&] { return dist(hist[0], hist[1]) <= opts.tol; };
    auto cycle_candidate = [&] {
        return filled == 4 && dist(hist[0], hist[1]) > 10.0 * opts.tol && dist(hist[0], hist[2]) <= opts.tol &&
               dist(hist[1], hist[3]) <= opts.tol;
    };
    // A candidate is accepted only if the state (or the cycle phase) is still
    // within 10 tol after a further even number of iterations; slowly decaying
    // transients pass the instantaneous tests but drift over the window.
    const long window = 2 * ((opts.confirm_window + 1) / 2);
    auto confirmed = [&](bool cycle) {
        const Vector anchor = hist[0];
        for (long w = 0; w < window; ++w) {
            if (k >= opts.max_iters) return false;
            advance();
        }
        if (cycle ? !cycle_candidate() : !fixed_candidate()) return false;
        return dist(hist[0], anchor) <= 10.0 * opts.tol;
    };

    while (k < opts.max_iters) {
        advance();
        if (fixed_candidate() && confirmed(false)) {
            out.kind = DtKind::FixedPoint;
            out.state = hist[0];
            out.iterations = k;
            return out;
        }
        if (cycle_candidate() && confirmed(true)) {
            out.kind = DtKind::Period2;
            // x_even is the iterate at an even index.
            const bool even = (k % 2) == 0;
            out.state = even ? hist[0] : hist[1];
            out.state_odd = even ? hist[1] : hist[0];
            out.iterations = k;
            return out;
        }
    }
    out.kind = DtKind::Undecided;
    out.state = hist[0];
    out.state_odd = hist[1];
    out.iterations = k;
    return out;
}

std::string_view to_string(FirstBifurcation b) noexcept {
    switch (b) {
        case FirstBifurcation::Pitchfork: return "pitchfork";
        case FirstBifurcation::PeriodDoubling: return "period_doubling";
        case FirstBifurcation::Degenerate: return "degenerate";
    }
    return "degenerate";
}

FirstBifurcation classify_first_bifurcation(const SpectralSummary& s, double tol) {
    constexpr const char* op = "dynamics_dt.classify_first_bifurcation";
    if (!s.pi1d || !s.step_size)
        throw Error(ErrorCode::MissingPi1d, op, "spectral summary was computed without a step size");
    if (*s.step_size * s.max_degree > 1.0) {
        std::ostringstream msg;
        msg << "classification needs step * max degree <= 1, got " << *s.step_size * s.max_degree;
        throw Error(ErrorCode::StepTooLarge, op, msg.str());
    }
    const double pi1d = *s.pi1d;
    if (std::abs(s.pi1 - pi1d) <= tol * std::max(1.0, s.pi1)) return FirstBifurcation::Degenerate;
    return s.pi1 < pi1d ? FirstBifurcation::Pitchfork : FirstBifurcation::PeriodDoubling;
}

NecessaryConditionCheck check_necessary_conditions(const DtOutcome& out, const SpectralSummary& s, double pi_tol,
                                                   double zero_tol) {
    NecessaryConditionCheck c;
    if (out.kind == DtKind::FixedPoint && out.nonzero(zero_tol)) c.fixed_point_ok = out.pi > s.pi1 - pi_tol;
    if (out.kind == DtKind::Period2 && s.pi1d && out.regime != StepRegime::TooLarge)
        c.period2_ok = out.pi > *s.pi1d - pi_tol;
    return c;
}

}  // namespace signet
