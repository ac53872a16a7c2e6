#include "oracles.hpp"
#include "signet/dynamics_ct.hpp"
#include "signet/dynamics_dt.hpp"
#include "signet/error.hpp"
#include "signet/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace signet;

namespace {

SignedGraph unbalanced_graph(std::uint64_t seed, int n = 10) {
    for (std::uint64_t s = seed;; ++s) {
        SignedGraph g = random_signed_graph({.n = n, .edge_prob = 0.5, .negative_prob = 0.3, .seed = s});
        if (!is_structurally_balanced(g).balanced) return g;
    }
}

Vector random_state(Rng& rng, int n, double scale) {
    Vector x(n);
    for (int i = 0; i < n; ++i) x(i) = rng.uniform(-scale, scale);
    return x;
}

}  // namespace

TEST_CASE("step examples") {
    const SignedGraph g = unbalanced_graph(1);
    const NonlinearityProfile psi = make_profile("tanh", {}, g.n());
    CHECK(step(g, psi, 2.0, 0.05, Vector::Zero(g.n())).cwiseAbs().maxCoeff() == 0.0);

    // Fixed points of the map are the continuous-time equilibria.
    const double pi = 1.5 * thresholds(g).pi1;
    const EquilibriumSet set = find_equilibria(g, psi, pi, {.n_seeds = 20});
    for (const auto& r : set.records) CHECK((step(g, psi, pi, 0.05, r.state) - r.state).cwiseAbs().maxCoeff() < 1e-10);

    // Linearization at the origin: I - eps L_pi with L_pi = Delta - pi A.
    const double eps = 0.5 / g.max_degree();
    const Matrix jpi = Matrix::Identity(g.n(), g.n()) - eps * (Matrix(g.degrees().asDiagonal()) - pi * g.weights());
    // Richardson-extrapolated central differences cancel the h^2 term.
    auto map = [&](const Vector& x) { return step(g, psi, pi, eps, x); };
    const Matrix d1 = oracle::fd_jacobian(map, Vector::Zero(g.n()), 1e-3);
    const Matrix d2 = oracle::fd_jacobian(map, Vector::Zero(g.n()), 5e-4);
    CHECK(((4.0 * d2 - d1) / 3.0 - jpi).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("step regime flags") {
    const SignedGraph t = oracle::triangle();
    CHECK(step_regime(t, 0.45) == StepRegime::Contractive);
    CHECK(step_regime(t, 0.75) == StepRegime::Stable);
    CHECK(step_regime(t, 1.0) == StepRegime::TooLarge);
}

TEST_CASE("simulate below both thresholds settles at the origin") {
    const SignedGraph g = unbalanced_graph(2);
    const NonlinearityProfile psi = make_profile("tanh", {}, g.n());
    const double eps = 0.9 / g.max_degree();
    const SpectralSummary s = thresholds(g, eps);
    Rng rng(1);
    for (int k = 0; k < 5; ++k) {
        const DtOutcome o = simulate(g, psi, 0.9 * std::min(s.pi1, *s.pi1d), eps, random_state(rng, g.n(), 3.0));
        CHECK(o.kind == DtKind::FixedPoint);
        CHECK_FALSE(o.nonzero());
    }
}

TEST_CASE("triangle at eps = 0.45") {
    const SignedGraph t = oracle::triangle();
    const NonlinearityProfile psi = make_profile("tanh", {}, 3);
    const SpectralSummary s = thresholds(t, 0.45);
    CHECK(std::abs(*s.pi1d - (1.0 / 0.45 - 1.0)) < 1e-6);
    CHECK(classify_first_bifurcation(s) == FirstBifurcation::PeriodDoubling);

    Vector x0(3);
    x0 << 0.3, -0.1, 0.2;
    const DtOutcome cyc = simulate(t, psi, 1.6, 0.45, x0, {.record = true});
    REQUIRE(cyc.kind == DtKind::Period2);
    CHECK(cyc.amplitude() > 1e-3);
    // Direct iteration oracle: two steps return to the same point.
    Vector y = cyc.state;
    for (int k = 0; k < 2; ++k) {
        const Vector py = y.array().tanh().matrix();
        y = (1.0 - 0.45 * 2.0) * y + 0.45 * 1.6 * t.weights() * py;
    }
    CHECK((y - cyc.state).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(cyc.trajectory.size() == static_cast<std::size_t>(cyc.iterations + 1));

    const DtOutcome zero = simulate(t, psi, 1.1, 0.45, x0);
    CHECK(zero.kind == DtKind::FixedPoint);
    CHECK_FALSE(zero.nonzero());

    // At pi = 2.5 the nonzero CT equilibria are fixed points of the map.
    const EquilibriumSet set = find_equilibria(t, psi, 2.5, {.n_seeds = 50});
    CHECK(set.nontrivial_count() > 0);
    for (const auto& r : set.records) CHECK((step(t, psi, 2.5, 0.45, r.state) - r.state).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("unbalanced graph slightly above pi1 settles at a CT equilibrium") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const SignedGraph g = unbalanced_graph(seed);
        const double eps = 0.5 / g.max_degree();
        const SpectralSummary s = thresholds(g, eps);
        if (!(s.pi1 < *s.pi1d) || s.eigs(1) - s.eigs(0) < 1e-2) continue;
        const NonlinearityProfile psi = make_profile("tanh", {}, g.n());
        const double pi = 1.05 * s.pi1;
        Rng rng(seed);
        const DtOutcome o = simulate(g, psi, pi, eps, random_state(rng, g.n(), 1.0), {.max_iters = 400000});
        REQUIRE(o.kind == DtKind::FixedPoint);
        CHECK(o.nonzero());
        const EquilibriumSet set = find_equilibria(g, psi, pi, {.n_seeds = 20});
        bool match = false;
        for (const auto& r : set.records) match = match || (r.state - o.state).cwiseAbs().maxCoeff() < 1e-6;
        CHECK(match);
        break;
    }
}

TEST_CASE("classify_first_bifurcation") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const SignedGraph b = random_signed_graph({.n = 12, .edge_prob = 0.5, .negative_prob = 0.0, .seed = s});
        CHECK(classify_first_bifurcation(thresholds(b, 0.9 / b.max_degree())) == FirstBifurcation::Pitchfork);
    }
    int checked = 0;
    for (std::uint64_t s = 0; s < 60; ++s) {
        const SignedGraph g = unbalanced_graph(s);
        const double eps = 0.9 / g.max_degree();
        const SpectralSummary sum = thresholds(g, eps);
        if (sum.eigs(0) < 2.0 - sum.eigs(g.n() - 1)) {
            ++checked;
            CHECK(classify_first_bifurcation(sum) == FirstBifurcation::Pitchfork);
        }
    }
    CHECK(checked > 0);

    SpectralSummary no_step = thresholds(oracle::triangle());
    try {
        classify_first_bifurcation(no_step);
        FAIL("expected MissingPi1d");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingPi1d);
    }
    CHECK_THROWS_AS(classify_first_bifurcation(thresholds(oracle::triangle(), 0.7)), Error);
}

TEST_CASE("necessary conditions and norm bounds along simulations") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const SignedGraph g = unbalanced_graph(100 + seed);
        const double eps = 0.8 / g.max_degree();
        const SpectralSummary s = thresholds(g, eps);
        const NonlinearityProfile psi = make_profile("tanh", {}, g.n());
        const FrustrationResult fr = frustration_exact(g);
        Rng rng(seed);
        for (double pi = 0.5; pi <= 4.0; pi += 0.5) {
            const DtOutcome o = simulate(g, psi, pi, eps, random_state(rng, g.n(), 2.0));
            const NecessaryConditionCheck c = check_necessary_conditions(o, s);
            CHECK(c.fixed_point_ok);
            CHECK(c.period2_ok);
            if (o.kind == DtKind::FixedPoint)
                CHECK(check_norm_bound(g, pi, std::vector<Vector>{o.state}, fr).all_inside);
        }
    }
}

TEST_CASE("regular graphs: iterates enter the box ||x||_1 <= pi n") {
    const SignedGraph g = regularize_degrees(unbalanced_graph(7, 12), {.target_degree = 1.0});
    const NonlinearityProfile psi = make_profile("tanh", {}, g.n());
    Rng rng(2);
    const double pi = 3.0;
    const DtOutcome o = simulate(g, psi, pi, 0.6, random_state(rng, g.n(), 50.0), {.max_iters = 5000, .record = true});
    const auto& tr = o.trajectory;
    REQUIRE(tr.size() > 50);
    for (std::size_t k = tr.size() / 2; k < tr.size(); ++k) CHECK(tr[k].cwiseAbs().sum() <= pi * g.n() + 1e-9);
}

TEST_CASE("DT fixed points approach the CT terminal state as the step shrinks") {
    const SignedGraph g = unbalanced_graph(11);
    const NonlinearityProfile psi = make_profile("tanh", {}, g.n());
    const double pi = 1.3 * thresholds(g).pi1;
    Rng rng(8);
    const Vector x0 = random_state(rng, g.n(), 1.0);
    const Vector ct = integrate(g, psi, pi, x0, {.horizon = 2.0, .step = 0.001, .record_every = 0}).terminal();
    // Compare finite-horizon states: k steps of size eps cover the same time.
    double prev = INFINITY;
    for (double eps : {0.3, 0.1, 0.03}) {
        const double h = eps / g.max_degree();
        const long steps = static_cast<long>(std::lround(2.0 / h));
        const DtMap map(g, psi, pi, 2.0 / steps);
        Vector x = x0, nx;
        for (long k = 0; k < steps; ++k) {
            map.apply(x, nx);
            x = nx;
        }
        const double gap = (x - ct).cwiseAbs().maxCoeff();
        CHECK(gap < prev);
        prev = gap;
    }
}

TEST_CASE("simulate guards") {
    const SignedGraph t = oracle::triangle();
    const NonlinearityProfile psi = make_profile("tanh", {}, 3);
    Vector bad(3);
    bad << 1, NAN, 0;
    CHECK_THROWS_AS(simulate(t, psi, 1.0, 0.3, bad), Error);
    CHECK_THROWS_AS(simulate(t, psi, 1.0, 0.3, Vector::Zero(2)), Error);
    // Undecided when the budget is too small to settle.
    Vector x0(3);
    x0 << 0.3, -0.1, 0.2;
    CHECK(simulate(t, psi, 1.6, 0.45, x0, {.max_iters = 3}).kind == DtKind::Undecided);
}
