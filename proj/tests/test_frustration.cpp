#include "oracles.hpp"
#include "signet/error.hpp"
#include "signet/frustration.hpp"
#include "signet/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace signet;

TEST_CASE("energy examples") {
    const SignedGraph t = oracle::triangle();
    CHECK(energy(t, {1, 1, 1}) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(energy(t, {1, 1, -1}) == doctest::Approx(1.0).epsilon(1e-15));

    const SignedGraph two_neg = build_graph(3, {{0, 1, -1}, {0, 2, -1}, {1, 2, 1}});
    CHECK(std::abs(energy(two_neg, *is_structurally_balanced(two_neg).signature)) < 1e-15);

    CHECK_THROWS_AS(energy(t, {1, 1}), Error);
    CHECK_THROWS_AS(energy(t, {1, 0, 1}), Error);
}

TEST_CASE("literal triangle energy by hand") {
    // l_ij = -a_ij / delta_i = +1/2 off the diagonal. With s = +++ every
    // ordered pair contributes |1/2| + 1/2 = 1; six ordered pairs halved give 3.
    double e = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) e += 0.5 + 0.5;
    CHECK(0.5 * e == 3.0);
}

TEST_CASE("frustration_exact examples") {
    const SignedGraph t = oracle::triangle();
    const FrustrationResult r = frustration_exact(t);
    CHECK(r.exact);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.value == doctest::Approx(oracle::brute_frustration(t)).epsilon(1e-14));
    int plus = 0;
    for (int v : r.signature) plus += v == 1;
    CHECK((plus == 1 || plus == 2));
    CHECK(r.signature[0] == 1);

    CHECK(frustration_exact(build_graph(2, {{0, 1, -1}})).value == 0.0);

    const SignedGraph bal = random_signed_graph({.n = 12, .edge_prob = 0.4, .seed = 2});
    CHECK(std::abs(frustration_exact(switch_graph(bal, {1, -1, 1, 1, -1, -1, 1, 1, 1, -1, 1, 1})).value) < 1e-12);

    const SignedGraph big = random_signed_graph({.n = 25, .edge_prob = 0.3, .negative_prob = 0.3, .seed = 1});
    try {
        frustration_exact(big);
        FAIL("expected TooLargeForExact");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooLargeForExact);
    }
}

TEST_CASE("frustration_exact matches the brute-force oracle") {
    for (std::uint64_t s = 0; s < 25; ++s) {
        const SignedGraph g = random_signed_graph({.n = 9, .edge_prob = 0.5, .negative_prob = 0.4, .seed = s});
        const FrustrationResult r = frustration_exact(g);
        CHECK(std::abs(r.value - oracle::brute_frustration(g)) < 1e-12);
        CHECK((r.value == 0.0) == is_structurally_balanced(g).balanced);
        CHECK(r.value <= g.n());
        // Quadratic-form identity at the optimum.
        const Matrix h = g.degrees().cwiseInverse().asDiagonal() * g.weights();
        const Matrix b = 0.5 * (h + h.transpose());
        Vector sv(g.n());
        for (int i = 0; i < g.n(); ++i) sv(i) = r.signature[i];
        CHECK(std::abs(2.0 * r.value - (g.n() - sv.dot(b * sv))) < 1e-12);
    }
}

TEST_CASE("frustration is invariant under switching") {
    const SignedGraph g = random_signed_graph({.n = 14, .edge_prob = 0.5, .negative_prob = 0.3, .seed = 17});
    Rng rng(5);
    for (int k = 0; k < 4; ++k) {
        Signature s(14);
        for (int& v : s) v = rng.sign();
        CHECK(std::abs(frustration_exact(switch_graph(g, s)).value - frustration_exact(g).value) < 1e-12);
    }
}

TEST_CASE("tie-breaking picks the lexicographically smallest signature") {
    // Optimal triangle signatures with s0 = +1: (+,+,-), (+,-,+), (+,-,-).
    const FrustrationResult r = frustration_exact(oracle::triangle());
    CHECK(r.signature == Signature{1, -1, -1});
}

TEST_CASE("frustration_heuristic") {
    const SignedGraph t = oracle::triangle();
    const FrustrationResult h = frustration_heuristic(t, {.restarts = 8});
    CHECK_FALSE(h.exact);
    CHECK(h.value == doctest::Approx(1.0).epsilon(1e-14));

    for (std::uint64_t s = 0; s < 5; ++s) {
        const SignedGraph bal = random_signed_graph({.n = 20, .edge_prob = 0.3, .seed = s});
        CHECK(std::abs(frustration_heuristic(bal, {.restarts = 3, .seed = s}).value) < 1e-12);
    }

    int agree = 0;
    for (std::uint64_t s = 0; s < 40; ++s) {
        const SignedGraph g = random_signed_graph({.n = 16, .edge_prob = 0.5, .negative_prob = 0.4, .seed = 100 + s});
        const FrustrationResult e = frustration_exact(g);
        const FrustrationResult hr = frustration_heuristic(g, {.restarts = 50, .seed = s});
        CHECK(hr.value >= e.value - 1e-12);
        agree += std::abs(hr.value - e.value) <= 1e-9;
        for (std::size_t k = 1; k < hr.energy_trace.size(); ++k) CHECK(hr.energy_trace[k] < hr.energy_trace[k - 1]);
        CHECK(hr.value == energy(g, hr.signature));
    }
    CHECK(agree >= 38);

    CHECK_THROWS_AS(frustration_heuristic(t, {.restarts = 0}), Error);
}

TEST_CASE("check_pi1_bounds") {
    const SignedGraph t = oracle::triangle();
    const BoundReport r = check_pi1_bounds(t, frustration_exact(t));
    CHECK(r.pi1 == doctest::Approx(2.0));
    CHECK(r.frustration_ceiling == doctest::Approx(3.0));
    CHECK(r.upper == doctest::Approx(2.0));
    CHECK(r.holds);
    CHECK(r.symmetric_L);

    const SignedGraph bal = random_signed_graph({.n = 10, .edge_prob = 0.5, .seed = 3});
    const BoundReport b = check_pi1_bounds(bal, frustration_exact(bal));
    CHECK(b.upper == doctest::Approx(1.0));
    CHECK(std::abs(b.pi1 - 1.0) < 1e-10);
    CHECK(b.holds);
    CHECK_FALSE(b.symmetric_L);

    for (std::uint64_t s = 0; s < 20; ++s) {
        const SignedGraph g = regularize_degrees(
            random_signed_graph({.n = 14, .edge_prob = 0.6, .negative_prob = 0.3, .seed = 50 + s}));
        CHECK(check_pi1_bounds(g, frustration_exact(g)).holds);
    }

    // n - 2 eps <= 0 makes the bound meaningless.
    FrustrationResult fake = frustration_exact(t);
    fake.value = 1.5;
    CHECK_THROWS_AS(check_pi1_bounds(t, fake), Error);
}
