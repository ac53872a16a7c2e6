#include "oracles.hpp"
#include "signet/error.hpp"
#include "signet/graph.hpp"
#include "signet/rng.hpp"
#include "signet/spectra.hpp"

#include <doctest.h>

#include <cmath>

using namespace signet;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::BadArgument;
}

}  // namespace

TEST_CASE("build_graph examples") {
    const SignedGraph g2 = build_graph(2, {{0, 1, 1.0}});
    CHECK(g2.degrees()(0) == 1.0);
    CHECK(g2.degrees()(1) == 1.0);

    const SignedGraph t = oracle::triangle();
    for (int i = 0; i < 3; ++i) CHECK(t.degrees()(i) == 2.0);
    CHECK(t.weights()(0, 1) == -1.0);
    CHECK(t.weights()(1, 0) == -1.0);

    CHECK(code_of([] { build_graph(3, {{0, 1, 1.0}}); }) == ErrorCode::DisconnectedGraph);
    CHECK(code_of([] { build_graph(2, {{0, 0, 1.0}, {0, 1, 1.0}}); }) == ErrorCode::SelfLoop);
    CHECK(code_of([] { build_graph(2, {{0, 1, 1.0}, {1, 0, 2.0}}); }) == ErrorCode::DuplicateEdge);
    CHECK(code_of([] { build_graph(2, {{0, 1, 0.0}}); }) == ErrorCode::ZeroWeight);
    CHECK(code_of([] { build_graph(2, {{0, 5, 1.0}}); }) == ErrorCode::BadVertex);
}

TEST_CASE("derive_operators examples") {
    const auto ops_pos = derive_operators(build_graph(2, {{0, 1, 1.0}}));
    Matrix expect(2, 2);
    expect << 1, -1, -1, 1;
    CHECK((ops_pos.normalized_laplacian - expect).norm() == 0.0);

    const auto ops_neg = derive_operators(build_graph(2, {{0, 1, -1.0}}));
    expect << 1, 1, 1, 1;
    CHECK((ops_neg.normalized_laplacian - expect).norm() == 0.0);

    const auto ops = derive_operators(oracle::triangle());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(ops.normalized_laplacian(i, j) == (i == j ? 1.0 : 0.5));

    const SignedGraph g = random_signed_graph({.n = 12, .edge_prob = 0.4, .negative_prob = 0.3, .seed = 5});
    const auto o = derive_operators(g);
    CHECK((o.normalized_laplacian - (Matrix::Identity(12, 12) - o.interaction)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((o.symmetrized_interaction - o.symmetrized_interaction.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((o.laplacian - (Matrix(g.degrees().asDiagonal()) - g.weights())).cwiseAbs().maxCoeff() == 0.0);
    // H and H_s share eigenvalues (general solver as an independent check).
    Eigen::EigenSolver<Matrix> es(o.interaction);
    Vector ev = es.eigenvalues().real();
    std::sort(ev.data(), ev.data() + ev.size());
    CHECK((ev - eigvalsh(o.symmetrized_interaction)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("is_structurally_balanced examples") {
    CHECK_FALSE(is_structurally_balanced(build_graph(3, {{0, 1, -1}, {0, 2, 1}, {1, 2, 1}})).balanced);

    const SignedGraph two_neg = build_graph(3, {{0, 1, -1}, {0, 2, -1}, {1, 2, 1}});
    const BalanceResult b = is_structurally_balanced(two_neg);
    REQUIRE(b.balanced);
    REQUIRE(b.signature);
    CHECK((*b.signature)[0] == 1);
    for (const Edge& e : two_neg.edges()) CHECK((*b.signature)[e.i] * (*b.signature)[e.j] * e.weight > 0);

    // Any tree is balanced whatever its signs.
    Rng rng(3);
    std::vector<Edge> tree;
    for (int v = 1; v < 15; ++v) tree.push_back({static_cast<int>(rng.next_u64() % v), v, rng.sign() * 0.7});
    CHECK(is_structurally_balanced(build_graph(15, tree)).balanced);

    CHECK_FALSE(is_structurally_balanced(oracle::triangle()).balanced);
}

TEST_CASE("balance agrees with the spectral criterion") {
    for (std::uint64_t s = 0; s < 60; ++s) {
        const double beta = (s % 3 == 0) ? 0.0 : 0.3;
        const SignedGraph g = random_signed_graph({.n = 10, .edge_prob = 0.3, .negative_prob = beta, .seed = s});
        const bool balanced = is_structurally_balanced(g).balanced;
        const double l1 = spectrum_of_normalized_laplacian(g)(0);
        CHECK(balanced == (l1 <= 1e-10));
    }
}

TEST_CASE("switch_graph examples") {
    const SignedGraph t = oracle::triangle();
    CHECK(switch_graph(t, {1, 1, 1}) == t);

    const SignedGraph two_neg = build_graph(3, {{0, 1, -1}, {0, 2, -1}, {1, 2, 1}});
    const SignedGraph pos = switch_graph(two_neg, *is_structurally_balanced(two_neg).signature);
    for (const Edge& e : pos.edges()) CHECK(e.weight > 0);

    const SignedGraph one = switch_graph(t, {1, 1, -1});
    int negatives = 0;
    for (const Edge& e : one.edges()) negatives += e.weight < 0;
    CHECK(negatives == 1);

    CHECK(code_of([&] { switch_graph(t, {1, 1}); }) == ErrorCode::BadSignatureLength);

    // Involution and spectral invariance.
    const SignedGraph g = random_signed_graph({.n = 14, .edge_prob = 0.5, .negative_prob = 0.4, .seed = 9});
    Rng rng(11);
    Signature s(14);
    for (int& v : s) v = rng.sign();
    CHECK(switch_graph(switch_graph(g, s), s) == g);
    CHECK(switch_graph(g, s).degrees() == g.degrees());
    CHECK((spectrum_of_normalized_laplacian(switch_graph(g, s)) - spectrum_of_normalized_laplacian(g))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
}

TEST_CASE("regularize_degrees") {
    // A cycle is already regular: the scaling only rescales to the target.
    const SignedGraph cyc = build_graph(4, {{0, 1, 1}, {1, 2, -1}, {2, 3, 1}, {3, 0, -1}});
    const SignedGraph r = regularize_degrees(cyc, {.target_degree = 2.0});
    CHECK((r.weights() - cyc.weights()).cwiseAbs().maxCoeff() < 1e-10);

    const SignedGraph g = random_signed_graph({.n = 30, .edge_prob = 0.4, .negative_prob = 0.3, .seed = 2});
    const SignedGraph rg = regularize_degrees(g);
    CHECK((rg.degrees().array() - 1.0).abs().maxCoeff() <= 1e-10);
    CHECK(rg.weights() == rg.weights().transpose());
    for (int i = 0; i < 30; ++i)
        for (int j = 0; j < 30; ++j) CHECK((rg.weights()(i, j) > 0) == (g.weights()(i, j) > 0));
    const auto ops = derive_operators(rg);
    CHECK((ops.normalized_laplacian - ops.normalized_laplacian.transpose()).cwiseAbs().maxCoeff() < 1e-9);

    // A star cannot be scaled to constant degree: the leaves force every
    // edge to the target while the hub would then carry three times it.
    const SignedGraph star = build_graph(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}});
    CHECK(code_of([&] { regularize_degrees(star, {.max_iter = 2000}); }) == ErrorCode::NoConvergence);
}

TEST_CASE("random_signed_graph") {
    const RandomGraphParams p{.n = 20, .edge_prob = 0.5, .negative_prob = 0.0, .seed = 42};
    const SignedGraph a = random_signed_graph(p);
    CHECK(a == random_signed_graph(p));
    CHECK(is_structurally_balanced(a).balanced);
    for (const Edge& e : a.edges()) {
        CHECK(e.weight > 0.0);
        CHECK(e.weight <= 1.0);
    }

    // Binomial edge count: mean n(n-1)p/2 = 95, sd of the mean over 100 draws ~0.69.
    double total = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) total += random_signed_graph({.n = 20, .edge_prob = 0.5, .seed = s}).edge_count();
    const double mean = total / 100.0;
    const double sd_mean = std::sqrt(190 * 0.25) / 10.0;
    CHECK(std::abs(mean - 95.0) <= 3.0 * sd_mean);

    // Negative fraction tracks beta.
    int neg = 0, all = 0;
    for (std::uint64_t s = 0; s < 50; ++s)
        for (const Edge& e : random_signed_graph({.n = 20, .edge_prob = 0.5, .negative_prob = 0.3, .seed = s}).edges()) {
            neg += e.weight < 0;
            ++all;
        }
    CHECK(std::abs(static_cast<double>(neg) / all - 0.3) < 0.02);

    CHECK(code_of([] { random_signed_graph({.n = 40, .edge_prob = 0.001, .max_retries = 5}); }) ==
          ErrorCode::CannotConnect);
}
