import numpy as np
import pytest

import signet


def triangle():
    return signet.SignedGraph(3, [(0, 1, -1.0), (0, 2, -1.0), (1, 2, -1.0)])


def test_triangle_spectrum_and_thresholds():
    s = signet.thresholds(triangle())
    np.testing.assert_allclose(s.eigs, [0.5, 0.5, 2.0], atol=1e-12)
    assert s.pi1 == pytest.approx(2.0)
    assert s.pi1d is None
    assert signet.thresholds(triangle(), 0.45).pi1d == pytest.approx(1 / 0.45 - 1, abs=1e-8)
    assert signet.is_structurally_balanced(triangle()) == (False, None)


def test_frustration():
    r = signet.frustration_exact(triangle())
    assert r.value == 1.0 and r.exact
    g = signet.random_signed_graph(12, 0.6, 0.3, seed=4)
    # The heuristic can only overestimate the minimum.
    assert signet.frustration_heuristic(g, seed=1).value >= signet.frustration_exact(g).value - 1e-12


def test_equilibria_at_pi4():
    g = triangle()
    psi = signet.tanh_profile(3)
    eq = signet.find_equilibria(g, psi, 4.0, n_seeds=100, seed=1)
    assert len(eq) == 13
    for r in eq:
        assert r.residual <= 1e-8
        assert np.abs(signet.vector_field(g, psi, 4.0, r.state)).max() <= 1e-8


def test_simulations():
    g = triangle()
    psi = signet.tanh_profile(3)
    tr = signet.integrate(g, psi, 1.5, np.array([0.4, -0.2, 0.1]), horizon=50.0, step=0.05)
    assert tr.states.shape[1] == 3
    assert np.abs(tr.terminal).max() < 1e-6
    out = signet.simulate(g, psi, 1.6, 0.45, np.array([0.3, -0.1, 0.2]))
    assert out.kind == "period2" and out.amplitude > 0.5
    assert signet.first_bifurcation(signet.thresholds(g, 0.45)) == "period_doubling"


def test_sweep_and_onset():
    g = signet.random_signed_graph(10, 0.6, 0.2, seed=3)
    s = signet.thresholds(g)
    psi = signet.tanh_profile(g.n)
    r = signet.sweep_ct(g, psi, signet.make_grid(0.5, s.pi1 + 0.3, 0.01), seeds_per_point=4)
    value, half = signet.estimate_onset(r, "nontrivial")
    assert abs(value - s.pi1) <= 0.01
    assert '"mode": "ct"' in r.summary_json()


def test_errors_carry_code_and_op():
    with pytest.raises(signet.SignetError) as info:
        signet.SignedGraph(3, [(0, 1, 1.0)])
    assert info.value.code == "DisconnectedGraph"
    assert info.value.input_error
    with pytest.raises(signet.SignetError):
        signet.Profile("logistic", [], 3)
