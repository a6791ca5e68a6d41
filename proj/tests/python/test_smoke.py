import math

import numpy as np
import pytest

import infospec

RHO = np.array([[0.75, 0.35], [0.35, 0.25]])
SIGMA = np.diag([0.9, 0.1])


def test_relative_entropy_of_the_worked_example():
    # closed form through the 2x2 eigen-decomposition of rho
    w, v = np.linalg.eigh(RHO)
    log_rho = v @ np.diag(np.log(w)) @ v.T
    expect = np.trace(RHO @ (log_rho - np.diag(np.log([0.9, 0.1]))))
    got = infospec.quantum_relative_entropy(RHO, SIGMA)
    assert got == pytest.approx(expect, abs=1e-12)
    assert abs(got - 0.4013) <= 5e-4


def test_commuting_states_reduce_to_kl():
    p, q = [0.2, 0.3, 0.5], [0.4, 0.4, 0.2]
    kl = sum(a * math.log(a / b) for a, b in zip(p, q))
    assert infospec.kl_divergence(p, q) == pytest.approx(kl, abs=1e-14)
    assert infospec.quantum_relative_entropy(np.diag(p), np.diag(q)) == pytest.approx(kl, abs=1e-12)


def test_g_curve_agrees_with_brute_force():
    rows = infospec.g_curve(RHO, SIGMA, [1, 4], [0.0, 0.4, 0.8])
    assert len(rows) == 6
    for n, a, g, alpha, _beta in rows:
        assert 0.0 <= g <= 1.0
        assert g == pytest.approx(1.0 - alpha, abs=1e-12)
        assert g == pytest.approx(infospec.brute_force_g(RHO, SIGMA, n, a), abs=1e-9)


def test_pure_state_limit():
    assert infospec.pure_state_g(0.0, 1, 0.7) == pytest.approx(1.0)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        infospec.kl_divergence([0.5, 0.4], [0.5, 0.5])
    with pytest.raises(ValueError):
        infospec.quantum_relative_entropy(np.array([[1.0, 0.5], [0.0, 0.0]]), SIGMA)


def test_selftest_passes():
    report = infospec.selftest(seed=1, trials=10)
    assert report["passed"] is True
    assert report["properties"]
