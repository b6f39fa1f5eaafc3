import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fbms.eigensolve import (
    SpectrumResult,
    count_below,
    sym_eig,
    sym_generalized_eig,
    tridiag_generalized,
)


def _random_sym(rng, n):
    A = rng.standard_normal((n, n))
    return 0.5 * (A + A.T)


def test_sym_eig_against_lapack():
    rng = np.random.default_rng(0)
    for n in (3, 8, 24, 60):
        A = _random_sym(rng, n)
        lam, V = sym_eig(A)
        ref = np.linalg.eigvalsh(A)
        scale = np.max(np.abs(ref)) + 1.0
        assert np.max(np.abs(lam - ref)) <= 1e-10 * scale
        # residuals and orthonormality
        R = A @ V - V * lam
        assert np.max(np.abs(R)) <= 1e-8 * scale
        assert np.max(np.abs(V.T @ V - np.eye(n))) <= 1e-8


def test_sym_eig_rejects_nonsymmetric():
    A = np.array([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(ValueError):
        sym_eig(A)


def test_trace_identity():
    # eigenvalue sum equals the trace
    rng = np.random.default_rng(5)
    for n in (5, 17, 40):
        A = _random_sym(rng, n)
        lam, _ = sym_eig(A)
        scale = np.sum(np.abs(lam)) + 1.0
        assert abs(np.sum(lam) - np.trace(A)) <= 1e-10 * scale


def test_gram_matrices_nonnegative():
    rng = np.random.default_rng(7)
    for n in (4, 12, 30):
        A = rng.standard_normal((n, n))
        lam, _ = sym_eig(A.T @ A)
        assert np.min(lam) >= -1e-12 * (1.0 + np.max(np.abs(lam)))


def test_generalized_against_lapack():
    rng = np.random.default_rng(1)
    n = 20
    K = _random_sym(rng, n)
    L = rng.standard_normal((n, n))
    M = L @ L.T + n * np.eye(n)
    lam, V = sym_generalized_eig(K, M)
    scale = np.max(np.abs(lam)) + 1.0
    R = K @ V - (M @ V) * lam
    assert np.max(np.abs(R)) <= 1e-8 * scale * np.max(np.abs(M))
    assert np.max(np.abs(V.T @ M @ V - np.eye(n))) <= 1e-8
    # reference through the same reduction done by lapack
    C = np.linalg.cholesky(M)
    Y = np.linalg.solve(C, K)
    ref = np.linalg.eigvalsh(np.linalg.solve(C, Y.T))
    assert np.max(np.abs(lam - ref)) <= 1e-9 * scale


def test_generalized_needs_positive_definite():
    K = np.eye(3)
    M = np.diag([1.0, -1.0, 1.0])
    with pytest.raises(ValueError):
        sym_generalized_eig(K, M)


def test_sylvester_counts():
    """Signature of the pencil matches the dense congruence count."""
    rng = np.random.default_rng(9)
    for _ in range(8):
        n = int(rng.integers(6, 40))
        kd = rng.standard_normal(n) * 2.0
        ke = rng.standard_normal(n - 1)
        mass = rng.uniform(0.5, 2.0, n)
        lam, _ = tridiag_generalized(kd, ke, mass)
        K = np.diag(kd) + np.diag(ke, 1) + np.diag(ke, -1)
        Minv = np.diag(1.0 / np.sqrt(mass))
        ref = np.linalg.eigvalsh(Minv @ K @ Minv)
        assert np.sum(lam < 0.0) == np.sum(ref < 0.0)
        assert np.max(np.abs(np.sort(lam) - ref)) <= 1e-9 * (np.max(np.abs(ref)) + 1.0)


def test_tridiag_vectors_m_orthonormal():
    rng = np.random.default_rng(13)
    n = 50
    kd = rng.standard_normal(n)
    ke = rng.standard_normal(n - 1)
    mass = rng.uniform(0.5, 2.0, n)
    lam, X = tridiag_generalized(kd, ke, mass, nvec=n)
    G = (X * mass[:, None]).T @ X
    assert np.max(np.abs(G - np.eye(n))) <= 1e-8


def test_count_below_examples():
    assert count_below(np.array([-5.0, -3.0, 1.0]), 0.0) == {
        "count": 2, "certified": True}
    out = count_below(np.array([-2.0 - 1e-9, 0.0]), -2.0)
    assert out["certified"] is False


def test_count_below_multiplicity():
    spec = SpectrumResult(
        eigenvalues=np.array([-1.0, -0.5, 2.0]),
        multiplicity=np.array([1, 2, 2]),
    )
    assert count_below(spec, 0.0)["count"] == 3


def test_count_below_excuses_resolved_zero():
    spec = SpectrumResult(
        eigenvalues=np.array([-3.0, 2e-9]),
        conv=np.array([1e-10, 5e-9]),
        extrapolated=np.array([-3.0, 2e-9]),
    )
    out = count_below(spec, 0.0)
    assert out == {"count": 1, "certified": True}
    spec2 = SpectrumResult(
        eigenvalues=np.array([-3.0, 2e-9]),
        conv=np.array([1e-10, 1e-10]),
        extrapolated=np.array([-3.0, 2e-9]),
    )
    assert count_below(spec2, 0.0)["certified"] is False


@given(st.lists(st.floats(-100.0, 100.0), min_size=1, max_size=30),
       st.floats(-50.0, 50.0))
@settings(max_examples=200, deadline=None)
def test_count_below_properties(vals, threshold):
    guard = 1e-6
    out = count_below(np.array(vals), threshold, guard)
    naive = sum(1 for v in vals if v < threshold - guard)
    assert out["count"] == naive
    if all(abs(v - threshold) > guard for v in vals):
        assert out["certified"] is True
    # shifting everything and the threshold together is invariant, away
    # from the cut where float rounding could flip a comparison
    if all(abs(v - (threshold - guard)) > 1e-9 for v in vals):
        out2 = count_below(np.array(vals) + 7.0, threshold + 7.0, guard)
        assert out2["count"] == out["count"]
