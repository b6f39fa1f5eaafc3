import os
import subprocess
import sys

import numpy as np
import pytest

from fbms import kernels


def _tridiag(rng, n):
    d = rng.standard_normal(n)
    e = rng.standard_normal(n - 1)
    return d, e


def test_backend_reported():
    assert kernels.backend() in ("numba", "numpy")


@pytest.mark.parametrize("n", [2, 7, 33])
def test_ql_matches_lapack(n):
    rng = np.random.default_rng(n)
    d, e = _tridiag(rng, n)
    A = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    got = np.sort(kernels.ql_eigvals(d.copy(), e.copy()))
    ref = np.linalg.eigvalsh(A)
    assert np.max(np.abs(got - ref)) <= 1e-12 * (1.0 + np.max(np.abs(ref)))


def test_eigvecs_cluster():
    # a matrix with a tight eigenvalue cluster still yields an
    # orthonormal set from inverse iteration
    n = 40
    rng = np.random.default_rng(2)
    d = np.concatenate([np.full(3, 1.0 + 1e-13), rng.uniform(2.0, 9.0, n - 3)])
    e = np.full(n - 1, 1e-9)
    lam = np.sort(kernels.ql_eigvals(d.copy(), e.copy()))
    V = kernels.tridiag_eigvecs(d, e, lam)
    assert np.max(np.abs(V.T @ V - np.eye(n))) <= 1e-8
    A = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert np.max(np.abs(A @ V - V * lam)) <= 1e-8 * np.max(np.abs(d))


def test_householder_similarity():
    rng = np.random.default_rng(4)
    n = 18
    A = rng.standard_normal((n, n))
    A = 0.5 * (A + A.T)
    d, e, V = kernels.householder_tridiag(A.copy())
    T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert np.max(np.abs(V @ T @ V.T - A)) <= 1e-12 * (1.0 + np.max(np.abs(A)))
    assert np.max(np.abs(V.T @ V - np.eye(n))) <= 1e-13


def test_cholesky_and_solves():
    rng = np.random.default_rng(6)
    n = 15
    L0 = np.tril(rng.standard_normal((n, n)))
    np.fill_diagonal(L0, np.abs(np.diag(L0)) + 1.0)
    M = L0 @ L0.T
    L = kernels.cholesky_lower(M.copy())
    assert np.max(np.abs(L @ L.T - M)) <= 1e-12 * np.max(np.abs(M))
    B = rng.standard_normal((n, 4))
    X = kernels.solve_lower(L, B.copy())
    assert np.max(np.abs(L @ X - B)) <= 1e-11
    Y = kernels.solve_lower_t(L, B.copy())
    assert np.max(np.abs(L.T @ Y - B)) <= 1e-11


def test_rk4_order():
    # u'' = u with cosh/sinh solution; two step sizes give order 4
    errs = []
    for k in (64, 128):
        h = 1.0 / k
        qhalf = np.ones(2 * k + 1)
        u, du = kernels.rk4_linear(qhalf, h, 1.0, 0.0)
        errs.append(abs(u[-1] - np.cosh(1.0)))
    assert errs[1] <= errs[0] / 12.0


def test_python_fallback_parity():
    """Each kernel agrees with its uncompiled twin bit-for-bit or close."""
    rng = np.random.default_rng(8)
    n = 25
    d, e = _tridiag(rng, n)
    pairs = []
    lam_c = kernels.ql_eigvals(d.copy(), e.copy())
    lam_p = kernels.undecorated(kernels.ql_eigvals)(d.copy(), e.copy())
    pairs.append((np.sort(lam_c), np.sort(lam_p)))
    lam = np.sort(lam_c)
    pairs.append((kernels.tridiag_eigvecs(d, e, lam),
                  kernels.undecorated(kernels.tridiag_eigvecs)(d, e, lam)))
    A = rng.standard_normal((12, 12))
    A = 0.5 * (A + A.T)
    for got, ref in zip(kernels.householder_tridiag(A.copy()),
                        kernels.undecorated(kernels.householder_tridiag)(A.copy())):
        pairs.append((got, ref))
    L0 = np.tril(rng.standard_normal((9, 9)))
    np.fill_diagonal(L0, np.abs(np.diag(L0)) + 1.0)
    M = L0 @ L0.T
    pairs.append((kernels.cholesky_lower(M.copy()),
                  kernels.undecorated(kernels.cholesky_lower)(M.copy())))
    q = rng.uniform(0.5, 1.5, 2 * 32 + 1)
    for got, ref in zip(kernels.rk4_linear(q, 1.0 / 32, 1.0, 0.5),
                        kernels.undecorated(kernels.rk4_linear)(q, 1.0 / 32, 1.0, 0.5)):
        pairs.append((np.asarray(got), np.asarray(ref)))
    for got, ref in pairs:
        scale = 1.0 + np.max(np.abs(np.asarray(ref)))
        assert np.max(np.abs(np.asarray(got) - np.asarray(ref))) <= 1e-12 * scale


def test_backend_env_selection():
    code = "import fbms.kernels as k; print(k.backend())"
    env = dict(os.environ, FBMS_BACKEND="numpy")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    assert out.stdout.strip() == "numpy"
    env = dict(os.environ, FBMS_BACKEND="cuda")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    assert out.returncode != 0
