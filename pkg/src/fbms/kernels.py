"""Hot numerical kernels: tridiagonal QL eigenvalues, inverse iteration,
Householder reduction, Cholesky, and an RK4 march for linear second-order ODEs.

Every kernel is written as plain loop-over-float64 code so the same source
runs under two backends:

  * numba  - each kernel is compiled with @njit(cache=True); default when
             numba imports cleanly.
  * numpy  - the identical functions run uncompiled.

Selection is via the environment variable FBMS_BACKEND (``numba`` or
``numpy``), read once at import time.  ``backend()`` reports the active
choice and ``undecorated(fn)`` returns the pure-Python version of a kernel
for parity checks and benchmarks (see benchmarks/bench_backends.py).

Algorithm notes: the QL routine is the classic implicit-shift iteration for
symmetric tridiagonal matrices (EISPACK tql1 lineage), eigenvalues only;
eigenvectors come from inverse iteration with partial-pivoting LU of the
shifted matrix and reorthogonalization inside eigenvalue clusters (tinvit
lineage); the dense path reduces with Householder reflections first.
"""

import math
import os

import numpy as np

_EPS = 2.220446049250313e-16


def _pick_backend():
    choice = os.environ.get("FBMS_BACKEND", "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(
            "FBMS_BACKEND must be 'numba' or 'numpy', got %r" % (choice,))
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise
        return "numpy"
    return "numba"


_BACKEND = _pick_backend()

if _BACKEND == "numba":
    from numba import njit

    def _jit(fn):
        return njit(cache=True)(fn)
else:
    def _jit(fn):
        return fn


def backend():
    """Active kernel backend, 'numba' or 'numpy'."""
    return _BACKEND


def undecorated(fn):
    """The pure-Python callable behind a kernel (parity tests, benchmarks)."""
    return getattr(fn, "py_func", fn)


@_jit
def ql_eigvals(d, e):
    """Eigenvalues of the symmetric tridiagonal matrix (diag d, off-diag e).

    Implicit-shift QL without eigenvector accumulation, O(n^2) total.
    Returns the eigenvalues in ascending order; the inputs are not modified.
    """
    n = d.shape[0]
    dd = d.copy()
    ee = np.zeros(n)
    for i in range(n - 1):
        ee[i] = e[i]
    for l in range(n):
        niter = 0
        while True:
            m = l
            while m < n - 1:
                sc = abs(dd[m]) + abs(dd[m + 1])
                if abs(ee[m]) <= _EPS * sc:
                    break
                m += 1
            if m == l:
                break
            niter += 1
            if niter > 60:
                raise RuntimeError("QL iteration failed to converge")
            g = (dd[l + 1] - dd[l]) / (2.0 * ee[l])
            r = math.hypot(g, 1.0)
            if g >= 0.0:
                g = dd[m] - dd[l] + ee[l] / (g + r)
            else:
                g = dd[m] - dd[l] + ee[l] / (g - r)
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * ee[i]
                b = c * ee[i]
                r = math.hypot(f, g)
                ee[i + 1] = r
                if r == 0.0:
                    dd[i + 1] -= p
                    ee[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = dd[i + 1] - p
                r = (dd[i] - g) * s + 2.0 * c * b
                p = s * r
                dd[i + 1] = g + p
                g = c * r - b
            if underflow:
                continue
            dd[l] -= p
            ee[l] = g
            ee[m] = 0.0
    return np.sort(dd)


@_jit
def tridiag_eigvecs(d, e, lam):
    """Eigenvectors of tridiag(d, e) for the eigenvalue approximations lam.

    Inverse iteration: LU of (T - lambda I) with partial pivoting, a couple of
    refinement sweeps, and modified Gram-Schmidt against earlier vectors of
    the same eigenvalue cluster (consecutive lam closer than ~100 eps |T|).
    lam must be ascending.  Returns an (n, k) array of unit vectors.
    """
    n = d.shape[0]
    k = lam.shape[0]
    vecs = np.zeros((n, k))
    anorm = 0.0
    for i in range(n):
        t = abs(d[i])
        if i > 0:
            t += abs(e[i - 1])
        if i < n - 1:
            t += abs(e[i])
        if t > anorm:
            anorm = t
    if anorm == 0.0:
        anorm = 1.0
    eps3 = _EPS * anorm
    grp_tol = 100.0 * eps3

    alpha = np.zeros(n)
    beta = np.zeros(n)
    gamma = np.zeros(n)
    mult = np.zeros(n)
    swap = np.zeros(n, dtype=np.bool_)
    rhs = np.zeros(n)

    grp_start = 0
    for j in range(k):
        if j > 0 and lam[j] - lam[j - 1] > grp_tol:
            grp_start = j
        x = lam[j] + (j - grp_start) * 10.0 * eps3

        # LU factorization of (T - x I) with partial pivoting.
        r1 = d[0] - x
        r2 = e[0] if n > 1 else 0.0
        r3 = 0.0
        for i in range(n - 1):
            sub = e[i]
            nd = d[i + 1] - x
            ns = e[i + 1] if i + 1 < n - 1 else 0.0
            if abs(sub) > abs(r1):
                swap[i] = True
                alpha[i] = sub
                beta[i] = nd
                gamma[i] = ns
                m_ = r1 / sub
                mult[i] = m_
                r1 = r2 - m_ * nd
                r2 = r3 - m_ * ns
                r3 = 0.0
            else:
                swap[i] = False
                if r1 == 0.0:
                    r1 = eps3
                alpha[i] = r1
                beta[i] = r2
                gamma[i] = r3
                m_ = sub / r1
                mult[i] = m_
                r1 = nd - m_ * r2
                r2 = ns - m_ * r3
                r3 = 0.0
        if r1 == 0.0:
            r1 = eps3
        alpha[n - 1] = r1
        beta[n - 1] = 0.0
        gamma[n - 1] = 0.0

        ok = False
        for attempt in range(4):
            # deterministic pseudo-random start, reseeded per attempt
            seed = 0.7548776662466927 * (j + 1) + 0.3819660112501051 * (attempt + 1)
            for i in range(n):
                rhs[i] = math.sin((i + 1) * seed) + 0.25
            # first pass: back substitution only
            for sweep in range(3):
                if sweep > 0:
                    # forward: apply the recorded row operations
                    for i in range(n - 1):
                        if swap[i]:
                            t = rhs[i]
                            rhs[i] = rhs[i + 1]
                            rhs[i + 1] = t
                        rhs[i + 1] -= mult[i] * rhs[i]
                # back substitution
                for i in range(n - 1, -1, -1):
                    t = rhs[i]
                    if i + 1 < n:
                        t -= beta[i] * rhs[i + 1]
                    if i + 2 < n:
                        t -= gamma[i] * rhs[i + 2]
                    rhs[i] = t / alpha[i]
                nrm = 0.0
                for i in range(n):
                    nrm += rhs[i] * rhs[i]
                nrm = math.sqrt(nrm)
                if nrm == 0.0:
                    break
                for i in range(n):
                    rhs[i] /= nrm
            # orthogonalize inside the cluster
            for jj in range(grp_start, j):
                dot = 0.0
                for i in range(n):
                    dot += rhs[i] * vecs[i, jj]
                for i in range(n):
                    rhs[i] -= dot * vecs[i, jj]
            nrm = 0.0
            for i in range(n):
                nrm += rhs[i] * rhs[i]
            nrm = math.sqrt(nrm)
            if nrm > 1e-3:
                for i in range(n):
                    vecs[i, j] = rhs[i] / nrm
                ok = True
                break
        if not ok:
            raise RuntimeError("inverse iteration failed to find an independent vector")
    return vecs


@_jit
def householder_tridiag(A):
    """Reduce the dense symmetric matrix A to tridiagonal form.

    Returns (d, e, Q) with Q^T A Q tridiagonal: d the diagonal, e the n-1
    subdiagonal entries, Q orthogonal (accumulated reflections).
    """
    n = A.shape[0]
    V = A.copy()
    d = np.zeros(n)
    e = np.zeros(n)
    for i in range(n - 1, 0, -1):
        l = i - 1
        h = 0.0
        if l > 0:
            scale = 0.0
            for kk in range(l + 1):
                scale += abs(V[i, kk])
            if scale == 0.0:
                e[i] = V[i, l]
            else:
                for kk in range(l + 1):
                    V[i, kk] /= scale
                    h += V[i, kk] * V[i, kk]
                f = V[i, l]
                g = math.sqrt(h)
                if f > 0.0:
                    g = -g
                e[i] = scale * g
                h -= f * g
                V[i, l] = f - g
                f = 0.0
                for jj in range(l + 1):
                    V[jj, i] = V[i, jj] / h
                    g = 0.0
                    for kk in range(jj + 1):
                        g += V[jj, kk] * V[i, kk]
                    for kk in range(jj + 1, l + 1):
                        g += V[kk, jj] * V[i, kk]
                    e[jj] = g / h
                    f += e[jj] * V[i, jj]
                hh = f / (h + h)
                for jj in range(l + 1):
                    f = V[i, jj]
                    g = e[jj] - hh * f
                    e[jj] = g
                    for kk in range(jj + 1):
                        V[jj, kk] -= f * e[kk] + g * V[i, kk]
        else:
            e[i] = V[i, l]
        d[i] = h
    d[0] = 0.0
    e[0] = 0.0
    for i in range(n):
        if d[i] != 0.0:
            for jj in range(i):
                g = 0.0
                for kk in range(i):
                    g += V[i, kk] * V[kk, jj]
                for kk in range(i):
                    V[kk, jj] -= g * V[kk, i]
        d[i] = V[i, i]
        V[i, i] = 1.0
        for jj in range(i):
            V[jj, i] = 0.0
            V[i, jj] = 0.0
    esub = np.zeros(n - 1) if n > 1 else np.zeros(0)
    for i in range(1, n):
        esub[i - 1] = e[i]
    return d, esub, V


@_jit
def cholesky_lower(M):
    """Lower Cholesky factor of the SPD matrix M; raises if M is not SPD."""
    n = M.shape[0]
    L = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            s = M[i, j]
            for kk in range(j):
                s -= L[i, kk] * L[j, kk]
            if i == j:
                if s <= 0.0:
                    raise np.linalg.LinAlgError("matrix is not positive definite")
                L[i, i] = math.sqrt(s)
            else:
                L[i, j] = s / L[j, j]
    return L


@_jit
def solve_lower(L, B):
    """X with L X = B (L lower triangular, B may have many columns)."""
    n = L.shape[0]
    m = B.shape[1]
    X = B.copy()
    for c in range(m):
        for i in range(n):
            s = X[i, c]
            for kk in range(i):
                s -= L[i, kk] * X[kk, c]
            X[i, c] = s / L[i, i]
    return X


@_jit
def solve_lower_t(L, B):
    """X with L^T X = B (back substitution against the transpose)."""
    n = L.shape[0]
    m = B.shape[1]
    X = B.copy()
    for c in range(m):
        for i in range(n - 1, -1, -1):
            s = X[i, c]
            for kk in range(i + 1, n):
                s -= L[kk, i] * X[kk, c]
            X[i, c] = s / L[i, i]
    return X


@_jit
def rk4_linear(qhalf, h, u0, du0):
    """March u'' = q(s) u with classic RK4, q sampled at half steps.

    qhalf holds q at s0, s0+h/2, s0+h, ... (2K+1 values for K steps).
    Returns (u, du) at the K+1 grid nodes.
    """
    K = (qhalf.shape[0] - 1) // 2
    u = np.zeros(K + 1)
    du = np.zeros(K + 1)
    u[0] = u0
    du[0] = du0
    for i in range(K):
        q0 = qhalf[2 * i]
        qm = qhalf[2 * i + 1]
        q1 = qhalf[2 * i + 2]
        y, dy = u[i], du[i]
        k1u = dy
        k1d = q0 * y
        k2u = dy + 0.5 * h * k1d
        k2d = qm * (y + 0.5 * h * k1u)
        k3u = dy + 0.5 * h * k2d
        k3d = qm * (y + 0.5 * h * k2u)
        k4u = dy + h * k3d
        k4d = q1 * (y + h * k3u)
        u[i + 1] = y + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        du[i + 1] = dy + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
    return u, du
