"""Symmetric eigenvalue solving without an external numerical library.

Dense path: Householder tridiagonalization, implicit-shift QL for the
eigenvalues, inverse iteration for the eigenvectors (kernels module).
Generalized pencils K v = lambda M v are reduced by congruence: Cholesky
M = L L^T and C = L^{-1} K L^{-T}, eigenvectors mapped back through
L^{-T} so they come out M-orthonormal.  The per-mode pencils of the
spectral pipeline are symmetric tridiagonal with diagonal (lumped) mass,
for which tridiag_generalized keeps the tridiagonal structure through a
diagonal congruence and stays O(n^2) end to end.

count_below implements guard-band counting: an eigenvalue inside the
guard band around the threshold never contributes to the count, and the
count is certified only when every in-band eigenvalue is numerically
indistinguishable from the threshold itself, i.e. its distance is
covered by its own convergence estimate.  A bare single-grid spectrum
has no convergence estimates, so any in-band eigenvalue leaves it
uncertified.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels


@dataclass
class SpectrumResult:
    """Eigenvalues (ascending) with optional vectors and convergence data.

    eigenvectors columns are M-orthonormal when present.  m is the mode
    label: an int for a single-mode solve, an array aligned with
    eigenvalues for an aggregated spectrum.  conv / order / extrapolated
    are per-eigenvalue Richardson outputs, filled by the spectra module;
    multiplicity counts the cos/sin doubling of m >= 1 modes.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    m: object = None
    bc: str = ""
    n: int = 0
    conv: np.ndarray | None = None
    order: np.ndarray | None = None
    extrapolated: np.ndarray | None = None
    multiplicity: np.ndarray | None = None
    certified: bool | None = None
    floor: np.ndarray | None = None
    ground: np.ndarray | None = field(default=None, repr=False)

    @property
    def values(self):
        """Best available eigenvalues: extrapolated when present."""
        return self.eigenvalues if self.extrapolated is None else self.extrapolated


def _check_symmetric(A):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("expected a square matrix")
    scale = np.max(np.abs(A)) if A.size else 0.0
    if np.max(np.abs(A - A.T)) > 1e-12 * (1.0 + scale):
        raise ValueError("matrix is not symmetric")
    return 0.5 * (A + A.T)


def sym_eig(A):
    """Full spectrum and orthonormal eigenvectors of a symmetric matrix."""
    A = _check_symmetric(A)
    n = A.shape[0]
    if n == 0:
        return SpectrumResult(np.empty(0), np.empty((0, 0)), n=0)
    d, e, V = kernels.householder_tridiag(A)
    lam = kernels.ql_eigvals(d.copy(), e.copy())
    Y = kernels.tridiag_eigvecs(d, e, lam)
    return SpectrumResult(lam, V @ Y, n=n)


def sym_generalized_eig(K, M):
    """Eigenpairs of K v = lambda M v, eigenvectors M-orthonormal.

    M must be symmetric positive definite; a failed Cholesky
    factorization raises LinAlgError (bad quadrature weights upstream).
    """
    K = _check_symmetric(K)
    M = _check_symmetric(M)
    if K.shape != M.shape:
        raise ValueError("K and M must have the same shape")
    L = kernels.cholesky_lower(M)
    C = kernels.solve_lower(L, kernels.solve_lower(L, K).T)
    res = sym_eig(0.5 * (C + C.T))
    X = kernels.solve_lower_t(L, res.eigenvectors)
    return SpectrumResult(res.eigenvalues, X, n=K.shape[0])


def tridiag_generalized(kd, ke, mass, nvec=0):
    """Eigenvalues (and lowest nvec eigenvectors) of tridiagonal K with
    diagonal mass: the congruence D^{-1/2} K D^{-1/2} keeps the pencil
    tridiagonal, so the whole solve is O(n^2)."""
    if np.any(mass <= 0.0):
        raise np.linalg.LinAlgError("mass matrix is not positive definite")
    rt = np.sqrt(mass)
    d = kd / mass
    e = ke / (rt[:-1] * rt[1:])
    lam = kernels.ql_eigvals(d.copy(), e.copy())
    if nvec <= 0:
        return lam, None
    nvec = min(nvec, lam.shape[0])
    Y = kernels.tridiag_eigvecs(d, e, lam[:nvec])
    return lam, Y / rt[:, None]


def count_below(spec, threshold, guard=1e-6):
    """Guard-banded eigenvalue count below a threshold.

    Returns {"count": ..., "certified": ...}: count of eigenvalues below
    threshold - guard, weighted by multiplicity labels when the spectrum
    carries them (one aggregated entry stands for a cos/sin pair at
    m >= 1); certified means every eigenvalue inside the band
    [threshold - guard, threshold + guard] is excused by its own
    accuracy estimate, the larger of the convergence estimate and the
    solver floor (consistent with sitting exactly at the threshold, as
    the rotation modes do at zero).  Accepts a SpectrumResult or a
    plain array.
    """
    if isinstance(spec, SpectrumResult):
        vals = np.asarray(spec.values, dtype=float)
        errs = spec.conv
        mult = spec.multiplicity
        floor = spec.floor
    else:
        vals = np.asarray(spec, dtype=float)
        errs = None
        mult = None
        floor = None
    if mult is None:
        mult = np.ones(vals.shape, dtype=int)
    count = int(np.sum(mult[vals < threshold - guard]))
    certified = True
    for i, v in enumerate(vals):
        if abs(v - threshold) <= guard:
            tol = 0.0
            if errs is not None and np.isfinite(errs[i]):
                tol = float(errs[i])
            if floor is not None and np.isfinite(floor[i]):
                tol = max(tol, float(floor[i]))
            if abs(v - threshold) > tol:
                certified = False
    return {"count": count, "certified": certified}
