"""Per-mode 1D reduction and assembly of the surface eigenproblems.

Separation of variables on the surface of revolution: a scalar field
u = alpha(s) cos(m theta) (or sin) turns the 2D weak forms into 1D
integrals against the mode factor c_m = int trig^2 = 2pi (m=0) or
pi (m>=1).  On the catenoid (conformal metric rho^2(ds^2+dtheta^2),
rho = a cosh s) the quadratic form of the Jacobi operator reduces to

    Q_m(alpha)/c_m = int_{-T}^{T} alpha'^2 + (m^2 - 2 sech^2 s) alpha^2 ds
                     - (1/T)(alpha(T)^2 + alpha(-T)^2)

with interior mass weight rho^2 = a^2 cosh^2 s and boundary weight
rho(T) = a cosh T = 1/T per endpoint.  On the disk the reduction of
the (flat) Jacobi operator is the polar Laplacian one,

    Q_m(alpha)/c_m = int_0^1 (alpha'^2 + m^2 alpha^2 / r^2) r dr
                     - alpha(1)^2,

with mass weight r and boundary weight 1 at r = 1.

Discretization: uniform grid, n intervals.  P1 stiffness plus trapezoid
lumping of potential, mass and boundary terms; everything is symmetric
tridiagonal (K) or diagonal (M, B) and second-order accurate in the
eigenvalues.  The disk grid drops r = 0: the first cell [0, h] is closed
with the regularity behaviour alpha ~ r^m (flat extension for m = 0,
linear-through-zero for m >= 1), which keeps the reduction second order
and makes alpha = r an exact discrete null vector of the m = 1 Robin
operator.

apply_J and the quadrature helpers operate on sampled grid functions and
are used by the residual and cross-check tests; they share the grid
conventions of assemble but not its matrices.
"""

from dataclasses import dataclass

import numpy as np

from .geometry import SurfaceModel, catenoid, disk

_BCS = ("robin", "dirichlet", "natural")


def mode_factor(m):
    # int_0^{2pi} cos^2(m t) dt
    return 2.0 * np.pi if m == 0 else np.pi


@dataclass(frozen=True)
class ModeProblem:
    """One Fourier mode of an eigenproblem on a surface of revolution."""

    surface: SurfaceModel
    m: int
    bc: str = "robin"
    n: int = 512

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("Fourier mode must be nonnegative")
        if self.bc not in _BCS:
            raise ValueError("bc must be one of %s" % (_BCS,))
        if self.n < 16:
            raise ValueError("grid too small, need n >= 16")


@dataclass
class DiscreteOperator:
    """Assembled per-mode matrices, all scaled by the mode factor c_m.

    K is symmetric tridiagonal, stored as diagonal kd and subdiagonal ke.
    For bc="robin" the boundary form -B is already folded into K; for
    bc="natural" K carries no boundary term and B is meaningful on its
    own (Steklov right-hand side); for bc="dirichlet" the boundary rows
    and columns are eliminated and B is identically zero.  mass and bnd
    are the diagonals of M and B.  grid holds the node coordinates that
    remain after elimination.
    """

    problem: ModeProblem
    kd: np.ndarray
    ke: np.ndarray
    mass: np.ndarray
    bnd: np.ndarray
    grid: np.ndarray
    c: float

    @property
    def size(self):
        return self.kd.shape[0]

    def K_dense(self):
        K = np.diag(self.kd)
        idx = np.arange(self.size - 1)
        K[idx, idx + 1] = self.ke
        K[idx + 1, idx] = self.ke
        return K

    def M_dense(self):
        return np.diag(self.mass)

    def B_dense(self):
        return np.diag(self.bnd)


def _trapezoid_weights(h, npts):
    w = np.full(npts, h)
    w[0] = 0.5 * h
    w[-1] = 0.5 * h
    return w


def _assemble_catenoid(problem):
    con = problem.surface.constants
    T, a = con.T, con.a
    n = problem.n
    h = 2.0 * T / n
    s = -T + h * np.arange(n + 1)
    c = mode_factor(problem.m)

    # P1 stiffness on a uniform grid
    kd = np.full(n + 1, 2.0 / h)
    kd[0] = kd[-1] = 1.0 / h
    ke = np.full(n, -1.0 / h)

    # lumped potential m^2 - 2 sech^2 s and mass a^2 cosh^2 s
    w = _trapezoid_weights(h, n + 1)
    pot = problem.m ** 2 - 2.0 / np.cosh(s) ** 2
    kd = kd + w * pot
    mass = w * (a * np.cosh(s)) ** 2

    # boundary mass: each circle has line element rho(T) = 1/T
    bnd = np.zeros(n + 1)
    bnd[0] = bnd[-1] = 1.0 / T

    kd *= c
    ke = ke * c
    mass *= c
    bnd *= c

    if problem.bc == "robin":
        kd = kd - bnd
        bnd = np.zeros_like(bnd)
    elif problem.bc == "dirichlet":
        kd, ke, mass = kd[1:-1], ke[1:-1], mass[1:-1]
        s = s[1:-1]
        bnd = np.zeros_like(kd)
    return DiscreteOperator(problem, kd, ke, mass, bnd, s, c)


def _assemble_disk(problem):
    n = problem.n
    m = problem.m
    h = 1.0 / n
    r = h * (1.0 + np.arange(n))
    c = mode_factor(m)

    # stiffness with coefficient r: midpoint value per cell, cells [r_j, r_j+1]
    rmid = r[:-1] + 0.5 * h
    kd = np.zeros(n)
    kd[:-1] += rmid / h
    kd[1:] += rmid / h
    ke = -rmid / h

    # trapezoid on [h, 1] for the potential m^2/r and the mass r
    w = _trapezoid_weights(h, n)
    kd = kd + w * m ** 2 / r
    mass = w * r

    # first cell [0, h]: alpha ~ r^m regularity closure
    if m == 0:
        # flat extension, no stiffness, mass int_0^h r dr
        mass[0] += 0.5 * h ** 2
    else:
        # linear ramp alpha_1 r/h: int r'^2 r + m^2 r/h^2 dr = (1+m^2)/2
        kd[0] += 0.5 * (1.0 + m ** 2)
        mass[0] += 0.25 * h ** 2

    bnd = np.zeros(n)
    bnd[-1] = 1.0

    kd *= c
    ke = ke * c
    mass *= c
    bnd *= c

    if problem.bc == "robin":
        kd = kd - bnd
        bnd = np.zeros_like(bnd)
    elif problem.bc == "dirichlet":
        kd, ke, mass = kd[:-1], ke[:-1], mass[:-1]
        r = r[:-1]
        bnd = np.zeros_like(kd)
    return DiscreteOperator(problem, kd, ke, mass, bnd, r, c)


def assemble(problem):
    """Assemble the per-mode matrices for a ModeProblem."""
    if problem.surface.kind == "catenoid":
        return _assemble_catenoid(problem)
    return _assemble_disk(problem)


# ---------------------------------------------------------------------------
# pointwise operator application and tensor-grid quadrature


def _profile_J_catenoid(surface, u, m):
    con = surface.constants
    T, a = con.T, con.a
    n = u.shape[0] - 1
    h = 2.0 * T / n
    s = -T + h * np.arange(n + 1)
    d2 = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / h ** 2
    si = s[1:-1]
    rho2 = (a * np.cosh(si)) ** 2
    pot = m ** 2 - 2.0 / np.cosh(si) ** 2
    return (-d2 + pot * u[1:-1]) / rho2


def _profile_J_disk(u, m):
    n = u.shape[0]
    h = 1.0 / n
    r = h * (1.0 + np.arange(n))
    d2 = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / h ** 2
    d1 = (u[2:] - u[:-2]) / (2.0 * h)
    ri = r[1:-1]
    return -d2 - d1 / ri + m ** 2 * u[1:-1] / ri ** 2


def _grid_J_catenoid(surface, u):
    con = surface.constants
    T, a = con.T, con.a
    ns = u.shape[0] - 1
    ntheta = u.shape[1]
    h = 2.0 * T / ns
    dth = 2.0 * np.pi / ntheta
    s = -T + h * np.arange(ns + 1)
    uss = (u[2:, :] - 2.0 * u[1:-1, :] + u[:-2, :]) / h ** 2
    utt = (np.roll(u, -1, axis=1) - 2.0 * u + np.roll(u, 1, axis=1))[1:-1, :] / dth ** 2
    si = s[1:-1]
    rho2 = (a * np.cosh(si)) ** 2
    absA2 = 2.0 / (a * np.cosh(si) ** 2) ** 2
    return -(uss + utt) / rho2[:, None] - absA2[:, None] * u[1:-1, :]


def _grid_J_disk(u):
    nr = u.shape[0]
    ntheta = u.shape[1]
    h = 1.0 / nr
    dth = 2.0 * np.pi / ntheta
    r = h * (1.0 + np.arange(nr))
    urr = (u[2:, :] - 2.0 * u[1:-1, :] + u[:-2, :]) / h ** 2
    ur = (u[2:, :] - u[:-2, :]) / (2.0 * h)
    utt = (np.roll(u, -1, axis=1) - 2.0 * u + np.roll(u, 1, axis=1))[1:-1, :] / dth ** 2
    ri = r[1:-1]
    return -(urr + ur / ri[:, None] + utt / ri[:, None] ** 2)


def apply_J(surface, u, m=0):
    """Pointwise Jacobi operator by central differences, interior nodes only.

    1D input is a mode-m profile: catenoid on the n+1 nodes of [-T, T]
    (returns values at the n-1 interior nodes), disk on the n nodes
    r = h, 2h, ..., 1 (returns values at r = 2h ... 1-h).  2D input is a
    tensor grid sample, rows as above and ntheta periodic columns with
    no duplicated endpoint; the angular direction differentiates
    spectrally-cleanly via the periodic 3-point stencil and m is
    ignored.
    """
    u = np.asarray(u, dtype=float)
    if u.ndim == 1:
        if surface.kind == "catenoid":
            return _profile_J_catenoid(surface, u, m)
        return _profile_J_disk(u, m)
    if surface.kind == "catenoid":
        return _grid_J_catenoid(surface, u)
    return _grid_J_disk(u)


def surface_grid(surface, n, ntheta):
    """Tensor quadrature grid: (row coordinates, theta values)."""
    if surface.kind == "catenoid":
        T = surface.constants.T
        rows = -T + (2.0 * T / n) * np.arange(n + 1)
    else:
        rows = np.arange(n + 1) / n
    theta = 2.0 * np.pi * np.arange(ntheta) / ntheta
    return rows, theta


def quadrature_surface(surface, F):
    """Integrate a sampled grid function over the surface.

    F has shape (n+1, ntheta): rows are the s-nodes on [-T, T]
    (catenoid) or the r-nodes on [0, 1] (disk), columns the periodic
    theta nodes.  Trapezoid in the radial direction, exact periodic
    trapezoid in theta, with the area element rho^2 ds dtheta resp.
    r dr dtheta.
    """
    F = np.asarray(F, dtype=float)
    n = F.shape[0] - 1
    ntheta = F.shape[1]
    dth = 2.0 * np.pi / ntheta
    if surface.kind == "catenoid":
        con = surface.constants
        h = 2.0 * con.T / n
        s = -con.T + h * np.arange(n + 1)
        w = _trapezoid_weights(h, n + 1) * (con.a * np.cosh(s)) ** 2
    else:
        h = 1.0 / n
        r = h * np.arange(n + 1)
        w = _trapezoid_weights(h, n + 1) * r
    return dth * float(w @ F.sum(axis=1))


def quadrature_boundary(surface, f):
    """Integrate a sampled function over the boundary circles.

    Catenoid: f has shape (2, ntheta), rows ordered (s=-T, s=+T), line
    element rho(T) dtheta = dtheta/T on each circle.  Disk: f has shape
    (ntheta,), line element dtheta.
    """
    f = np.asarray(f, dtype=float)
    if surface.kind == "catenoid":
        ntheta = f.shape[1]
        return (2.0 * np.pi / ntheta) * float(f.sum()) / surface.constants.T
    ntheta = f.shape[0]
    return (2.0 * np.pi / ntheta) * float(f.sum())
