"""Geometry of the model surfaces: the critical catenoid and the flat unit disk.

The catenoid is parametrized over (s, theta) in [-T, T] x [0, 2pi) by

    X(s, theta) = a (cosh s cos theta, cosh s sin theta, s)

with T the unique positive root of T tanh T = 1 and a = 1/(T cosh T).  This
normalization puts the boundary circles X(+-T, .) on the unit sphere, where
the surface meets the sphere orthogonally: the position vector is tangent to
the surface along the boundary, so the outward conormal there is x itself.
The induced metric is conformal with factor rho^2 = a^2 cosh^2 s.

The unit normal is fixed once and for all as

    N(s, theta) = (sech s cos theta, sech s sin theta, -tanh s),

the normalized cross product of the theta- and s-tangents, in that order.
Every signed quantity (support function, normal components of constant
vectors, second fundamental form) inherits this choice; it makes the support
function

    xi(s) = (x, N) = a (1 - s tanh s)

positive away from the boundary and zero exactly on it.  The principal
curvatures are +-1/(a cosh^2 s), so |A|^2 = 2/(a^2 cosh^4 s).

The flat disk is X(r, theta) = (r cos theta, r sin theta, 0) with constant
normal e_z and vanishing second fundamental form.

Sign convention for the Laplacian everywhere in this package:
Delta = -div grad, so that Dirichlet spectra are nonnegative.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

_DOMAIN_SLACK = 1e-9


@dataclass(frozen=True)
class CatenoidConstants:
    """Parameters of the critical catenoid: T tanh T = 1, a = 1/(T cosh T)."""
    T: float
    a: float


@dataclass(frozen=True)
class SurfaceModel:
    """One of the two model surfaces, 'catenoid' or 'disk'.

    The parameter domain is [-T, T] x [0, 2pi) for the catenoid and
    [0, 1] x [0, 2pi) for the disk.
    """
    kind: str
    constants: Optional[CatenoidConstants] = None

    @property
    def s_max(self):
        """Half-width of the radial parameter interval (T, or 1 for the disk)."""
        return self.constants.T if self.kind == "catenoid" else 1.0


@dataclass(frozen=True)
class GeometryAtPoint:
    """Pointwise frame and curvature data.

    e1 is the normalized s- (or r-) tangent, e2 the normalized angular
    tangent, N the unit normal, h the second fundamental form in the (e1,e2)
    frame, rho2 the conformal factor a^2 cosh^2 s (1 on the disk, whose polar
    chart is not conformal; the r-weight is carried by the quadratures).
    """
    x: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    N: np.ndarray
    h: np.ndarray
    rho2: float


def solve_catenoid_constants(tolerance=1e-14):
    """Bisection for the root of f(T) = T tanh T - 1 on [1, 1.5].

    Returns CatenoidConstants with |T tanh T - 1| <= tolerance and
    a = 1/(T cosh T).
    """
    if tolerance <= 0.0:
        raise ValueError("tolerance must be positive")
    lo, hi = 1.0, 1.5
    flo = lo * math.tanh(lo) - 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = mid * math.tanh(mid) - 1.0
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    T = 0.5 * (lo + hi)
    resid = abs(T * math.tanh(T) - 1.0)
    if resid > tolerance:
        raise ValueError("requested tolerance %g below achievable residual %g"
                         % (tolerance, resid))
    return CatenoidConstants(T=T, a=1.0 / (T * math.cosh(T)))


_CATENOID = None


def catenoid():
    """The critical catenoid surface model (constants solved once, cached)."""
    global _CATENOID
    if _CATENOID is None:
        _CATENOID = SurfaceModel(kind="catenoid",
                                 constants=solve_catenoid_constants(1e-14))
    return _CATENOID


def disk():
    """The flat unit disk surface model."""
    return SurfaceModel(kind="disk")


def _check_domain(surface, s):
    s = np.asarray(s)
    if surface.kind == "catenoid":
        ok = np.all(np.abs(s) <= surface.s_max + _DOMAIN_SLACK)
    else:
        ok = np.all((s >= -_DOMAIN_SLACK) & (s <= 1.0 + _DOMAIN_SLACK))
    if not ok:
        raise ValueError("parameter outside the domain of %s" % surface.kind)


def geometry_at(surface, s, theta):
    """Closed-form frame, normal, and curvature at one parameter point."""
    _check_domain(surface, s)
    ct, st = math.cos(theta), math.sin(theta)
    if surface.kind == "catenoid":
        a = surface.constants.a
        ch, sh = math.cosh(s), math.sinh(s)
        x = np.array([a * ch * ct, a * ch * st, a * s])
        e1 = np.array([sh * ct / ch, sh * st / ch, 1.0 / ch])
        e2 = np.array([-st, ct, 0.0])
        N = np.array([ct / ch, st / ch, -sh / ch])
        kap = 1.0 / (a * ch * ch)
        h = np.array([[kap, 0.0], [0.0, -kap]])
        return GeometryAtPoint(x=x, e1=e1, e2=e2, N=N, h=h,
                               rho2=a * a * ch * ch)
    x = np.array([s * ct, s * st, 0.0])
    e1 = np.array([ct, st, 0.0])
    e2 = np.array([-st, ct, 0.0])
    N = np.array([0.0, 0.0, 1.0])
    return GeometryAtPoint(x=x, e1=e1, e2=e2, N=N,
                           h=np.zeros((2, 2)), rho2=1.0)


def normal_component(surface, v, s, theta):
    """(v, N) at (s, theta): the scalar normal component of a constant vector.

    On the catenoid: e_z gives -tanh s, e_x gives sech s cos theta, e_y gives
    sech s sin theta.  On the disk: the z-component of v, constant.
    """
    if surface.kind == "catenoid":
        _check_domain(surface, s)
        s = np.asarray(s, dtype=float)
        theta = np.asarray(theta, dtype=float)
        out = (v[0] * np.cos(theta) + v[1] * np.sin(theta)
               - v[2] * np.sinh(s)) / np.cosh(s)
        return float(out) if out.ndim == 0 else out
    return float(v[2])


def support_function(surface, s, theta=0.0):
    """xi = (x, N): a(1 - s tanh s) on the catenoid, 0 on the disk.

    Positive in the catenoid's interior, exactly zero on its boundary
    (1 - T tanh T = 0).
    """
    _check_domain(surface, s)
    if surface.kind == "catenoid":
        a = surface.constants.a
        s = np.asarray(s, dtype=float)
        out = a * (1.0 - s * np.tanh(s))
        return float(out) if out.ndim == 0 else out
    return 0.0


def _simpson_weights(lo, hi, n):
    # composite Simpson on n intervals (n even), nodes included
    if n % 2:
        raise ValueError("Simpson rule needs an even interval count")
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return np.linspace(lo, hi, n + 1), w * (hi - lo) / (3.0 * n)


def area_and_boundary_length(surface, n=2048):
    """Surface area and boundary length by quadrature.

    Catenoid: area element a^2 cosh^2 s ds dtheta (Simpson in s, exact in
    theta), boundary length 2 circles of radius a cosh T.  Closed forms for
    reference: area = 2 pi a^2 (T + sinh T cosh T), length = 4 pi / T, and
    the two satisfy 2 area = length.
    """
    if surface.kind == "catenoid":
        T = surface.constants.T
        a = surface.constants.a
        sg, w = _simpson_weights(-T, T, n)
        area = 2.0 * math.pi * float(np.dot(w, (a * np.cosh(sg)) ** 2))
        length = 2.0 * (2.0 * math.pi * a * math.cosh(T))
        return {"area": area, "length": length}
    rg, w = _simpson_weights(0.0, 1.0, n)
    return {"area": 2.0 * math.pi * float(np.dot(w, rg)),
            "length": 2.0 * math.pi}
