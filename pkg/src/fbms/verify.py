"""Independent verification of the integral and pointwise identities.

Deliberately decoupled from the spectral pipeline: integrals use
composite Simpson in the radial direction crossed with the (exact for
trigonometric polynomials) periodic trapezoid rule in theta, while the
discretize module uses P1/trapezoid lumping; radial derivatives come
from this module's own finite-difference stencils (central interior,
one-sided second-order at the ends), angular derivatives from Fourier
differentiation, which is exact on the trigonometric corpus.  Nothing
here touches assembled matrices; geometry enters only through closed
forms.

The identities:

  * check_fsn: the coordinate normal components are eigenfunctions of
    the energy form, Q(v_perp, v_perp) = -2 int v_perp^2.
  * check_ipp: for any smooth scalar w (as a profile W = wN),
    Q(v_perp, w) = -2 int v_perp w + int (Jw) (Y, N) with
    Y = (v,x) x + (1 - |x|^2) v / 2.  Setting w = v_perp recovers the
    check_fsn identity since J v_perp = 0.
  * check_lemma63: pointwise first-derivative identities of the support
    function and the normal components against the second fundamental
    form, interior and boundary, by finite differences.
  * check_q1xi: Q(1, xi) = -int |A|^2 xi equals the boundary flux
    int_bdry d(xi)/dnu, both strictly negative.

Every report carries a measured convergence order from an internal
refinement (grid halving, or step halving for the pointwise checks);
residuals at the rounding floor report order inf.
"""

import math
from dataclasses import dataclass

import numpy as np

from .geometry import normal_component, support_function

_FLOOR = 1e-11


@dataclass
class IdentityReport:
    name: str
    left: float
    right: float
    residual: float
    relative: float
    n: int
    order: float


def _order_from(residuals, scale):
    floor = _FLOOR * scale
    r_mid, r_fin = residuals[-2], residuals[-1]
    if r_fin <= floor:
        return float("inf")
    if r_mid <= floor:
        return float("inf")
    return math.log2(r_mid / r_fin)


def _report(name, pairs, n):
    """pairs: (left, right) per refinement level, coarse to fine."""
    left, right = pairs[-1]
    residuals = [abs(l - r) for l, r in pairs]
    scale = 1.0 + abs(left) + abs(right)
    order = _order_from(residuals, scale) if len(pairs) >= 2 else float("nan")
    return IdentityReport(name, left, right, residuals[-1],
                          residuals[-1] / max(1.0, abs(left), abs(right)),
                          n, order)


# ---------------------------------------------------------------------------
# quadrature and finite differences on the tensor grid


def _simpson_w(h, npts):
    # npts odd (even interval count)
    w = np.full(npts, 2.0 * h / 3.0)
    w[1::2] = 4.0 * h / 3.0
    w[0] = w[-1] = h / 3.0
    return w


def _grids(surface, n, ntheta):
    if n % 2:
        raise ValueError("Simpson needs an even interval count")
    if surface.kind == "catenoid":
        T = surface.constants.T
        u = -T + (2.0 * T / n) * np.arange(n + 1)
        h = 2.0 * T / n
    else:
        u = np.arange(n + 1) / n
        h = 1.0 / n
    theta = 2.0 * np.pi * np.arange(ntheta) / ntheta
    return u, theta, h, 2.0 * np.pi / ntheta


def _area_weight(surface, u):
    if surface.kind == "catenoid":
        a = surface.constants.a
        return (a * np.cosh(u)) ** 2
    return u


def _surface_quad(surface, G, u, h, dth):
    w = _simpson_w(h, u.shape[0]) * _area_weight(surface, u)
    return dth * float(w @ G.sum(axis=1))


def _boundary_quad(surface, g, dth):
    if surface.kind == "catenoid":
        return dth * float(g.sum()) / surface.constants.T
    return dth * float(g.sum())


def _d1(U, h):
    out = np.empty_like(U)
    out[1:-1] = (U[2:] - U[:-2]) / (2.0 * h)
    out[0] = (-3.0 * U[0] + 4.0 * U[1] - U[2]) / (2.0 * h)
    out[-1] = (3.0 * U[-1] - 4.0 * U[-2] + U[-3]) / (2.0 * h)
    return out


def _d2(U, h):
    out = np.empty_like(U)
    out[1:-1] = (U[2:] - 2.0 * U[1:-1] + U[:-2]) / h ** 2
    out[0] = (2.0 * U[0] - 5.0 * U[1] + 4.0 * U[2] - U[3]) / h ** 2
    out[-1] = (2.0 * U[-1] - 5.0 * U[-2] + 4.0 * U[-3] - U[-4]) / h ** 2
    return out


def _dtheta(U, order):
    # exact for band-limited samples, which covers every integrand here
    nth = U.shape[1]
    Uh = np.fft.rfft(U, axis=1)
    k = np.arange(Uh.shape[1], dtype=float)
    if order == 1:
        mult = 1j * k
        if nth % 2 == 0:
            mult[-1] = 0.0  # unpaired Nyquist mode has no odd derivative
    else:
        mult = -(k ** 2)
    return np.fft.irfft(Uh * mult, n=nth, axis=1)


def _sample(surface, fn, S, TH):
    out = np.asarray(fn(S, TH), dtype=float)
    if out.ndim == 0 or out.shape != S.shape:
        out = np.broadcast_to(out, S.shape).astype(float)
    return out


def _vperp(surface, v):
    v = np.asarray(v, dtype=float)
    return lambda S, TH: normal_component(surface, v, S, TH)


def _coords(surface, S, TH):
    if surface.kind == "catenoid":
        a = surface.constants.a
        return (a * np.cosh(S) * np.cos(TH), a * np.cosh(S) * np.sin(TH), a * S)
    return (S * np.cos(TH), S * np.sin(TH), np.zeros_like(S))


# ---------------------------------------------------------------------------
# the checks


def _fsn_sides(surface, v, n, ntheta):
    u, theta, h, dth = _grids(surface, n, ntheta)
    S, TH = np.meshgrid(u, theta, indexing="ij")
    V = _sample(surface, _vperp(surface, v), S, TH)
    Vu = _d1(V, h)
    Vt = _dtheta(V, 1)
    if surface.kind == "catenoid":
        a = surface.constants.a
        rho2 = (a * np.cosh(u)) ** 2
        grad2 = (Vu ** 2 + Vt ** 2) / rho2[:, None]
        absA2 = (2.0 / (a * np.cosh(u) ** 2) ** 2)[:, None]
        bnd = V[[0, -1], :] ** 2
    else:
        ug = np.where(u > 0.0, u, 1.0)
        grad2 = Vu ** 2 + Vt ** 2 / ug[:, None] ** 2
        grad2[0, :] = 0.0  # zero-weight axis row, keep it finite
        absA2 = 0.0
        bnd = V[-1, :] ** 2
    left = _surface_quad(surface, grad2 - absA2 * V ** 2, u, h, dth) \
        - _boundary_quad(surface, bnd, dth)
    right = -2.0 * _surface_quad(surface, V ** 2, u, h, dth)
    return left, right


def check_fsn(surface, v, n=8192, ntheta=64):
    """Both sides of Q(v_perp, v_perp) = -2 int |v_perp|^2 by quadrature."""
    pairs = [_fsn_sides(surface, v, k, ntheta) for k in (n // 4, n // 2, n)]
    return _report("energy-pairing", pairs, n)


def _ipp_sides(surface, v, w, n, ntheta):
    u, theta, h, dth = _grids(surface, n, ntheta)
    S, TH = np.meshgrid(u, theta, indexing="ij")
    v = np.asarray(v, dtype=float)
    V = _sample(surface, _vperp(surface, v), S, TH)
    W = _sample(surface, w, S, TH)
    Vu, Vt = _d1(V, h), _dtheta(V, 1)
    Wu, Wt = _d1(W, h), _dtheta(W, 1)
    Wuu, Wtt = _d2(W, h), _dtheta(W, 2)
    x1, x2, x3 = _coords(surface, S, TH)
    xx = x1 ** 2 + x2 ** 2 + x3 ** 2
    vx = v[0] * x1 + v[1] * x2 + v[2] * x3
    xi = np.asarray(support_function(surface, S, TH), dtype=float)
    if xi.ndim == 0:
        xi = np.broadcast_to(xi, S.shape).astype(float)
    YN = vx * xi + 0.5 * (1.0 - xx) * V
    if surface.kind == "catenoid":
        a = surface.constants.a
        rho2 = ((a * np.cosh(u)) ** 2)[:, None]
        absA2 = (2.0 / (a * np.cosh(u) ** 2) ** 2)[:, None]
        gradVW = (Vu * Wu + Vt * Wt) / rho2
        Jw = -(Wuu + Wtt) / rho2 - absA2 * W
        bnd = (V * W)[[0, -1], :]
    else:
        ug = np.where(u > 0.0, u, 1.0)[:, None]
        absA2 = 0.0
        gradVW = Vu * Wu + Vt * Wt / ug ** 2
        gradVW[0, :] = 0.0
        Jw = -(Wuu + Wu / ug + Wtt / ug ** 2)
        Jw[0, :] = 0.0  # zero-weight axis row
        bnd = (V * W)[-1, :]
    left = _surface_quad(surface, gradVW - absA2 * V * W, u, h, dth) \
        - _boundary_quad(surface, bnd, dth)
    right = -2.0 * _surface_quad(surface, V * W, u, h, dth) \
        + _surface_quad(surface, Jw * YN, u, h, dth)
    return left, right


def check_ipp(surface, v, w, n=1024, ntheta=64, name="bulk-pairing"):
    """Both sides of Q(v_perp, w) = -2 int v_perp w + int (Jw)(Y,N)."""
    pairs = [_ipp_sides(surface, v, w, k, ntheta) for k in (n // 4, n // 2, n)]
    return _report(name, pairs, n)


def ipp_corpus(seed=7, deterministic=20, random=10):
    """The test-function corpus: profile powers times angular harmonics,
    then seeded 3-term random combinations.  Returns (name, fn) pairs."""
    out = []
    for p in range(4):
        for m in range(4):
            for trig in (np.cos,) if m == 0 else (np.cos, np.sin):
                if len(out) >= deterministic:
                    break
                tname = "cos" if trig is np.cos else "sin"
                name = "s%d-%s%d" % (p, tname, m)
                out.append((name, lambda S, TH, p=p, m=m, trig=trig:
                            S ** p * trig(m * TH)))
    rng = np.random.default_rng(seed)
    for i in range(random):
        cs = rng.uniform(-1.0, 1.0, 3)
        ps = rng.integers(0, 4, 3)
        ms = rng.integers(0, 4, 3)
        ts = rng.integers(0, 2, 3)

        def f(S, TH, cs=cs, ps=ps, ms=ms, ts=ts):
            total = np.zeros_like(S)
            for c, p, m, t in zip(cs, ps, ms, ts):
                trig = np.cos if t == 0 else np.sin
                total = total + c * S ** p * trig(m * TH)
            return total

        out.append(("rand3-%d" % i, f))
    return out


def sample_points(surface, n_interior=50, n_boundary=50, seed=11):
    """Deterministic interior/boundary sample points for the pointwise
    checks, kept away from the ends so central stencils fit."""
    rng = np.random.default_rng(seed)
    smax = surface.s_max
    interior = [(0.9 * smax * (2.0 * rng.random() - 1.0), 2.0 * np.pi * rng.random())
                for _ in range(n_interior)]
    if surface.kind == "disk":
        interior = [(0.05 + 0.9 * rng.random(), th) for _, th in interior]
    boundary = []
    for i in range(n_boundary):
        side = smax if (i % 2 == 0 or surface.kind == "disk") else -smax
        boundary.append((side, 2.0 * np.pi * rng.random()))
    return {"interior": interior, "boundary": boundary}


def _frame(surface, s, th):
    """Orthonormal frame directions as parameter derivatives: returns
    (du and dtheta scale factors, principal curvature matrix entries,
    conormal sign helper)."""
    if surface.kind == "catenoid":
        a = surface.constants.a
        rho = a * np.cosh(s)
        kap = 1.0 / (a * np.cosh(s) ** 2)
        return rho, rho, np.array([[kap, 0.0], [0.0, -kap]])
    return 1.0, max(s, 1e-300), np.zeros((2, 2))


def _tangents(surface, s, th):
    """Unit tangent vectors e1 (radial) and e2 (angular) in R^3."""
    if surface.kind == "catenoid":
        ch, sh = np.cosh(s), np.sinh(s)
        e1 = np.array([sh * np.cos(th), sh * np.sin(th), 1.0]) / ch
        e2 = np.array([-np.sin(th), np.cos(th), 0.0])
        return e1, e2
    e1 = np.array([np.cos(th), np.sin(th), 0.0])
    e2 = np.array([-np.sin(th), np.cos(th), 0.0])
    return e1, e2


def _point(surface, s, th):
    if surface.kind == "catenoid":
        a = surface.constants.a
        return np.array([a * np.cosh(s) * np.cos(th), a * np.cosh(s) * np.sin(th), a * s])
    return np.array([s * np.cos(th), s * np.sin(th), 0.0])


def _frame_derivative(surface, fn, s, th, i, step):
    """e_i(fn) by central differences in the parameters."""
    h1, h2, _ = _frame(surface, s, th)
    if i == 0:
        return (fn(s + step, th) - fn(s - step, th)) / (2.0 * step * h1)
    return (fn(s, th + step) - fn(s, th - step)) / (2.0 * step * h2)


def _conormal_derivative(surface, fn, s, th, step):
    """d/dnu by one-sided second-order differences into the domain."""
    h1, _, _ = _frame(surface, s, th)
    if surface.kind == "catenoid" and s < 0.0:
        one = (-3.0 * fn(s, th) + 4.0 * fn(s + step, th) - fn(s + 2.0 * step, th)) \
            / (2.0 * step)
        return -one / h1
    one = (3.0 * fn(s, th) - 4.0 * fn(s - step, th) + fn(s - 2.0 * step, th)) \
        / (2.0 * step)
    return one / h1


def check_lemma63(surface, points=None, v=(0.0, 0.0, 1.0), step=1e-4):
    """The five pointwise identities, each as one report:

      (i)   e_i(xi)     = -sum_j h_ij (x, e_j)      interior
      (ii)  e_i(v_perp) = -sum_j h_ij (v, e_j)      interior
      (iii) Lap |x|^2   = -4                        interior
      (iv)  d(xi)/dnu   = -h(nu, nu)                boundary
      (v)   d(v_perp)/dnu = -(v, nu) h(nu, nu)      boundary

    with the sign conventions of the fixed orientation and the
    spectrally nonnegative Laplacian.  Returns a list of five reports;
    left/right are taken at the worst sample point.
    """
    if points is None:
        points = sample_points(surface)
    v = np.asarray(v, dtype=float)
    xi_fn = lambda s, th: support_function(surface, s, th)
    vp_fn = lambda s, th: normal_component(surface, v, s, th)
    xx_fn = lambda s, th: float(np.dot(_point(surface, s, th), _point(surface, s, th)))
    reports = []

    def batch(name, rows):
        worst = None
        for lhs, rhs in rows:
            if worst is None or abs(lhs - rhs) > abs(worst[0] - worst[1]):
                worst = (lhs, rhs)
        return worst

    def run(name, eval_at, pts, base=step):
        pairs = []
        for k in (4.0, 2.0, 1.0):
            rows = [eval_at(s, th, base * k) for s, th in pts]
            pairs.append(batch(name, rows))
        reports.append(_report(name, pairs, len(pts)))

    def ident_i(s, th, h):
        x = _point(surface, s, th)
        e1, e2 = _tangents(surface, s, th)
        _, _, hmat = _frame(surface, s, th)
        worst = (0.0, 0.0)
        for i, ei in enumerate((e1, e2)):
            lhs = _frame_derivative(surface, xi_fn, s, th, i, h)
            rhs = -(hmat[i, 0] * np.dot(x, e1) + hmat[i, 1] * np.dot(x, e2))
            if abs(lhs - rhs) > abs(worst[0] - worst[1]):
                worst = (lhs, rhs)
        return worst

    def ident_ii(s, th, h):
        e1, e2 = _tangents(surface, s, th)
        _, _, hmat = _frame(surface, s, th)
        worst = (0.0, 0.0)
        for i in range(2):
            lhs = _frame_derivative(surface, vp_fn, s, th, i, h)
            rhs = -(hmat[i, 0] * np.dot(v, e1) + hmat[i, 1] * np.dot(v, e2))
            if abs(lhs - rhs) > abs(worst[0] - worst[1]):
                worst = (lhs, rhs)
        return worst

    def ident_iii(s, th, h):
        if surface.kind == "catenoid":
            a = surface.constants.a
            rho2 = (a * np.cosh(s)) ** 2
            d2s = (xx_fn(s + h, th) - 2.0 * xx_fn(s, th) + xx_fn(s - h, th)) / h ** 2
            d2t = (xx_fn(s, th + h) - 2.0 * xx_fn(s, th) + xx_fn(s, th - h)) / h ** 2
            return (-(d2s + d2t) / rho2, -4.0)
        d2r = (xx_fn(s + h, th) - 2.0 * xx_fn(s, th) + xx_fn(s - h, th)) / h ** 2
        d1r = (xx_fn(s + h, th) - xx_fn(s - h, th)) / (2.0 * h)
        return (-(d2r + d1r / s), -4.0)

    def ident_iv(s, th, h):
        _, _, hmat = _frame(surface, s, th)
        return (_conormal_derivative(surface, xi_fn, s, th, h), -hmat[0, 0])

    def ident_v(s, th, h):
        _, _, hmat = _frame(surface, s, th)
        e1, _ = _tangents(surface, s, th)
        nu = e1 if (surface.kind == "disk" or s > 0.0) else -e1
        return (_conormal_derivative(surface, vp_fn, s, th, h),
                -float(np.dot(v, nu)) * hmat[0, 0])

    run("pointwise-i", ident_i, points["interior"])
    run("pointwise-ii", ident_ii, points["interior"])
    # second differences need a larger step to stay above the rounding
    # floor, else the measured order degrades to noise
    run("pointwise-iii", ident_iii, points["interior"], base=5.0 * step)
    run("pointwise-iv", ident_iv, points["boundary"])
    run("pointwise-v", ident_v, points["boundary"])
    return reports


def _q1xi_sides(surface, n, ntheta):
    u, theta, h, dth = _grids(surface, n, ntheta)
    S, TH = np.meshgrid(u, theta, indexing="ij")
    a = surface.constants.a
    xi = np.asarray(support_function(surface, S, TH), dtype=float)
    absA2 = (2.0 / (a * np.cosh(u) ** 2) ** 2)[:, None]
    left = -_surface_quad(surface, absA2 * xi, u, h, dth)
    flux = np.empty((2, theta.shape[0]))
    for j, th in enumerate(theta):
        flux[0, j] = _conormal_derivative(
            surface, lambda s, t: support_function(surface, s, t), -surface.s_max, th, h)
        flux[1, j] = _conormal_derivative(
            surface, lambda s, t: support_function(surface, s, t), surface.s_max, th, h)
    right = _boundary_quad(surface, flux, dth)
    return left, right


def check_q1xi(surface, n=4096, ntheta=64):
    """Q(1, xi) = -int |A|^2 xi against the boundary flux of xi; both
    strictly negative on the catenoid."""
    if surface.kind != "catenoid":
        raise ValueError("the support-function pairing lives on the catenoid")
    pairs = [_q1xi_sides(surface, k, ntheta) for k in (n // 4, n // 2, n)]
    rep = _report("support-flux", pairs, n)
    if abs(rep.left) < 1e-8:
        raise RuntimeError("pairing too close to zero to certify a sign")
    if rep.left >= 0.0 or rep.right >= 0.0:
        raise RuntimeError("expected both computations strictly negative")
    return rep
