import math

import numpy as np
import pytest

import oracles
from fbms import geometry


def test_neck_constant(cat):
    T = cat.constants.T
    assert abs(T * math.tanh(T) - 1.0) <= 1e-12
    assert abs(T - oracles.T) <= 1e-12
    assert abs(cat.constants.a - 1.0 / (T * math.cosh(T))) <= 1e-15


def test_boundary_circles_on_sphere(cat):
    # both boundary circles lie on the unit sphere
    T = cat.constants.T
    for s in (T, -T):
        for th in np.linspace(0.0, 2.0 * np.pi, 17):
            p = geometry.geometry_at(cat, s, th).x
            assert abs(p @ p - 1.0) <= 1e-12


def test_disk_boundary_on_sphere(dsk):
    for th in np.linspace(0.0, 2.0 * np.pi, 9):
        p = geometry.geometry_at(dsk, 1.0, th).x
        assert abs(p @ p - 1.0) <= 1e-15


def test_frame_orthonormal(cat):
    rng = np.random.default_rng(3)
    T = cat.constants.T
    for _ in range(25):
        s = T * (2.0 * rng.random() - 1.0)
        th = 2.0 * np.pi * rng.random()
        g = geometry.geometry_at(cat, s, th)
        for u in (g.e1, g.e2, g.N):
            assert abs(u @ u - 1.0) <= 1e-14
        assert abs(g.e1 @ g.e2) <= 1e-14
        assert abs(g.e1 @ g.N) <= 1e-14
        assert abs(g.e2 @ g.N) <= 1e-14
        # minimal: trace-free shape operator
        assert abs(g.h[0, 0] + g.h[1, 1]) <= 1e-14
        assert abs(g.h[0, 1]) <= 1e-15
        assert g.rho2 > 0.0


def test_normal_component_closed_forms(cat):
    s, th = 0.7, 1.3
    assert geometry.normal_component(cat, (0, 0, 1), s, th) == pytest.approx(
        -math.tanh(s), abs=1e-15)
    assert geometry.normal_component(cat, (1, 0, 0), s, th) == pytest.approx(
        math.cos(th) / math.cosh(s), abs=1e-15)
    assert geometry.normal_component(cat, (0, 1, 0), s, th) == pytest.approx(
        math.sin(th) / math.cosh(s), abs=1e-15)


def test_normal_component_vectorized(cat, dsk):
    S = np.linspace(-1.0, 1.0, 11)
    TH = np.zeros(11)
    out = geometry.normal_component(cat, (0.0, 0.0, 1.0), S, TH)
    assert out.shape == (11,)
    assert np.allclose(out, -np.tanh(S), atol=1e-15)
    assert geometry.normal_component(dsk, (0.3, 0.4, 2.0), 0.5, 0.1) == 2.0


def test_support_function(cat, dsk):
    T = cat.constants.T
    a = cat.constants.a
    assert abs(geometry.support_function(cat, T)) <= 1e-15
    assert abs(geometry.support_function(cat, -T)) <= 1e-15
    assert geometry.support_function(cat, 0.0) == pytest.approx(a, abs=1e-15)
    S = np.linspace(-T, T, 101)
    xi = geometry.support_function(cat, S)
    assert np.all(xi >= -1e-15)
    assert geometry.support_function(dsk, 0.5) == 0.0


def test_domain_check(cat, dsk):
    with pytest.raises(ValueError):
        geometry.geometry_at(cat, 2.0 * cat.constants.T, 0.0)
    with pytest.raises(ValueError):
        geometry.support_function(dsk, 1.5)


def test_area_and_length_closed_forms(cat):
    T, a = cat.constants.T, cat.constants.a
    got = geometry.area_and_boundary_length(cat)
    area = 2.0 * np.pi * a * a * (T + math.sinh(T) * math.cosh(T))
    length = 4.0 * np.pi / T
    assert abs(got["area"] - area) <= 1e-10
    assert abs(got["length"] - length) <= 1e-10
    assert abs(area - oracles.AREA_CLOSED) <= 1e-12
    assert abs(length - oracles.LENGTH_CLOSED) <= 1e-12
    # the balancing identity
    assert abs(2.0 * got["area"] - got["length"]) <= 1e-10


def test_disk_area_and_length(dsk):
    got = geometry.area_and_boundary_length(dsk)
    assert abs(got["area"] - math.pi) <= 1e-12
    assert abs(got["length"] - 2.0 * math.pi) <= 1e-12
