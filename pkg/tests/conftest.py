import os

import numpy as np
import pytest

from fbms import geometry, spectra, verify

AXES = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "slow: oracle regeneration, opt in with FBMS_SLOW=1")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("FBMS_SLOW"):
        return
    skip = pytest.mark.skip(reason="set FBMS_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def cat():
    return geometry.catenoid()


@pytest.fixture(scope="session")
def dsk():
    return geometry.disk()


@pytest.fixture(scope="session")
def robin_cat(cat):
    return spectra.robin_spectrum(cat)


@pytest.fixture(scope="session")
def robin_disk(dsk):
    return spectra.robin_spectrum(dsk)


@pytest.fixture(scope="session")
def morse_cat(cat):
    return spectra.morse_index(cat)


@pytest.fixture(scope="session")
def morse_disk(dsk):
    return spectra.morse_index(dsk)


@pytest.fixture(scope="session")
def dirichlet_cat(cat):
    return spectra.dirichlet_spectrum(cat)


@pytest.fixture(scope="session")
def nl_cat(cat):
    return spectra.nonlocal_spectrum(cat)


@pytest.fixture(scope="session")
def steklov_lap(cat):
    return spectra.steklov_spectrum(cat, operator="laplacian", modes=range(4))


@pytest.fixture(scope="session")
def steklov_jac(cat):
    return spectra.steklov_spectrum(cat, operator="jacobi", modes=range(2))


@pytest.fixture(scope="session")
def pairing_cat(cat):
    return spectra.pairing_residuals(cat)


@pytest.fixture(scope="session")
def fsn_reports(cat, dsk):
    reps = {("catenoid",) + v: verify.check_fsn(cat, v) for v in AXES}
    reps[("disk", 0.0, 0.0, 1.0)] = verify.check_fsn(dsk, (0, 0, 1), n=1024)
    return reps


@pytest.fixture(scope="session")
def corpus_reports(cat):
    out = []
    for i, (name, f) in enumerate(verify.ipp_corpus()):
        out.append(verify.check_ipp(cat, AXES[i % 3], f, n=1024, name=name))
    return out


@pytest.fixture(scope="session")
def lemma_reports(cat, dsk):
    reps = {}
    for v in AXES:
        reps[("catenoid",) + v] = verify.check_lemma63(cat, v=v)
        reps[("disk",) + v] = verify.check_lemma63(dsk, v=v)
    return reps


@pytest.fixture(scope="session")
def q1xi_report(cat):
    return verify.check_q1xi(cat)
