"""Spectral laboratory for free boundary minimal surfaces in the unit ball.

Robin, Dirichlet, Steklov, and boundary-pairing spectra of the second
variation on the critical catenoid and the flat disk, with independent
verification of the underlying integral and pointwise identities.
"""

from .geometry import (
    catenoid,
    disk,
    geometry_at,
    normal_component,
    support_function,
    area_and_boundary_length,
)
from .discretize import ModeProblem, DiscreteOperator, assemble, apply_J
from .eigensolve import (
    SpectrumResult,
    sym_eig,
    sym_generalized_eig,
    count_below,
)
from .spectra import (
    HarmonicBasis,
    NonlocalSpectrum,
    robin_spectrum,
    radial_robin_spectrum,
    dirichlet_spectrum,
    steklov_spectrum,
    morse_index,
    jharmonic_basis,
    nonlocal_spectrum,
    pairing_residuals,
    xi_orthogonality,
)
from .verify import (
    IdentityReport,
    check_fsn,
    check_ipp,
    check_lemma63,
    check_q1xi,
    ipp_corpus,
)

__version__ = "0.1.0"

__all__ = [
    "catenoid", "disk", "geometry_at", "normal_component",
    "support_function", "area_and_boundary_length",
    "ModeProblem", "DiscreteOperator", "assemble", "apply_J",
    "SpectrumResult", "sym_eig", "sym_generalized_eig", "count_below",
    "HarmonicBasis", "NonlocalSpectrum", "robin_spectrum",
    "radial_robin_spectrum", "dirichlet_spectrum", "steklov_spectrum",
    "morse_index", "jharmonic_basis", "nonlocal_spectrum",
    "pairing_residuals", "xi_orthogonality",
    "IdentityReport", "check_fsn", "check_ipp", "check_lemma63",
    "check_q1xi", "ipp_corpus",
    "__version__",
]
