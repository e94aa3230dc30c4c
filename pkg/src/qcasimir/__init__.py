"""qcasimir: q-series special functions and spectral decomposition toolkit.

The package is organized bottom-up:

* ``qkernel`` -- q-shifted factorials, theta products, and the 3-2
  basic-hypergeometric series with termination/snap handling.
* ``repcore`` -- the five families of *-algebra representations, generator
  actions on weighted shift bases, and the coproduct Casimir action.
* ``bigqjacobi`` -- scalar spectral functions on circle-plus-masses measures.
* ``bigqjacobipoly`` -- the terminating polynomial family with Jackson
  q-integral orthogonality and its q-difference equation.
* ``vvbigqjacobi`` -- the two-component (matrix-weight) analog.
* ``decompose`` -- tridiagonalization of the coupled Casimir on graded
  subspaces, predicted coefficients, and spectral catalogs.
* ``cli`` -- command line front end (``eval``, ``verify``, ``spectrum``).
"""

from __future__ import annotations

from .bigqjacobi import BigQJacobiParams, SpectralMeasure, spectral_measure
from .decompose import (
    TPP,
    Catalog5,
    Tmix,
    Tprime,
    jacobi_operator,
    predicted_coeffs,
    spectrum_catalog,
    truncated_spectrum_check,
)
from .qkernel import QContext
from .vvbigqjacobi import VVParams, gram_psi, psi_big

__all__ = [
    "BigQJacobiParams",
    "Catalog5",
    "QContext",
    "SpectralMeasure",
    "TPP",
    "Tmix",
    "Tprime",
    "VVParams",
    "gram_psi",
    "jacobi_operator",
    "predicted_coeffs",
    "psi_big",
    "spectral_measure",
    "spectrum_catalog",
    "truncated_spectrum_check",
    "__version__",
]

__version__ = "0.1.0"
