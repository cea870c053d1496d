"""Generalized q-deformed oscillator algebras and their q-Hermite families.

Submodules
----------
qnum          q-shifted factorials and basic hypergeometric series
oscillator    structure functions, Fock-space operators, self-adjointness
polynomials   recurrence, explicit and hypergeometric evaluation routes
measures      discrete orthogonality measures and position spectra
coherent      annihilation-operator eigenstates and generating functions
suites        verification suites used by the command line
cli           ``qdeform`` command-line entry point
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    ConvergenceWarning,
    DomainError,
    QDeformError,
    RestrictionError,
    TruncationError,
    UnknownPreset,
)
from .kernels import BACKEND
from .oscillator import DeformationParams, preset
from .polynomials import PolynomialFamily

__all__ = [
    "BACKEND",
    "ConvergenceError",
    "ConvergenceWarning",
    "DeformationParams",
    "DomainError",
    "PolynomialFamily",
    "QDeformError",
    "RestrictionError",
    "TruncationError",
    "UnknownPreset",
    "__version__",
    "preset",
]
