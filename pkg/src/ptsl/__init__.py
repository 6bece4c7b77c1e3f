"""Spectral toolkit for the even anharmonic operator family on the line.

Realizes the self-adjoint operators attached to -y'' + x^(4n+2) y (limit
point at both infinities: a single operator) and -y'' - x^(4n+4) y (limit
circle: a two-parameter family fixed by boundary conditions at infinity),
decides which boundary conditions commute with the parity-conjugation
symmetry, computes discrete spectra, and classifies eigenvalues by their
sign in the indefinite inner product int f(x) conj(g(-x)) dx.
"""

from .potential import (
    Branch,
    PotentialSpec,
    SampledFunction,
    apply_parity,
    apply_time_reversal,
    eval_potential,
    krein_inner,
)

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "PotentialSpec",
    "SampledFunction",
    "apply_parity",
    "apply_time_reversal",
    "eval_potential",
    "krein_inner",
    "__version__",
]
