"""Self-adjoint boundary conditions and their parity-conjugation symmetry.

Two families exhaust the self-adjoint restrictions of the limit-circle
maximal operator: separated conditions (one angle per endpoint) and mixed
conditions (a unimodular real matrix with a phase coupling the endpoints).
The symmetry decision is an exact dichotomy: separated conditions commute
with the parity-conjugation operator iff the angles sum to 0 or pi, mixed
ones iff the phase is 0 or pi and the matrix diagonal is equal.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainConditionError
from .functionals import BoundaryFunctionals, GluedFunction, build_glued, transform_parity
from .reference import ReferencePair

ANGLE_SLACK = 1e-12
DET_SLACK = 1e-12


@dataclass(frozen=True)
class SeparatedBC:
    """alpha_1(f) cos(alpha) = alpha_2(f) sin(alpha) at -inf, same with beta at +inf."""

    alpha: float
    beta: float

    def __post_init__(self):
        for name, val in (("alpha", self.alpha), ("beta", self.beta)):
            if not 0.0 <= val < math.pi:
                raise ValueError(f"{name} must lie in [0, pi), got {val!r}")


@dataclass(frozen=True)
class MixedBC:
    """(b1, b2) = e^{i phi} [[a, b], [c, d]] (a1, a2) with real ad - bc = 1."""

    phi: float
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ValueError(f"phi must lie in [0, 2*pi), got {self.phi!r}")
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > DET_SLACK:
            raise ValueError(f"ad - bc must equal 1, got {det!r}")

    @property
    def matrix(self) -> np.ndarray:
        return cmath.exp(1j * self.phi) * np.array(
            [[self.a, self.b], [self.c, self.d]], dtype=complex
        )


class PTReason(enum.Enum):
    ANGLES_SUM_ZERO_OR_PI = "angles-sum-zero-or-pi"
    MATRIX_FORM_MATCHED = "matrix-form-matched"
    VIOLATION = "violation"


@dataclass(frozen=True)
class PTVerdict:
    symmetric: bool
    reason: PTReason

    def __post_init__(self):
        ok = (self.reason is PTReason.VIOLATION) != self.symmetric
        if not ok:
            raise ValueError("verdict reason inconsistent with the symmetric flag")


def is_pt_symmetric_separated(bc: SeparatedBC) -> PTVerdict:
    """Symmetric iff alpha + beta is 0 or pi (within representation slack)."""
    s = bc.alpha + bc.beta
    if abs(s) <= ANGLE_SLACK or abs(s - math.pi) <= ANGLE_SLACK:
        return PTVerdict(True, PTReason.ANGLES_SUM_ZERO_OR_PI)
    return PTVerdict(False, PTReason.VIOLATION)


def is_pt_symmetric_mixed(bc: MixedBC) -> PTVerdict:
    """Symmetric iff phi in {0, pi} and a = d (then a^2 - bc = 1 follows)."""
    phase_ok = min(abs(bc.phi), abs(bc.phi - math.pi), abs(bc.phi - 2.0 * math.pi)) <= ANGLE_SLACK
    if phase_ok and abs(bc.a - bc.d) <= ANGLE_SLACK:
        return PTVerdict(True, PTReason.MATRIX_FORM_MATCHED)
    return PTVerdict(False, PTReason.VIOLATION)


def is_pt_symmetric(bc) -> PTVerdict:
    if isinstance(bc, SeparatedBC):
        return is_pt_symmetric_separated(bc)
    if isinstance(bc, MixedBC):
        return is_pt_symmetric_mixed(bc)
    raise TypeError(f"unsupported boundary condition {type(bc).__name__}")


def separated_residual(bf: BoundaryFunctionals, bc: SeparatedBC) -> tuple[float, float]:
    """(|a1 cos(alpha) - a2 sin(alpha)|, |b1 cos(beta) - b2 sin(beta)|)."""
    left = abs(bf.a1 * math.cos(bc.alpha) - bf.a2 * math.sin(bc.alpha))
    right = abs(bf.b1 * math.cos(bc.beta) - bf.b2 * math.sin(bc.beta))
    return float(left), float(right)


def mixed_residual(bf: BoundaryFunctionals, bc: MixedBC) -> float:
    """Euclidean norm of (b1, b2) - e^{i phi} [[a, b], [c, d]] (a1, a2)."""
    diff = bf.beta_vec - bc.matrix @ bf.alpha_vec
    return float(np.linalg.norm(diff))


def bc_residual(bf: BoundaryFunctionals, bc) -> float:
    """Single-number membership residual for either family."""
    if isinstance(bc, SeparatedBC):
        return max(separated_residual(bf, bc))
    if isinstance(bc, MixedBC):
        return mixed_residual(bf, bc)
    raise TypeError(f"unsupported boundary condition {type(bc).__name__}")


def pt_domain_check(bf: BoundaryFunctionals, bc, tol: float = 1e-8) -> float:
    """Residual of the parity image of an in-domain function against the
    same boundary condition; zero for symmetric conditions, bounded away
    from zero on the counterexample constructions otherwise.

    Raises DomainConditionError when bf itself violates the condition:
    the check is meaningless off the domain.
    """
    own = bc_residual(bf, bc)
    scale = float(np.max(np.abs(bf.as_array()))) + 1e-300
    if own > tol * max(1.0, scale):
        raise DomainConditionError(
            f"input functionals violate the boundary condition (residual {own:.3g})"
        )
    return bc_residual(transform_parity(bf), bc)


def glued_with_functionals(ref: ReferencePair, a1, a2, b1, b2) -> GluedFunction:
    """Glued function realizing the prescribed functional quadruple."""
    return build_glued(ref, left=(-a2, a1), right=(-b2, b1))


def counterexample_separated(ref: ReferencePair, bc: SeparatedBC) -> GluedFunction:
    """In-domain probe whose parity image violates H_{alpha,beta} unless
    alpha + beta is 0 or pi; its parity-image residual is |sin(alpha+beta)|."""
    return glued_with_functionals(
        ref,
        math.sin(bc.alpha), math.cos(bc.alpha),
        math.sin(bc.beta), math.cos(bc.beta),
    )


def counterexample_mixed(ref: ReferencePair, bc: MixedBC) -> tuple[GluedFunction, GluedFunction]:
    """In-domain probe pair spanning the alpha-coordinates (1,0) and (0,1).

    Their parity images stay in dom H_B for every in-domain f exactly when
    the matrix has the symmetric form; otherwise at least one probe image
    has a nonzero membership residual.
    """
    ph = cmath.exp(1j * bc.phi)
    y = glued_with_functionals(ref, 1.0, 0.0, bc.a * ph, bc.c * ph)
    z = glued_with_functionals(ref, 0.0, 1.0, bc.b * ph, bc.d * ph)
    return y, z


def predicted_parity_residual(bc, probe: str = "y") -> float:
    """Closed-form parity-image residual of the counterexample probes."""
    if isinstance(bc, SeparatedBC):
        return abs(math.sin(bc.alpha + bc.beta))
    ph2 = cmath.exp(2j * bc.phi)
    if probe == "y":
        vec = (1.0 - ph2 * (bc.a * bc.a - bc.b * bc.c), -ph2 * bc.c * (bc.a - bc.d))
    else:
        vec = (ph2 * bc.b * (bc.a - bc.d), 1.0 - ph2 * (bc.d * bc.d - bc.b * bc.c))
    return float(np.linalg.norm(vec))


def random_domain_glued(ref: ReferencePair, bc, rng) -> GluedFunction:
    """Random glued function projected into dom H of the given condition.

    Separated: functionals t_l (sin a, cos a) at -inf and t_r (sin b, cos b)
    at +inf span the null space of the two constraints. Mixed: a random
    alpha-vector with beta-vector = B alpha.
    """
    if isinstance(bc, SeparatedBC):
        t_l = complex(rng.normal(), rng.normal())
        t_r = complex(rng.normal(), rng.normal())
        return glued_with_functionals(
            ref,
            t_l * math.sin(bc.alpha), t_l * math.cos(bc.alpha),
            t_r * math.sin(bc.beta), t_r * math.cos(bc.beta),
        )
    if isinstance(bc, MixedBC):
        avec = rng.normal(size=2) + 1j * rng.normal(size=2)
        bvec = bc.matrix @ avec
        return glued_with_functionals(ref, avec[0], avec[1], bvec[0], bvec[1])
    raise TypeError(f"unsupported boundary condition {type(bc).__name__}")
