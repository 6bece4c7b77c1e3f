"""Boundary functionals at infinity and glued test functions.

A maximal-domain function f has four coordinates at infinity: the bracket
limits of the reference pair against f at each end,

    a1 = lim_{x->-inf}[w1, f]_x,   a2 = lim_{x->-inf}[w2, f]_x,
    b1 = lim_{x->+inf}[w1, f]_x,   b2 = lim_{x->+inf}[w2, f]_x.

Every self-adjoint boundary condition is a linear constraint on these.
Glued functions prescribe them exactly: combinations of (w1, w2) far left
and far right, bridged by a quintic smoothstep so the result stays twice
continuously differentiable with square-integrable image.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tails
from .errors import TailError
from .ode import SolutionTrace, bracket_limit_sampled
from .potential import SampledFunction, eval_potential
from .reference import ReferencePair


@dataclass(frozen=True)
class BoundaryFunctionals:
    """The quadruple (a1, a2, b1, b2); real for real-valued functions."""

    a1: complex
    a2: complex
    b1: complex
    b2: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.a1, self.a2, self.b1, self.b2], dtype=complex)

    @property
    def alpha_vec(self) -> np.ndarray:
        return np.array([self.a1, self.a2], dtype=complex)

    @property
    def beta_vec(self) -> np.ndarray:
        return np.array([self.b1, self.b2], dtype=complex)

    def max_abs_diff(self, other: "BoundaryFunctionals") -> float:
        return float(np.max(np.abs(self.as_array() - other.as_array())))


def _tails_of(f):
    return getattr(f, "tail_left", None), getattr(f, "tail_right", None)


def functionals(f, ref: ReferencePair, tol: float = 1e-8, method: str = "auto") -> BoundaryFunctionals:
    """Measure (a1, a2, b1, b2) of f against the reference pair.

    method='analytic' reads the limits off the phase-amplitude coefficients
    (requires tails on both sides); method='sampled' extracts each limit by
    period-averaged bracket sampling with a Cauchy stop rule and raises
    ConvergenceError if the averages have not settled below the cap;
    'auto' prefers the analytic route whenever tails are available.
    """
    if isinstance(f, GluedFunction):
        f = f.samples
    tl, tr = _tails_of(f)
    if method == "auto":
        method = "analytic" if (tl is not None and tr is not None) else "sampled"
    if method == "analytic":
        if tl is None or tr is None:
            raise TailError("analytic functionals need phase-amplitude tails on both sides")
        return BoundaryFunctionals(
            a1=tails.bracket_limit(ref.w1.tail_left, tl),
            a2=tails.bracket_limit(ref.w2.tail_left, tl),
            b1=tails.bracket_limit(ref.w1.tail_right, tr),
            b2=tails.bracket_limit(ref.w2.tail_right, tr),
        )
    if method == "sampled":
        x_from = max(1.0, 0.55 * ref.x_direct)
        return BoundaryFunctionals(
            a1=bracket_limit_sampled(ref.w1, f, -1, tol, x_from=x_from, cap=ref.X_inf),
            a2=bracket_limit_sampled(ref.w2, f, -1, tol, x_from=x_from, cap=ref.X_inf),
            b1=bracket_limit_sampled(ref.w1, f, +1, tol, x_from=x_from, cap=ref.X_inf),
            b2=bracket_limit_sampled(ref.w2, f, +1, tol, x_from=x_from, cap=ref.X_inf),
        )
    raise ValueError(f"unknown method {method!r}")


def transform_parity(bf: BoundaryFunctionals) -> BoundaryFunctionals:
    """Functionals of the parity image: (a1, a2, b1, b2) -> (b1, -b2, a1, -a2)."""
    return BoundaryFunctionals(a1=bf.b1, a2=-bf.b2, b1=bf.a1, b2=-bf.a2)


def transform_time_reversal(bf: BoundaryFunctionals) -> BoundaryFunctionals:
    """Endpoint-swapping conjugation law: -> (conj b1, -conj b2, conj a1, -conj a2).

    Composition of `transform_parity` with componentwise conjugation; on
    real quadruples it coincides with `transform_parity`. Involutive.
    """
    return BoundaryFunctionals(
        a1=np.conj(bf.b1), a2=-np.conj(bf.b2), b1=np.conj(bf.a1), b2=-np.conj(bf.a2)
    )


def transform_conjugation(bf: BoundaryFunctionals) -> BoundaryFunctionals:
    """Functionals of the pointwise conjugate: componentwise conjugation.

    Conjugating a function conjugates every bracket against the real
    reference solutions without moving the endpoints.
    """
    return BoundaryFunctionals(
        a1=np.conj(bf.a1), a2=np.conj(bf.a2), b1=np.conj(bf.b1), b2=np.conj(bf.b2)
    )


@dataclass(frozen=True)
class GluedFunction:
    """c_l1*w1 + c_l2*w2 far left, c_r1*w1 + c_r2*w2 far right, blended."""

    left_coeffs: tuple
    right_coeffs: tuple
    blend_width: float
    samples: SampledFunction

    @property
    def predicted_functionals(self) -> BoundaryFunctionals:
        (cl1, cl2), (cr1, cr2) = self.left_coeffs, self.right_coeffs
        return BoundaryFunctionals(a1=cl2, a2=-cl1, b1=cr2, b2=-cr1)


def _smoothstep(u):
    """Quintic smoothstep: 0 -> 1 on [0, 1] with vanishing first and second
    derivatives at both ends; returns (s, s', s'')."""
    u = np.clip(u, 0.0, 1.0)
    s = u**3 * (10.0 - 15.0 * u + 6.0 * u**2)
    ds = 30.0 * u**2 * (1.0 - 2.0 * u + u**2)
    d2s = 60.0 * u * (1.0 - 3.0 * u + 2.0 * u**2)
    return s, ds, d2s


def build_glued(ref: ReferencePair, left, right, blend_width: float = 2.0) -> GluedFunction:
    """Glue the prescribed far-left and far-right reference combinations.

    The two global solutions L = c_l1 w1 + c_l2 w2 and R = c_r1 w1 + c_r2 w2
    are joined by f = L + s(x) (R - L) with a quintic smoothstep supported
    on (-blend_width/2, blend_width/2), so f equals L (resp. R) exactly
    outside the blend and is C^2 everywhere.
    """
    cl1, cl2 = complex(left[0]), complex(left[1])
    cr1, cr2 = complex(right[0]), complex(right[1])
    half = blend_width / 2.0
    if ref.x_direct <= half:
        raise ValueError("blend region exceeds the directly sampled range")

    grid = np.union1d(ref.w1.xs, ref.w2.xs)
    w1y, w1dy = ref.w1.eval(grid)
    w2y, w2dy = ref.w2.eval(grid)
    q = eval_potential(ref.spec, grid)
    w1d2, w2d2 = q * w1y, q * w2y

    def combo(c1, c2):
        return (c1 * w1y + c2 * w2y, c1 * w1dy + c2 * w2dy, c1 * w1d2 + c2 * w2d2)

    ly, ldy, ld2 = combo(cl1, cl2)
    ry, rdy, rd2 = combo(cr1, cr2)
    s, ds, d2s = _smoothstep((grid + half) / blend_width)
    ds = ds / blend_width
    d2s = d2s / blend_width**2

    fy = ly + s * (ry - ly)
    fdy = ldy + ds * (ry - ly) + s * (rdy - ldy)
    fd2 = ld2 + d2s * (ry - ly) + 2.0 * ds * (rdy - ldy) + s * (rd2 - ld2)

    real = all(np.imag(c) == 0.0 for c in (cl1, cl2, cr1, cr2))
    if real:
        fy, fdy, fd2 = np.real(fy), np.real(fdy), np.real(fd2)

    def cast(c):
        return float(np.real(c)) if real else c

    tail_left = tails.combine_tails(
        [ref.w1.tail_left, ref.w2.tail_left], [cast(cl1), cast(cl2)]
    )
    tail_right = tails.combine_tails(
        [ref.w1.tail_right, ref.w2.tail_right], [cast(cr1), cast(cr2)]
    )
    samples = SampledFunction(
        grid=grid, y=fy, dy=fdy, d2=fd2, tail_left=tail_left, tail_right=tail_right
    )
    return GluedFunction(
        left_coeffs=(cl1, cl2),
        right_coeffs=(cr1, cr2),
        blend_width=float(blend_width),
        samples=samples,
    )
