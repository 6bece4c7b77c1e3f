"""Potentials, parity / time-reversal operators and the indefinite inner product.

The two operator families share the form -y'' + q(x) y with an even
polynomial potential: q(x) = x^(4n+2) (limit point at both infinities) or
q(x) = -x^(4n+4) (limit circle at both infinities). Functions are carried
as (value, derivative) samples on a grid symmetric about the origin, with
optional phase-amplitude tails, so that parity acts as an exact sample
rearrangement.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .errors import GridSymmetryError, TailError
from .tails import TailRep, product_integral, tail_eval


class Branch(enum.Enum):
    LIMIT_POINT = "lp"
    LIMIT_CIRCLE = "lc"


@dataclass(frozen=True)
class PotentialSpec:
    """Which member of the even family: exponent index n and branch."""

    n: int
    branch: Branch

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.branch, Branch):
            raise ValueError(f"branch must be a Branch, got {self.branch!r}")

    @property
    def power(self) -> int:
        """Exponent of |x| in the potential."""
        return 4 * self.n + 2 if self.branch is Branch.LIMIT_POINT else 4 * self.n + 4

    @property
    def sign(self) -> float:
        """Sign of the potential: +1 confining, -1 inverted."""
        return 1.0 if self.branch is Branch.LIMIT_POINT else -1.0

    @property
    def is_limit_circle(self) -> bool:
        return self.branch is Branch.LIMIT_CIRCLE


def eval_potential(spec: PotentialSpec, x):
    """q(x): x^(4n+2) on the limit-point branch, -x^(4n+4) on limit circle."""
    return spec.sign * np.power(x, spec.power)


@dataclass
class SampledFunction:
    """(value, derivative) samples on a symmetric grid, plus optional tails.

    grid     strictly increasing, exactly symmetric about 0
    y, dy    complex (or real) values and derivatives at the grid points
    tail_left, tail_right
             optional phase-amplitude descriptors beyond the grid
    d2       optional second derivatives at the nodes; when present they
             sharpen derivative interpolation between nodes
    """

    grid: np.ndarray
    y: np.ndarray
    dy: np.ndarray
    tail_left: TailRep | None = None
    tail_right: TailRep | None = None
    d2: np.ndarray | None = None
    _spl: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.y = np.asarray(self.y)
        self.dy = np.asarray(self.dy)
        if self.grid.ndim != 1 or self.grid.size < 2:
            raise ValueError("grid must be a 1-d array with at least two points")
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        _require_symmetric(self.grid)
        if self.y.shape != self.grid.shape or self.dy.shape != self.grid.shape:
            raise ValueError("values and derivatives must match the grid shape")
        if not (np.all(np.isfinite(self.y)) and np.all(np.isfinite(self.dy))):
            raise ValueError("samples must be finite")
        if self.d2 is not None:
            self.d2 = np.asarray(self.d2)

    @property
    def is_real(self) -> bool:
        return not (np.iscomplexobj(self.y) or np.iscomplexobj(self.dy))

    def _splines(self):
        if "y" not in self._spl:
            self._spl["y"] = _hermite(self.grid, self.y, self.dy)
            if self.d2 is not None:
                self._spl["dy"] = _hermite(self.grid, self.dy, self.d2)
            else:
                self._spl["dy"] = None
        return self._spl["y"], self._spl["dy"]

    def eval(self, x):
        """(y, y') at abscissae x, using samples inside the grid and tails
        beyond it; raises TailError where neither representation applies."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        cplx = np.iscomplexobj(self.y) or np.iscomplexobj(self.dy)
        for t in (self.tail_left, self.tail_right):
            if t is not None and (np.iscomplexobj(np.asarray(t.a)) or np.iscomplexobj(np.asarray(t.b))):
                cplx = True
        dtype = complex if cplx else float
        yv = np.empty(xs.shape, dtype=dtype)
        dv = np.empty(xs.shape, dtype=dtype)
        lo, hi = self.grid[0], self.grid[-1]
        inside = (xs >= lo) & (xs <= hi)
        if np.any(inside):
            spl_y, spl_dy = self._splines()
            yv[inside] = spl_y(xs[inside])
            if spl_dy is not None:
                dv[inside] = spl_dy(xs[inside])
            else:
                dv[inside] = spl_y.derivative()(xs[inside])
        right = xs > hi
        if np.any(right):
            if self.tail_right is None:
                raise TailError(f"x = {float(xs[right][0]):.6g} beyond grid and no right tail")
            yv[right], dv[right] = tail_eval(self.tail_right, xs[right])
        left = xs < lo
        if np.any(left):
            if self.tail_left is None:
                raise TailError(f"x = {float(xs[left][0]):.6g} beyond grid and no left tail")
            yv[left], dv[left] = tail_eval(self.tail_left, xs[left])
        if np.ndim(x):
            return yv, dv
        return yv[0], dv[0]


def _require_symmetric(grid: np.ndarray):
    if grid.size and not np.array_equal(grid, -grid[::-1]):
        raise GridSymmetryError("grid is not exactly symmetric about 0")


def _hermite(grid, vals, der):
    if np.iscomplexobj(vals) or np.iscomplexobj(der):
        re = CubicHermiteSpline(grid, np.real(vals), np.real(der))
        im = CubicHermiteSpline(grid, np.imag(vals), np.imag(der))
        return lambda x, re=re, im=im: re(x) + 1j * im(x)

    spl = CubicHermiteSpline(grid, vals, der)
    return spl


def apply_parity(f: SampledFunction) -> SampledFunction:
    """(Pf)(x) = f(-x); an exact rearrangement of the stored samples."""
    _require_symmetric(f.grid)
    return SampledFunction(
        grid=f.grid.copy(),
        y=f.y[::-1].copy(),
        dy=(-f.dy[::-1]).copy(),
        tail_left=_mirror_tail(f.tail_right),
        tail_right=_mirror_tail(f.tail_left),
        d2=None if f.d2 is None else f.d2[::-1].copy(),
    )


def _mirror_tail(t: TailRep | None) -> TailRep | None:
    if t is None:
        return None
    return replace(t, mirrored=not t.mirrored)


def apply_time_reversal(f: SampledFunction) -> SampledFunction:
    """(Tf)(x) = conj(f(x)); pointwise conjugation of samples and tails."""
    return SampledFunction(
        grid=f.grid.copy(),
        y=np.conj(f.y),
        dy=np.conj(f.dy),
        tail_left=None if f.tail_left is None else f.tail_left.conjugated(),
        tail_right=None if f.tail_right is None else f.tail_right.conjugated(),
        d2=None if f.d2 is None else np.conj(f.d2),
    )


def _common_grid_values(f: SampledFunction, g: SampledFunction):
    """Values of f and g on the union grid of their common coverage."""
    if np.array_equal(f.grid, g.grid):
        return f.grid, f.y, g.y
    lo = max(f.grid[0], g.grid[0])
    hi = min(f.grid[-1], g.grid[-1])
    if hi <= lo:
        raise ValueError("sample grids do not overlap")
    grid = np.union1d(f.grid, g.grid)
    grid = grid[(grid >= lo) & (grid <= hi)]
    fy, _ = f.eval(grid)
    gy, _ = g.eval(grid)
    return grid, fy, gy


def hilbert_inner(f: SampledFunction, g: SampledFunction) -> complex:
    """int f(x) conj(g(x)) dx: trapezoid on the grid plus tail integrals."""
    grid, fy, gy = _common_grid_values(f, g)
    val = complex(np.trapezoid(fy * np.conj(gy), grid))
    if f.tail_right is not None and g.tail_right is not None:
        val += product_integral(f.tail_right, g.tail_right, lower=float(grid[-1]))
    if f.tail_left is not None and g.tail_left is not None:
        # Substitute x -> -x: integral over (-inf, grid[0]] of the pair of
        # mirrored reps equals the same-side product integral.
        val += product_integral(f.tail_left, g.tail_left, lower=float(-grid[0]))
    return val


def l2_norm(f: SampledFunction) -> float:
    return float(np.sqrt(np.real(hilbert_inner(f, f))))


def krein_inner(f: SampledFunction, g: SampledFunction) -> complex:
    """Indefinite inner product int f(x) conj(g(-x)) dx.

    Positive on even functions, negative on odd ones; hermitian up to
    quadrature error.
    """
    return hilbert_inner(f, apply_parity(g))
