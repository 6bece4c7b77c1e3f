"""Bidirectional integration of -y'' + q(x) y = lam*y and Wronskian brackets.

Direct adaptive stepping (Dormand-Prince 5(4), compiled kernel when
available) covers the region where the solution is representable sample by
sample; on the limit-circle branch the trace is continued past the switch
abscissa by a frozen-coefficient phase-amplitude tail, which is what makes
brackets at infinity computable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels, tails
from .errors import ConvergenceError, IntegrationOverflowError, TailError
from .potential import Branch, PotentialSpec, SampledFunction, eval_potential
from .tails import TailRep, X_INF_CAP

RENORM_THRESHOLD = 1e100


@dataclass
class SolutionTrace:
    """A solution of -y'' + q y = lam*y on an interval, tails optional.

    Values are stored at the accepted integrator nodes (ascending). When a
    limit-point integration was renormalized, `log_scale` holds the log of
    the common factor that was divided out; only ratios and Wronskians of
    such traces are meaningful.
    """

    spec: PotentialSpec
    lam: float
    xs: np.ndarray
    ys: np.ndarray
    dys: np.ndarray
    x_switch: float = math.inf
    tail_left: TailRep | None = None
    tail_right: TailRep | None = None
    log_scale: float = 0.0
    rtol: float = 1e-10
    x_inf: float | None = None
    grows: bool = False
    _spl: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.ys = np.asarray(self.ys)
        self.dys = np.asarray(self.dys)

    @property
    def coverage(self) -> tuple[float, float]:
        return float(self.xs[0]), float(self.xs[-1])

    def curvature(self, x, y):
        """y'' = (q - lam) y along the trace's own equation."""
        return (eval_potential(self.spec, x) - self.lam) * y

    def _splines(self):
        if "y" not in self._spl:
            from .potential import _hermite  # shared Hermite helper

            d2 = self.curvature(self.xs, self.ys)
            self._spl["y"] = _hermite(self.xs, self.ys, self.dys)
            self._spl["dy"] = _hermite(self.xs, self.dys, d2)
        return self._spl["y"], self._spl["dy"]

    def eval(self, x):
        """(y, y') at abscissae x from samples or tails."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        cplx = np.iscomplexobj(self.ys)
        for t in (self.tail_left, self.tail_right):
            if t is not None and (np.iscomplexobj(np.asarray(t.a)) or np.iscomplexobj(np.asarray(t.b))):
                cplx = True
        out_y = np.empty(xs.shape, dtype=complex if cplx else float)
        out_dy = np.empty_like(out_y)
        lo, hi = self.coverage
        inside = (xs >= lo) & (xs <= hi)
        if np.any(inside):
            spl_y, spl_dy = self._splines()
            out_y[inside] = spl_y(xs[inside])
            out_dy[inside] = spl_dy(xs[inside])
        right = xs > hi
        if np.any(right):
            if self.tail_right is None:
                raise TailError(f"x = {float(xs[right][0]):.6g} is beyond the trace (no right tail)")
            out_y[right], out_dy[right] = tails.tail_eval(self.tail_right, xs[right])
        left = xs < lo
        if np.any(left):
            if self.tail_left is None:
                raise TailError(f"x = {float(xs[left][0]):.6g} is beyond the trace (no left tail)")
            out_y[left], out_dy[left] = tails.tail_eval(self.tail_left, xs[left])
        if np.ndim(x):
            return out_y, out_dy
        return out_y[0], out_dy[0]

    @property
    def samples(self) -> SampledFunction:
        """The trace as a symmetric-grid sampled function (two-sided traces)."""
        d2 = self.curvature(self.xs, self.ys)
        return SampledFunction(
            grid=self.xs, y=self.ys, dy=self.dys,
            tail_left=self.tail_left, tail_right=self.tail_right, d2=d2,
        )

    def scaled(self, factor) -> "SolutionTrace":
        return replace(
            self,
            ys=self.ys * factor,
            dys=self.dys * factor,
            tail_left=None if self.tail_left is None else self.tail_left.scaled(factor),
            tail_right=None if self.tail_right is None else self.tail_right.scaled(factor),
            _spl={},
        )


def integrate_ivp(
    spec: PotentialSpec,
    lam: float,
    x0: float,
    y0,
    dy0,
    x_end: float,
    tol: float,
    *,
    store: bool = True,
    renorm: bool = False,
    fixed_step: float = 0.0,
    max_steps: int = 20_000_000,
) -> SolutionTrace:
    """Integrate the equation from (x0, y0, dy0) to x_end at local tolerance tol.

    Pure relative error control keeps the result exactly linear in the
    initial data. On the limit-point branch a growing solution that leaves
    the representable range raises IntegrationOverflowError naming the
    abscissa reached, unless `renorm=True`, in which case the pair is
    rescaled on the fly and the accumulated log factor recorded.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if x_end == x0:
        raise ValueError("x_end must differ from x0")

    if y0 == 0 and dy0 == 0:
        xs = np.array(sorted([x0, x_end]))
        z = np.zeros(2)
        return SolutionTrace(spec, float(lam), xs, z, z.copy(), rtol=tol)

    xs, ys, dys, log_scale, status, x_reached = _kernels.propagate(
        spec.power, spec.sign, lam, x0, y0, dy0, x_end, tol,
        atol=0.0, fixed_h=fixed_step, store=store,
        renorm_threshold=RENORM_THRESHOLD if renorm else 0.0,
        max_steps=max_steps,
    )
    if status == _kernels.STATUS_OVERFLOW:
        raise IntegrationOverflowError(x_reached)
    if status == _kernels.STATUS_MAX_STEPS:
        raise RuntimeError(f"step budget exhausted at x = {x_reached:.6g}")
    if status == _kernels.STATUS_STEP_UNDERFLOW:
        raise RuntimeError(f"step size underflow at x = {x_reached:.6g}")

    if xs[0] > xs[-1]:
        xs, ys, dys = xs[::-1].copy(), ys[::-1].copy(), dys[::-1].copy()
    return SolutionTrace(spec, float(lam), xs, ys, dys, log_scale=log_scale, rtol=tol)


def extend_phase_amplitude(trace: SolutionTrace, X_inf: float, tol: float) -> SolutionTrace:
    """Continue a limit-circle trace past the oscillatory switch point.

    The switch abscissa satisfies x^m >= 100*max(1, |lam|) and is pushed
    outward until the representation error budget of the corrected-momentum
    basis is below tol; beyond it the solution is carried by frozen
    phase-amplitude coefficients, valid out to X_inf and past it.
    """
    if not trace.spec.is_limit_circle:
        raise ValueError("phase-amplitude extension is only valid on the limit-circle branch")
    m = trace.spec.power
    lam = trace.lam
    budget = min(1e-11, 0.1 * tol)
    x_sw = tails.choose_switch(m, lam, budget)

    new = replace(trace, _spl={})
    lo, hi = trace.coverage

    if hi >= 0.0:
        if hi < x_sw:
            cont = integrate_ivp(trace.spec, lam, hi, *trace.eval(hi), x_sw, trace.rtol)
            new = _concat(new, cont, side=+1)
            hi = x_sw
        yv, dv = new.eval(hi)
        new.tail_right = tails.fit_tail(m, lam, hi, yv, dv, mirrored=False)
    if lo <= 0.0 and abs(lo) > 0.0:
        if abs(lo) < x_sw:
            cont = integrate_ivp(trace.spec, lam, lo, *trace.eval(lo), -x_sw, trace.rtol)
            new = _concat(new, cont, side=-1)
            lo = -x_sw
        yv, dv = new.eval(lo)
        new.tail_left = tails.fit_tail(m, lam, abs(lo), yv, dv, mirrored=True)

    new.x_switch = min(abs(lo), hi) if (lo < 0.0 < hi) else max(abs(lo), abs(hi))
    new.x_inf = float(X_inf)
    return new


def _concat(base: SolutionTrace, ext: SolutionTrace, side: int) -> SolutionTrace:
    if side > 0:
        keep = ext.xs > base.xs[-1]
        xs = np.concatenate([base.xs, ext.xs[keep]])
        ys = np.concatenate([base.ys, ext.ys[keep]])
        dys = np.concatenate([base.dys, ext.dys[keep]])
    else:
        keep = ext.xs < base.xs[0]
        xs = np.concatenate([ext.xs[keep], base.xs])
        ys = np.concatenate([ext.ys[keep], base.ys])
        dys = np.concatenate([ext.dys[keep], base.dys])
    return replace(base, xs=xs, ys=ys, dys=dys, _spl={})


def reflect_trace(trace: SolutionTrace, parity: int) -> SolutionTrace:
    """Extend a half-line trace on [0, X] to [-X, X] by exact parity.

    parity=+1 produces an even function, parity=-1 an odd one; the negative
    half is a rearrangement of the stored samples so the symmetry holds to
    floating-point equality.
    """
    if trace.xs[0] != 0.0:
        raise ValueError("reflection needs a half-line trace starting at 0")
    s = float(parity)
    xs = np.concatenate([-trace.xs[::-1][:-1], trace.xs])
    ys = np.concatenate([s * trace.ys[::-1][:-1], trace.ys])
    dys = np.concatenate([-s * trace.dys[::-1][:-1], trace.dys])
    tail_left = None
    if trace.tail_right is not None:
        tail_left = replace(trace.tail_right.scaled(s), mirrored=True)
    return replace(trace, xs=xs, ys=ys, dys=dys, tail_left=tail_left, _spl={})


def stitch_halves(right: SolutionTrace, left_source: SolutionTrace) -> SolutionTrace:
    """Join f on x >= 0 (from `right`) with f(x) = g(-x) for x <= 0.

    `left_source` is the half-line trace of g(t) = f(-t); both halves are
    resampled onto the union of their node sets so the resulting grid is
    exactly symmetric.
    """
    if right.xs[0] != 0.0 or left_source.xs[0] != 0.0:
        raise ValueError("stitching needs half-line traces starting at 0")
    half = np.union1d(right.xs, left_source.xs)
    ry, rdy = right.eval(half)
    gy, gdy = left_source.eval(half)
    xs = np.concatenate([-half[::-1][:-1], half])
    ys = np.concatenate([gy[::-1][:-1], ry])
    dys = np.concatenate([-gdy[::-1][:-1], rdy])
    tail_left = None
    if left_source.tail_right is not None:
        tail_left = replace(left_source.tail_right, mirrored=True)
    return replace(
        right, xs=xs, ys=ys, dys=dys, tail_left=tail_left,
        tail_right=right.tail_right, _spl={},
    )


def _eval_any(f, x):
    if isinstance(f, (SolutionTrace, SampledFunction)):
        return f.eval(x)
    raise TypeError(f"cannot evaluate object of type {type(f).__name__}")


def bracket(f, g, x) -> complex:
    """[f, g]_x = conj(f(x)) g'(x) - conj(f'(x)) g(x)."""
    fy, fdy = _eval_any(f, x)
    gy, gdy = _eval_any(g, x)
    return complex(np.conj(fy) * gdy - np.conj(fdy) * gy)


def _tail_of(f, side: int) -> TailRep | None:
    return (f.tail_right if side > 0 else f.tail_left)


def bracket_limit(f, g, side: int, tol: float = 1e-10, x_from: float | None = None,
                  cap: float = X_INF_CAP) -> complex:
    """Limit of [f, g]_x as x -> side*infinity.

    When both arguments carry phase-amplitude tails on the requested side
    the limit follows from the frozen coefficients. Otherwise the bracket
    is sampled outward, averaged over one local oscillation period, and the
    Aitken-accelerated averages must pass a Cauchy test below the cap.
    """
    tf, tg = _tail_of(f, side), _tail_of(g, side)
    if tf is not None and tg is not None:
        return tails.bracket_limit(tf, tg)
    return bracket_limit_sampled(f, g, side, tol, x_from=x_from, cap=cap)


def bracket_limit_sampled(f, g, side: int, tol: float = 1e-10,
                          x_from: float | None = None, cap: float = X_INF_CAP) -> complex:
    """Period-averaged Cauchy extraction of the bracket limit.

    Raises ConvergenceError reporting the residual oscillation when the
    accelerated averages have not settled by the cap (or by the end of the
    arguments' representable range).
    """
    m, lam = _osc_frame(f, g)
    nodes, weights = np.polynomial.legendre.leggauss(16)

    def period(x):
        p2 = max(x**m + lam, 0.25 * x**m, 1e-6)
        return math.pi / math.sqrt(p2)

    def reach(obj):
        lo, hi = (obj.coverage if isinstance(obj, SolutionTrace)
                  else (float(obj.grid[0]), float(obj.grid[-1])))
        if _tail_of(obj, side) is not None:
            return math.inf
        return hi if side > 0 else abs(lo)

    limit_x = min(cap, reach(f), reach(g))
    x = x_from if x_from is not None else max(1.0, min(2.0, 0.25 * limit_x))
    averages = []
    accel = []
    last_diff = math.inf
    while x * (1.0 + 1e-12) <= limit_x:
        t = period(x)
        pts = x + 0.5 * t * (nodes + 1.0)
        vals = np.array([bracket(f, g, float(p) * (1 if side > 0 else -1)) for p in pts])
        averages.append(complex(np.dot(weights, vals) / 2.0))
        if len(averages) >= 2:
            s1, s2 = averages[-2], averages[-1]
            last_diff = abs(s2 - s1)
            if len(averages) >= 3:
                s0 = averages[-3]
                den = (s2 - s1) - (s1 - s0)
                ait = s2 if abs(den) < 1e-300 else s2 - (s2 - s1) ** 2 / den
                accel.append(ait)
                if len(accel) >= 2 and abs(accel[-1] - accel[-2]) < tol:
                    return accel[-1]
            if last_diff < 0.01 * tol:
                return s2
        x = max(x * 1.25, x + t)
    raise ConvergenceError(
        f"bracket limit not Cauchy below x = {limit_x:g} (residual oscillation {last_diff:.3g})",
        residual=last_diff,
    )


def _osc_frame(f, g):
    for obj in (f, g):
        for t in (getattr(obj, "tail_right", None), getattr(obj, "tail_left", None)):
            if t is not None:
                return t.m, t.lam
    for obj in (f, g):
        spec = getattr(obj, "spec", None)
        if spec is not None:
            return spec.power, getattr(obj, "lam", 0.0)
    # Fall back to the generic quartic-frequency frame.
    return 8, 0.0


def ode_residual(trace: SolutionTrace, n_check: int = 200) -> float:
    """Max per-interval defect of the stored samples in their own equation.

    Each checked interval is re-integrated from its left node with an
    independent fixed-step RK4 and the mismatch at the right node, divided
    by the interval length and by (|lam| + max|q|) times the local solution
    magnitude, approximates |-y'' + (q - lam) y| / ((|lam| + max|q|) |y|)
    at the collocation points.
    """
    xs, ys, dys = trace.xs, trace.ys, trace.dys
    if len(xs) < 2:
        return 0.0
    qmax = float(np.max(np.abs(eval_potential(trace.spec, xs))))
    scale = abs(trace.lam) + max(qmax, 1.0)
    idx = np.unique(np.linspace(0, len(xs) - 2, min(n_check, len(xs) - 1)).astype(int))
    worst = 0.0
    spec, lam = trace.spec, trace.lam

    def rhs(x, y, z):
        return z, (eval_potential(spec, x) - lam) * y

    for i in idx:
        x0, x1 = xs[i], xs[i + 1]
        dx = x1 - x0
        if dx == 0.0:
            continue
        pbar = math.sqrt(max(1.0, abs(float(eval_potential(spec, x0)) - abs(lam)),
                             abs(float(eval_potential(spec, x1)) - abs(lam))))
        nsub = max(4, int(math.ceil(abs(dx) * pbar / 0.01)))
        h = dx / nsub
        y, z = ys[i], dys[i]
        x = x0
        for _ in range(nsub):
            k1y, k1z = rhs(x, y, z)
            k2y, k2z = rhs(x + 0.5 * h, y + 0.5 * h * k1y, z + 0.5 * h * k1z)
            k3y, k3z = rhs(x + 0.5 * h, y + 0.5 * h * k2y, z + 0.5 * h * k2z)
            k4y, k4z = rhs(x + h, y + h * k3y, z + h * k3z)
            y = y + h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y)
            z = z + h / 6.0 * (k1z + 2 * k2z + 2 * k3z + k4z)
            x += h
        defect = max(abs(y - ys[i + 1]), abs(z - dys[i + 1]) / pbar)
        mag = max(abs(ys[i]), abs(ys[i + 1]), abs(dys[i]) / pbar, abs(dys[i + 1]) / pbar)
        if mag == 0.0:
            continue
        worst = max(worst, defect / (abs(dx) * scale * mag))
    return worst
