"""Discrete spectra of both branches with sign-type classification.

Limit point (x^{4n+2}): half-line shooting split by parity; the miss
distance is the Wronskian of the outward and inward solutions at a
matching point. Limit circle (-x^{4n+4}): eigenvalues are the roots of a
2x2 characteristic determinant built from the boundary functionals of the
fundamental system; separated conditions give a real determinant with
simple sign-changing zeros, mixed conditions a generally complex one whose
modulus is minimized. Each eigenvalue gets normalized eigenfunctions, a
parity label, and a sign type in the indefinite inner product.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq, minimize_scalar

from . import tails
from .errors import ClassificationError
from .extensions import MixedBC, SeparatedBC, bc_residual
from .functionals import functionals
from .ode import SolutionTrace, integrate_ivp, ode_residual, reflect_trace
from .potential import (Branch, PotentialSpec, SampledFunction, apply_parity,
                        eval_potential, hilbert_inner, krein_inner)
from .reference import ReferencePair

SCAN_STEP_FLOOR = 0.05
DOUBLE_ROOT_RTOL = 1e-8


class KreinSign(enum.Enum):
    POSITIVE_TYPE = "positive"
    NEGATIVE_TYPE = "negative"
    INDEFINITE = "indefinite"


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"


@dataclass
class EigenRecord:
    """One eigenvalue with its normalized eigenfunction(s) and residuals."""

    lam: float
    multiplicity: int
    krein_sign: KreinSign | None
    parity: Parity
    det_residual: float
    bc_residual: float
    ode_residual: float
    eigenfunctions: list

    @property
    def flagged(self) -> bool:
        return self.det_residual > 1e-6


@dataclass
class LimitPointResult:
    """Records plus an explicit truncation flag for an exhausted scan cap."""

    records: list
    truncated: bool

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def __getitem__(self, i):
        return self.records[i]


# --------------------------------------------------------------------------
# limit point: parity-split shooting


def _turning_point(spec: PotentialSpec, lam: float) -> float:
    if lam <= 1.0:
        return 1.0
    return lam ** (1.0 / spec.power)


def _outer_point(spec: PotentialSpec, lam: float, action: float = 30.0) -> float:
    """Abscissa beyond the turning point accumulating the requested decay
    action int sqrt(q - lam); initial-data error is damped by e^{-2 action}."""
    x_t = _turning_point(spec, lam)
    x = max(1.5 * x_t, x_t + 0.5)
    for _ in range(100):
        s = quad(lambda t: math.sqrt(max(eval_potential(spec, t) - lam, 0.0)), x_t, x,
                 limit=100)[0]
        if s >= action:
            return x
        x *= 1.15
    raise RuntimeError("could not place the outer shooting point")


def _lg_decaying_slope(spec: PotentialSpec, lam: float, x: float) -> float:
    """Logarithmic derivative of the decaying Liouville-Green solution."""
    q = float(eval_potential(spec, x))
    kappa = math.sqrt(q - lam)
    dq = spec.power * q / x
    return -kappa - dq / (4.0 * (q - lam))


def _shoot_miss(spec: PotentialSpec, lam: float, parity: Parity, tol: float):
    """Normalized Wronskian of outward and inward solutions at the match."""
    x_m = _turning_point(spec, lam)
    x_out = _outer_point(spec, lam)
    y0, dy0 = (1.0, 0.0) if parity is Parity.EVEN else (0.0, 1.0)
    out = integrate_ivp(spec, lam, 0.0, y0, dy0, x_m, tol, store=False, renorm=True)
    slope = _lg_decaying_slope(spec, lam, x_out)
    inw = integrate_ivp(spec, lam, x_out, 1.0, slope, x_m, tol, store=False, renorm=True)
    yo, zo = out.ys[-1], out.dys[-1]
    yi, zi = inw.ys[-1], inw.dys[-1]
    w = yo * zi - zo * yi
    scale = abs(yo * zi) + abs(zo * yi) + 1e-300
    return w / scale


def _lp_density_step(spec: PotentialSpec, lam: float) -> float:
    """Scan step from the local phase density: same-parity eigenvalues are
    separated by ~2*pi / (d phase / d lam) on the full line."""
    lam_eff = max(lam, 1.0)
    x_t = lam_eff ** (1.0 / spec.power)
    dphase = quad(
        lambda t: 1.0 / (2.0 * math.sqrt(max(lam_eff - eval_potential(spec, t), 1e-12))),
        0.0, x_t, limit=100,
    )[0]
    return max(SCAN_STEP_FLOOR, 0.8 * math.pi / max(dphase, 1e-9))


def _lp_eigenfunction(spec: PotentialSpec, lam: float, parity: Parity, tol: float) -> SolutionTrace:
    x_m = _turning_point(spec, lam)
    x_out = _outer_point(spec, lam)
    y0, dy0 = (1.0, 0.0) if parity is Parity.EVEN else (0.0, 1.0)
    out = integrate_ivp(spec, lam, 0.0, y0, dy0, x_m, tol)
    slope = _lg_decaying_slope(spec, lam, x_out)
    inw = integrate_ivp(spec, lam, x_out, 1.0, slope, x_m, tol, renorm=True)
    yo, zo = out.ys[-1], out.dys[-1]
    yi, zi = inw.ys[-1], inw.dys[-1]
    factor = (yo / yi) if abs(yi) > abs(zi) else (zo / zi)
    keep = inw.xs > x_m
    xs = np.concatenate([out.xs, inw.xs[keep]])
    ys = np.concatenate([out.ys, factor * inw.ys[keep]])
    dys = np.concatenate([out.dys, factor * inw.dys[keep]])
    half = replace(out, xs=xs, ys=ys, dys=dys, _spl={})
    return reflect_trace(half, +1 if parity is Parity.EVEN else -1)


def _normalize_eigenfunction(sf: SampledFunction) -> SampledFunction:
    """Unit L2 norm; the first nonzero of (f(0), f'(0)) is made positive real."""
    norm = math.sqrt(abs(hilbert_inner(sf, sf)))
    i0 = int(np.searchsorted(sf.grid, 0.0))
    anchor = sf.y[i0] if abs(sf.y[i0]) > 1e-8 * norm else sf.dy[i0]
    phase_fix = abs(anchor) / anchor if anchor != 0 else 1.0
    factor = phase_fix / norm
    y, dy = sf.y * factor, sf.dy * factor
    d2 = None if sf.d2 is None else sf.d2 * factor
    if not np.iscomplexobj(np.asarray(anchor * factor)) or abs(np.imag(phase_fix)) < 1e-15:
        if np.iscomplexobj(y) and np.max(np.abs(np.imag(y))) < 1e-12 * np.max(np.abs(y)):
            y, dy = np.real(y), np.real(dy)
            d2 = None if d2 is None else np.real(d2)
    tl = None if sf.tail_left is None else sf.tail_left.scaled(factor)
    tr = None if sf.tail_right is None else sf.tail_right.scaled(factor)
    return SampledFunction(grid=sf.grid, y=y, dy=dy, d2=d2, tail_left=tl, tail_right=tr)


def _sample_parity(sf: SampledFunction) -> Parity:
    scale = float(np.max(np.abs(sf.y))) + 1e-300
    if float(np.max(np.abs(sf.y - sf.y[::-1]))) < 1e-6 * scale:
        return Parity.EVEN
    if float(np.max(np.abs(sf.y + sf.y[::-1]))) < 1e-6 * scale:
        return Parity.ODD
    return Parity.MIXED


def solve_limit_point(spec: PotentialSpec, k_max: int, tol: float = 1e-10,
                      lam_cap: float = 1e4) -> LimitPointResult:
    """The k_max smallest eigenvalues of the limit-point operator.

    Shooting is split by parity (even problem y(0)=1, y'(0)=0; odd problem
    y(0)=0, y'(0)=1), roots of the sign-changing miss distance are refined
    by Brent's method, and the merged sequence is simple, nonnegative,
    strictly increasing and parity-alternating starting even.
    """
    if spec.branch is not Branch.LIMIT_POINT:
        raise ValueError("limit-point solver needs the limit-point branch")
    if k_max < 1:
        raise ValueError("k_max must be at least 1")

    per_parity = k_max // 2 + 1
    found: list[tuple[float, Parity, float]] = []
    truncated = False
    for parity in (Parity.EVEN, Parity.ODD):
        roots = []
        lam = 0.0
        miss_prev = _shoot_miss(spec, lam, parity, tol)
        while len(roots) < per_parity:
            step = _lp_density_step(spec, lam)
            lam_next = lam + step
            if lam_next > lam_cap:
                truncated = True
                break
            miss_next = _shoot_miss(spec, lam_next, parity, tol)
            if np.sign(miss_prev.real) != np.sign(miss_next.real):
                root = brentq(
                    lambda t: _shoot_miss(spec, t, parity, tol).real,
                    lam, lam_next, xtol=tol * (1.0 + lam_next), rtol=8.9e-16,
                )
                resid = abs(_shoot_miss(spec, root, parity, tol))
                roots.append((float(root), parity, float(resid)))
            lam, miss_prev = lam_next, miss_next
        found.extend(roots)

    found.sort(key=lambda r: r[0])
    found = found[:k_max]
    truncated = truncated or len(found) < k_max

    records = []
    for lam, parity, resid in found:
        trace = _lp_eigenfunction(spec, lam, parity, tol)
        sf = _normalize_eigenfunction(trace.samples)
        rec = EigenRecord(
            lam=lam,
            multiplicity=1,
            krein_sign=None,
            parity=_sample_parity(sf),
            det_residual=resid,
            bc_residual=0.0,
            ode_residual=ode_residual(replace(trace, _spl={})),
            eigenfunctions=[sf],
        )
        records.append(classify_krein(rec))
    return LimitPointResult(records=records, truncated=truncated)


# --------------------------------------------------------------------------
# limit circle: characteristic determinant over the boundary functionals


@dataclass
class CharacteristicMatrix:
    """Functionals of the fundamental system u (even), v (odd) at one lam.

    m_alpha[i][j] = (alpha_i of the j-th fundamental solution), likewise
    m_beta; entries are real for real lam.
    """

    m_alpha: np.ndarray
    m_beta: np.ndarray
    lam: float
    u: SolutionTrace
    v: SolutionTrace


def characteristic_matrix(spec: PotentialSpec, ref: ReferencePair, lam,
                          rtol: float = 5e-13, tail_tol: float = 1e-9,
                          keep_traces: bool = True) -> CharacteristicMatrix:
    """Integrate the fundamental system and fill its boundary functionals.

    With keep_traces=False only the integration endpoints are stored, which
    is all the functionals need; window scans use this light mode.
    """
    if not spec.is_limit_circle:
        raise ValueError("characteristic matrix exists on the limit-circle branch only")
    budget = min(1e-11, 0.1 * tail_tol)
    x_sw = tails.choose_switch(spec.power, abs(lam), budget)

    def half(y0, dy0):
        tr = integrate_ivp(spec, lam, 0.0, y0, dy0, x_sw, rtol, store=keep_traces)
        tr.tail_right = tails.fit_tail(spec.power, lam, x_sw, tr.ys[-1], tr.dys[-1])
        tr.x_switch = x_sw
        tr.x_inf = ref.X_inf
        return tr

    u = reflect_trace(half(1.0, 0.0), +1)
    v = reflect_trace(half(0.0, 1.0), -1)

    # One phase offset serves all brackets: the w-tails share one frame and
    # the (u, v) tails another; mirrored frames have the same offset.
    d_right = tails._phase_offset(ref.w1.tail_right, u.tail_right)
    d_left = d_right

    def limits(f):
        a1 = tails.bracket_limit(ref.w1.tail_left, f.tail_left, phase_offset=d_left)
        a2 = tails.bracket_limit(ref.w2.tail_left, f.tail_left, phase_offset=d_left)
        b1 = tails.bracket_limit(ref.w1.tail_right, f.tail_right, phase_offset=d_right)
        b2 = tails.bracket_limit(ref.w2.tail_right, f.tail_right, phase_offset=d_right)
        return a1, a2, b1, b2

    ua1, ua2, ub1, ub2 = limits(u)
    va1, va2, vb1, vb2 = limits(v)
    cplx = np.iscomplexobj(np.asarray(lam))
    cast = (lambda z: z) if cplx else (lambda z: float(np.real(z)))
    m_alpha = np.array([[cast(ua1), cast(va1)], [cast(ua2), cast(va2)]])
    m_beta = np.array([[cast(ub1), cast(vb1)], [cast(ub2), cast(vb2)]])
    return CharacteristicMatrix(m_alpha=m_alpha, m_beta=m_beta, lam=lam, u=u, v=v)


def transfer_matrix(cm: CharacteristicMatrix) -> np.ndarray:
    """Map (a1, a2) -> (b1, b2) realized by actual solutions at this lam.

    Always unit determinant with equal diagonal entries, hence itself an
    admissible symmetric mixed-condition matrix; choosing B equal to it
    creates a double eigenvalue at this lam.
    """
    return cm.m_beta @ np.linalg.inv(cm.m_alpha)


def _condition_matrix(cm: CharacteristicMatrix, bc) -> tuple[np.ndarray, float]:
    """(K, scale): K c = 0 picks eigen-coefficients in the (u, v) basis."""
    if isinstance(bc, SeparatedBC):
        wl = np.array([math.cos(bc.alpha), -math.sin(bc.alpha)])
        wr = np.array([math.cos(bc.beta), -math.sin(bc.beta)])
        k = np.vstack([wl @ cm.m_alpha, wr @ cm.m_beta])
        scale = float(np.linalg.norm(k[0]) * np.linalg.norm(k[1]))
        if scale == 0.0:
            scale = 1e-300
        return k, math.sqrt(scale)
    if isinstance(bc, MixedBC):
        k = cm.m_beta - bc.matrix @ cm.m_alpha
        scale = float(np.linalg.norm(cm.m_beta) + np.linalg.norm(bc.matrix @ cm.m_alpha))
        return k, max(scale, 1e-300)
    raise TypeError(f"unsupported boundary condition {type(bc).__name__}")


def characteristic_det(cm: CharacteristicMatrix, bc):
    """Normalized characteristic determinant; real for separated and for
    real mixed matrices, complex otherwise. Zero exactly at eigenvalues."""
    k, scale = _condition_matrix(cm, bc)
    d = k[0, 0] * k[1, 1] - k[0, 1] * k[1, 0]
    d = d / scale**2
    if abs(np.imag(np.asarray(d))) == 0.0:
        return float(np.real(d))
    return complex(d)


def _bc_is_real(bc) -> bool:
    if isinstance(bc, SeparatedBC):
        return True
    return float(np.max(np.abs(np.imag(bc.matrix)))) < 1e-15


def _lc_density_step(spec: PotentialSpec, lam: float, x_cap: float) -> float:
    m = spec.power
    lo = abs(lam) ** (1.0 / m) if lam < 0 else 0.0
    dphase = quad(
        lambda t: 1.0 / (2.0 * math.sqrt(max(t**m + lam, 1e-12))),
        lo, x_cap, limit=200, points=[min(max(lo, 0.2), x_cap)],
    )[0]
    return max(SCAN_STEP_FLOOR, 0.4 * math.pi / max(dphase, 1e-9))


def _newton_polish(f, x0: float, lo: float, hi: float, steps: int = 4) -> float:
    """Safeguarded Newton on f' (central differences) for a minimum of f."""
    x = x0
    for _ in range(steps):
        h = 1e-6 * (1.0 + abs(x))
        fm, f0, fp = f(x - h), f(x), f(x + h)
        g = (fp - fm) / (2.0 * h)
        gg = (fp - 2.0 * f0 + fm) / (h * h)
        if gg <= 0.0 or not math.isfinite(gg):
            break
        x_new = x - g / gg
        if not lo < x_new < hi:
            break
        if abs(x_new - x) < 1e-13 * (1.0 + abs(x)):
            x = x_new
            break
        x = x_new
    return x


def solve_limit_circle(spec: PotentialSpec, ref: ReferencePair, bc, window,
                       tol: float = 1e-8, workers: int = 1) -> list:
    """All eigenvalues of H_bc in the finite window, as EigenRecords.

    Separated conditions: real determinant, sign-change scan plus Brent
    refinement. Mixed conditions: |D|^2 minima located on the density grid,
    narrowed by bounded minimization and polished by safeguarded Newton
    with central differences. A root is accepted when the normalized |D|
    falls below the root tolerance; rank-zero condition matrices (both
    singular values small) are classed as double eigenvalues.
    """
    if not spec.is_limit_circle:
        raise ValueError("limit-circle solver needs the limit-circle branch")
    lo, hi = float(window[0]), float(window[1])
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError("window must be a finite nonempty interval")

    scan_rtol = 1e-11

    def det_at(lam: float):
        cm = characteristic_matrix(spec, ref, lam, rtol=scan_rtol, keep_traces=False)
        return characteristic_det(cm, bc)

    grid = [lo]
    while grid[-1] < hi:
        grid.append(min(hi, grid[-1] + _lc_density_step(spec, grid[-1], ref.X_inf)))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            dvals = list(pool.map(det_at, grid))
    else:
        dvals = [det_at(g) for g in grid]

    real_det = _bc_is_real(bc)
    roots: list[float] = []
    if real_det:
        for i in range(len(grid) - 1):
            d0, d1 = dvals[i].real, dvals[i + 1].real
            if d0 == 0.0:
                roots.append(grid[i])
            elif d0 * d1 < 0.0:
                roots.append(float(brentq(lambda t: det_at(t).real, grid[i], grid[i + 1],
                                          xtol=1e-13 * (1.0 + abs(grid[i])), rtol=8.9e-16)))

    fabs2 = [abs(d) ** 2 for d in dvals]
    for i in range(1, len(grid) - 1):
        if fabs2[i] <= fabs2[i - 1] and fabs2[i] <= fabs2[i + 1]:
            res = minimize_scalar(lambda t: abs(det_at(t)) ** 2,
                                  bracket=None, bounds=(grid[i - 1], grid[i + 1]),
                                  method="bounded",
                                  options={"xatol": 1e-12 * (1.0 + abs(grid[i]))})
            cand = _newton_polish(lambda t: abs(det_at(t)) ** 2, float(res.x),
                                  grid[i - 1], grid[i + 1])
            if abs(det_at(cand)) > abs(det_at(float(res.x))):
                cand = float(res.x)
            if abs(det_at(cand)) < 1e-7:
                roots.append(cand)

    # Deduplicate and sort deterministically.
    roots.sort()
    merged: list[float] = []
    for r in roots:
        if not merged or abs(r - merged[-1]) > 1e-7 * (1.0 + abs(r)):
            merged.append(r)

    records = []
    for lam in merged:
        cm = characteristic_matrix(spec, ref, lam)
        records.append(_lc_record(cm, bc, ref, lam))
    return records


def _combine_traces(cm: CharacteristicMatrix, coeffs) -> SolutionTrace:
    """c1*u + c2*v on the union grid, with combined tails."""
    c1, c2 = coeffs
    u, v = cm.u, cm.v
    grid = np.union1d(u.xs, v.xs)
    uy, udy = u.eval(grid)
    vy, vdy = v.eval(grid)
    ys = c1 * uy + c2 * vy
    dys = c1 * udy + c2 * vdy
    if abs(np.imag(c1)) == 0.0 and abs(np.imag(c2)) == 0.0:
        ys, dys = np.real(ys), np.real(dys)
        c1, c2 = float(np.real(c1)), float(np.real(c2))
    tail_right = tails.combine_tails([u.tail_right, v.tail_right], [c1, c2])
    tail_left = tails.combine_tails([u.tail_left, v.tail_left], [c1, c2])
    return replace(u, xs=grid, ys=ys, dys=dys,
                   tail_left=tail_left, tail_right=tail_right, _spl={})


def _lc_record(cm: CharacteristicMatrix, bc, ref: ReferencePair, lam: float) -> EigenRecord:
    k, scale = _condition_matrix(cm, bc)
    svals = np.linalg.svd(k, compute_uv=False)
    det_res = abs(characteristic_det(cm, bc))
    double = svals[0] < DOUBLE_ROOT_RTOL * scale

    if double:
        funcs = []
        for coeffs in ((1.0, 0.0), (0.0, 1.0)):
            tr = _combine_traces(cm, coeffs)
            funcs.append(_normalize_eigenfunction(tr.samples))
        rec = EigenRecord(
            lam=lam, multiplicity=2, krein_sign=None, parity=Parity.MIXED,
            det_residual=det_res,
            bc_residual=max(bc_residual(functionals(cm.u, ref), bc),
                            bc_residual(functionals(cm.v, ref), bc)),
            ode_residual=max(ode_residual(cm.u), ode_residual(cm.v)),
            eigenfunctions=funcs,
        )
        return classify_krein(rec)

    _, _, vh = np.linalg.svd(k)
    coeffs = np.conj(vh[-1])
    trace = _combine_traces(cm, (complex(coeffs[0]), complex(coeffs[1])))
    sf = _normalize_eigenfunction(trace.samples)
    bf = functionals(trace, ref)
    rec = EigenRecord(
        lam=lam, multiplicity=1, krein_sign=None, parity=_sample_parity(sf),
        det_residual=det_res,
        bc_residual=bc_residual(bf, bc) / (float(np.max(np.abs(bf.as_array()))) + 1e-300),
        ode_residual=ode_residual(trace),
        eigenfunctions=[sf],
    )
    return classify_krein(rec)


def classify_krein(record: EigenRecord, tol: float = 1e-8) -> EigenRecord:
    """Attach the sign type in the indefinite inner product.

    Multiplicity 1: the sign of [f, f] decides positive/negative type; a
    near-neutral value raises ClassificationError rather than guessing.
    Multiplicity 2: indefinite, and the eigenspace is re-based into one
    even and one odd eigenfunction via parity projections.
    """
    if record.multiplicity == 1:
        f = record.eigenfunctions[0]
        k = krein_inner(f, f)
        norm2 = abs(hilbert_inner(f, f))
        if abs(k) < 10.0 * tol * norm2:
            raise ClassificationError(
                f"indefinite inner product {k:.3g} too close to neutral at lam={record.lam:.6g}"
            )
        sign = KreinSign.POSITIVE_TYPE if np.real(k) > 0 else KreinSign.NEGATIVE_TYPE
        return replace(record, krein_sign=sign)

    rebased = []
    for f in record.eigenfunctions:
        pf = apply_parity(f)
        even = _project_parity(f, pf, +1)
        odd = _project_parity(f, pf, -1)
        for cand in (even, odd):
            if cand is not None:
                rebased.append(cand)
    even_funcs = [g for g in rebased if _sample_parity(g) is Parity.EVEN]
    odd_funcs = [g for g in rebased if _sample_parity(g) is Parity.ODD]
    if not even_funcs or not odd_funcs:
        raise ClassificationError(
            f"could not re-base the double eigenspace at lam={record.lam:.6g} into parities"
        )
    return replace(
        record,
        krein_sign=KreinSign.INDEFINITE,
        eigenfunctions=[even_funcs[0], odd_funcs[0]],
    )


def _project_parity(f: SampledFunction, pf: SampledFunction, sign: int):
    y = 0.5 * (f.y + sign * pf.y)
    if float(np.max(np.abs(y))) < 1e-8 * float(np.max(np.abs(f.y))):
        return None
    dy = 0.5 * (f.dy + sign * pf.dy)
    d2 = None
    if f.d2 is not None and pf.d2 is not None:
        d2 = 0.5 * (f.d2 + sign * pf.d2)
    tl = tr = None
    if f.tail_left is not None and pf.tail_left is not None:
        tl = tails.combine_tails([f.tail_left, pf.tail_left], [0.5, 0.5 * sign])
        tr = tails.combine_tails([f.tail_right, pf.tail_right], [0.5, 0.5 * sign])
    proj = SampledFunction(grid=f.grid, y=y, dy=dy, d2=d2, tail_left=tl, tail_right=tr)
    return _normalize_eigenfunction(proj)


def weyl_partial_sums(records, zero_tol: float = 1e-10) -> list:
    """Partial sums of |lam|^-2 over the records, sorted by |lam|.

    Eigenvalues at zero (within zero_tol) are excluded from the sum; they
    are reported by the caller separately.
    """
    lams = sorted(abs(r.lam) for r in records if abs(r.lam) > zero_tol)
    sums = []
    total = 0.0
    for v in lams:
        total += v**-2.0
        sums.append(total)
    return sums


def determinant_off_axis(spec: PotentialSpec, ref: ReferencePair, bc,
                         lam: float, delta: float = 0.1, rtol: float = 1e-9) -> float:
    """|D(lam + i delta)|: a spot check that an on-axis root is not the
    shadow of a complex zero (runs on the dtype-generic Python backend)."""
    cm = characteristic_matrix(spec, ref, complex(lam, delta), rtol=rtol)
    return abs(characteristic_det(cm, bc))
