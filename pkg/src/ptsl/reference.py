"""Canonical odd/even solution pair of the limit-circle equation at lam = 0.

The pair (w1 odd, w2 even) with unit Wronskian is the coordinate frame in
which boundary conditions at infinity are expressed: every functional of a
maximal-domain function is a bracket limit against w1 or w2. Initial data
w1: (0, 1) and w2: (-1, 0) at the origin make the normalization exact at
x = 0, and constancy of the Wronskian propagates it outward.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass

import numpy as np

from .errors import TailError
from .ode import SolutionTrace, extend_phase_amplitude, integrate_ivp, reflect_trace
from .potential import Branch, PotentialSpec
from .tails import TailRep, X_INF_CAP, l2_tail_mass

_INTEGRATION_RTOL = 5e-13


@dataclass(frozen=True)
class ReferencePair:
    """Odd solution w1, even solution w2, both real with [w1, w2] = 1."""

    spec: PotentialSpec
    w1: SolutionTrace
    w2: SolutionTrace
    X_inf: float
    tol: float

    @property
    def x_direct(self) -> float:
        return float(self.w1.coverage[1])


_cache: dict = {}
_cache_lock = threading.Lock()


def build_reference_pair(spec: PotentialSpec, tol: float = 1e-9) -> ReferencePair:
    """Construct (or fetch from cache) the normalized reference pair.

    Both solutions are integrated on the half line, continued by
    phase-amplitude tails, and reflected through the origin with their
    exact parity, so oddness/evenness holds to floating-point equality.
    """
    if not spec.is_limit_circle:
        raise ValueError("reference pair exists on the limit-circle branch only")
    key = (spec.n, float(tol))
    with _cache_lock:
        hit = _cache.get(key)
    if hit is not None:
        return hit

    half1 = integrate_ivp(spec, 0.0, 0.0, 0.0, 1.0, 2.0, _INTEGRATION_RTOL)
    half2 = integrate_ivp(spec, 0.0, 0.0, -1.0, 0.0, 2.0, _INTEGRATION_RTOL)
    half1 = extend_phase_amplitude(half1, X_INF_CAP, tol)
    half2 = extend_phase_amplitude(half2, X_INF_CAP, tol)
    pair = ReferencePair(
        spec=spec,
        w1=reflect_trace(half1, parity=-1),
        w2=reflect_trace(half2, parity=+1),
        X_inf=X_INF_CAP,
        tol=float(tol),
    )
    with _cache_lock:
        _cache.setdefault(key, pair)
    return pair


def clear_cache():
    with _cache_lock:
        _cache.clear()


def l2_norm_tail(trace: SolutionTrace, a: float) -> float:
    """int_a^inf |y|^2 dx for a limit-circle trace.

    Uses the stored samples up to the switch point and the closed-form
    phase-amplitude mass beyond it; finite because the amplitude decays
    like |x|^(-(m/4)) with m >= 8.
    """
    if not trace.spec.is_limit_circle:
        raise ValueError("tail norm is defined for limit-circle traces only")
    if trace.tail_right is None:
        raise TailError("trace has no right tail; extend it first")
    lo, hi = trace.coverage
    total = 0.0
    if a < hi:
        xs = trace.xs[trace.xs >= a]
        if len(xs) == 0 or xs[0] > a:
            xs = np.concatenate([[a], xs])
        ys, _ = trace.eval(xs)
        total += float(np.trapezoid(np.abs(ys) ** 2, xs))
        tail_from = hi
    else:
        tail_from = a
    total += l2_tail_mass(trace.tail_right, lower=tail_from)
    return total


def _trace_payload(trace: SolutionTrace) -> dict:
    def tail_payload(t: TailRep | None):
        if t is None:
            return None
        return {
            "x0": t.x0, "m": t.m, "lam": t.lam,
            "a_re": float(np.real(t.a)), "a_im": float(np.imag(t.a)),
            "b_re": float(np.real(t.b)), "b_im": float(np.imag(t.b)),
            "mirrored": t.mirrored,
        }

    return {
        "lam": trace.lam,
        "xs": trace.xs.tolist(),
        "ys": np.real(trace.ys).tolist(),
        "dys": np.real(trace.dys).tolist(),
        "x_switch": trace.x_switch,
        "rtol": trace.rtol,
        "x_inf": trace.x_inf,
        "tail_left": tail_payload(trace.tail_left),
        "tail_right": tail_payload(trace.tail_right),
    }


def _trace_from_payload(spec: PotentialSpec, d: dict) -> SolutionTrace:
    def tail_from(td):
        if td is None:
            return None
        return TailRep(
            x0=td["x0"], m=td["m"], lam=td["lam"],
            a=td["a_re"] + 1j * td["a_im"] if td["a_im"] else td["a_re"],
            b=td["b_re"] + 1j * td["b_im"] if td["b_im"] else td["b_re"],
            mirrored=td["mirrored"],
        )

    return SolutionTrace(
        spec=spec,
        lam=d["lam"],
        xs=np.asarray(d["xs"]),
        ys=np.asarray(d["ys"]),
        dys=np.asarray(d["dys"]),
        x_switch=d["x_switch"],
        tail_left=tail_from(d["tail_left"]),
        tail_right=tail_from(d["tail_right"]),
        rtol=d["rtol"],
        x_inf=d["x_inf"],
    )


def save_reference_pair(pair: ReferencePair, path) -> None:
    """Dump the pair (grids, values, tail parameters, metadata) as JSON."""
    payload = {
        "format": "ptsl-reference-pair",
        "version": 1,
        "n": pair.spec.n,
        "tol": pair.tol,
        "x_inf": pair.X_inf,
        "w1": _trace_payload(pair.w1),
        "w2": _trace_payload(pair.w2),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)


def load_reference_pair(path) -> ReferencePair:
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("format") != "ptsl-reference-pair":
        raise ValueError(f"{path} is not a reference-pair file")
    spec = PotentialSpec(int(payload["n"]), Branch.LIMIT_CIRCLE)
    return ReferencePair(
        spec=spec,
        w1=_trace_from_payload(spec, payload["w1"]),
        w2=_trace_from_payload(spec, payload["w2"]),
        X_inf=payload["x_inf"],
        tol=payload["tol"],
    )
