"""Phase-amplitude (Liouville-Green) tail representations.

In the oscillatory region of -y'' - x^m y = lam*y (m = 4n+4) every solution
behaves like Q^{-1/2} * trig(Phi) with momentum Q close to p = sqrt(x^m+lam).
We carry the first curvature correction,

    Q = p * sqrt(1 + g),   g = (5 m^2 / 16) x^{2m-2} / p^6
                               - (m (m-1) / 4) x^{m-2} / p^4,

which makes the basis

    s(x) = Q^{-1/2} sin Phi(x),   c(x) = Q^{-1/2} cos Phi(x),
    Phi(x) = int_{x0}^x Q,

an almost-solution pair with exactly constant Wronskian s c' - s' c = -1.
A tail descriptor freezes the coefficients (a, b) of a solution in this
basis; bracket limits at infinity and tail integrals then reduce to smooth
one-dimensional quadratures of momentum differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import quad

from .errors import TailError

# Cap used by the sampled (Cauchy) limit-extraction path.
X_INF_CAP = 40.0


def momentum_sq(m: int, lam: float, x):
    return np.power(x, m) + lam


def lg_correction(m: int, lam: float, x):
    """Relative curvature correction g so that Q = p sqrt(1+g)."""
    x = np.asarray(x, dtype=float)
    p2 = momentum_sq(m, lam, x)
    xm2 = np.power(x, m - 2)
    x2m2 = np.power(x, 2 * m - 2)
    return (5.0 * m * m / 16.0) * x2m2 / p2**3 - (m * (m - 1) / 4.0) * xm2 / p2**2


def corrected_momentum(m: int, lam: float, x):
    """Corrected momentum Q(x) and its derivative Q'(x)."""
    x = np.asarray(x, dtype=float)
    p2 = momentum_sq(m, lam, x)
    p = np.sqrt(p2)
    dp = m * np.power(x, m - 1) / (2.0 * p)
    g = lg_correction(m, lam, x)
    # dg/dx from the closed form of g.
    xm2 = np.power(x, m - 2)
    xm3 = np.power(x, m - 3)
    x2m2 = np.power(x, 2 * m - 2)
    x2m3 = np.power(x, 2 * m - 3)
    dp2 = m * np.power(x, m - 1)
    dg = (5.0 * m * m / 16.0) * ((2 * m - 2) * x2m3 / p2**3 - 3.0 * x2m2 * dp2 / p2**4) - (
        m * (m - 1) / 4.0
    ) * ((m - 2) * xm3 / p2**2 - 2.0 * xm2 * dp2 / p2**3)
    root = np.sqrt(1.0 + g)
    q = p * root
    dq = dp * root + p * dg / (2.0 * root)
    return q, dq


def momentum_diff(m: int, lam_a: float, lam_b: float, x):
    """Q_a(x) - Q_b(x) evaluated without cancellation."""
    x = np.asarray(x, dtype=float)
    xm = np.power(x, m)
    ga = lg_correction(m, lam_a, x)
    gb = lg_correction(m, lam_b, x)
    qa, _ = corrected_momentum(m, lam_a, x)
    qb, _ = corrected_momentum(m, lam_b, x)
    # Qa^2 - Qb^2 = (lam_a - lam_b) + xm*(ga - gb) + lam_a*ga - lam_b*gb
    num = (lam_a - lam_b) + xm * (ga - gb) + lam_a * ga - lam_b * gb
    return num / (qa + qb)


@dataclass(frozen=True)
class TailRep:
    """Frozen-coefficient phase-amplitude tail on one side of the grid.

    Describes f(x) = a*s(x) + b*c(x) for x >= x0, or, when mirrored,
    f(x) = a*s(-x) + b*c(-x) for x <= -x0 (derivatives flip sign).
    """

    x0: float
    m: int
    lam: float
    a: complex
    b: complex
    mirrored: bool = False
    kind: str = "osc"

    def scaled(self, factor: complex) -> "TailRep":
        return replace(self, a=self.a * factor, b=self.b * factor)

    def conjugated(self) -> "TailRep":
        return replace(self, a=np.conj(self.a), b=np.conj(self.b))


def combine_tails(reps, coeffs):
    """Linear combination of tails sharing (x0, m, lam, mirrored)."""
    base = reps[0]
    a = sum(c * r.a for c, r in zip(coeffs, reps))
    b = sum(c * r.b for c, r in zip(coeffs, reps))
    for r in reps[1:]:
        if (r.x0, r.m, r.lam, r.mirrored) != (base.x0, base.m, base.lam, base.mirrored):
            raise TailError("cannot combine tails with different frames")
    return replace(base, a=a, b=b)


def _check_osc(rep: TailRep):
    if rep.kind != "osc":
        raise TailError(f"tail of kind {rep.kind!r} is not integrable")


def phase(rep: TailRep, x):
    """Phi(x) = int_{x0}^x Q, vectorized, by panelwise Gauss-Legendre."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    cplx = bool(np.iscomplexobj(np.asarray(rep.lam)))
    out = np.zeros(xs.shape, dtype=complex if cplx else float)
    nodes, weights = np.polynomial.legendre.leggauss(24)
    for i, xv in enumerate(xs):
        if xv < rep.x0 * (1.0 - 1e-12):
            raise TailError(f"phase requested below tail start ({xv} < {rep.x0})")
        # Geometric panels keep the power-law integrand well resolved.
        pts = [rep.x0]
        while pts[-1] * 1.5 < xv:
            pts.append(pts[-1] * 1.5)
        pts.append(max(xv, rep.x0))
        total = 0.0
        for a, b in zip(pts[:-1], pts[1:]):
            if b <= a:
                continue
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            q, _ = corrected_momentum(rep.m, rep.lam, mid + half * nodes)
            total += half * np.dot(weights, q)
        out[i] = total
    return out if np.ndim(x) else out[0]


def tail_eval(rep: TailRep, x):
    """(y, y') of the tail representation at abscissae x."""
    _check_osc(rep)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    t = -xs if rep.mirrored else xs
    if np.any(t < rep.x0 * (1.0 - 1e-12)):
        raise TailError("evaluation point not covered by the tail")
    q, dq = corrected_momentum(rep.m, rep.lam, t)
    ph = np.atleast_1d(phase(rep, t))
    amp = 1.0 / np.sqrt(q)
    s = amp * np.sin(ph)
    c = amp * np.cos(ph)
    damp = -0.5 * dq / q
    ds = damp * s + np.sqrt(q) * np.cos(ph)
    dc = damp * c - np.sqrt(q) * np.sin(ph)
    y = rep.a * s + rep.b * c
    dy = rep.a * ds + rep.b * dc
    if rep.mirrored:
        dy = -dy
    if np.ndim(x):
        return y, dy
    return y[0], dy[0]


def fit_tail(m: int, lam, x0: float, y, dy, mirrored: bool = False) -> TailRep:
    """Match (a, b) so the tail equals (y, y') at x0 (exact 2x2 solve).

    For a mirrored tail the supplied data are the values at -x0, i.e.
    y = f(-x0), dy = f'(-x0).
    """
    q, dq = corrected_momentum(m, lam, x0)
    q, dq = complex(q) if np.iscomplexobj(np.asarray(q)) else float(q), \
        complex(dq) if np.iscomplexobj(np.asarray(dq)) else float(dq)
    if mirrored:
        dy = -dy
    # At the reference point Phi = 0: s = 0, c = q^{-1/2},
    # s' = q^{1/2}, c' = -dq/(2 q^{3/2}).
    sqq = np.sqrt(q)
    a = y * (dq / (2.0 * q * sqq)) + dy / sqq
    b = y * sqq
    lam_out = complex(lam) if np.iscomplexobj(np.asarray(lam)) else float(lam)
    return TailRep(x0=float(x0), m=m, lam=lam_out, a=a, b=b, mirrored=mirrored)


def _cquad(fun, a, b, **kw) -> complex:
    """Adaptive quadrature of a possibly complex-valued integrand."""
    re = quad(lambda x: float(np.real(fun(x))), a, b, **kw)[0]
    im = quad(lambda x: float(np.imag(fun(x))), a, b, **kw)[0]
    return complex(re, im)


def _phase_offset(rep_f: TailRep, rep_g: TailRep) -> complex:
    """lim_{x->inf} (Phi_g(x) - Phi_f(x)), a convergent smooth integral."""
    xc = max(rep_f.x0, rep_g.x0)
    head = phase(rep_g, xc) - phase(rep_f, xc)
    if rep_f.lam == rep_g.lam and rep_f.x0 == rep_g.x0:
        return head
    tail = _cquad(
        lambda x: momentum_diff(rep_f.m, rep_g.lam, rep_f.lam, x),
        xc, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200,
    )
    return head + tail


def bracket_limit(rep_f: TailRep, rep_g: TailRep, phase_offset=None) -> complex:
    """Limit of [f, g]_x = conj(f) g' - conj(f') g at the tails' endpoint.

    Both tails must live on the same side. The limit is evaluated from the
    frozen coefficients: with C = b - i a, Ct = b + i a and D the limiting
    phase offset between the two frames,

        [f, g]_(+inf) = (i/2) (conj(C_f) C_g e^{iD} - conj(Ct_f) Ct_g e^{-iD})

    and the left-hand limit flips the overall sign. `phase_offset` may be
    supplied when D is already known (it depends only on the two frames,
    not on the coefficients).
    """
    _check_osc(rep_f)
    _check_osc(rep_g)
    if rep_f.m != rep_g.m or rep_f.mirrored != rep_g.mirrored:
        raise TailError("bracket limit needs tails on the same side of the same equation family")
    d = _phase_offset(rep_f, rep_g) if phase_offset is None else phase_offset
    cf = rep_f.b - 1j * rep_f.a
    ctf = rep_f.b + 1j * rep_f.a
    cg = rep_g.b - 1j * rep_g.a
    ctg = rep_g.b + 1j * rep_g.a
    val = 0.5j * (np.conj(cf) * cg * np.exp(1j * d) - np.conj(ctf) * ctg * np.exp(-1j * d))
    return complex(-val) if rep_f.mirrored else complex(val)


def _ibp_oscillatory(amp, phase_total, dphase, a: float, n_terms: int = 2) -> complex:
    """int_a^inf amp(x) e^{i phase(x)} dx by repeated integration by parts.

    `amp` and `dphase` are callables (dphase = phase'), `phase_total(a)` is
    the phase at the lower end. Valid when amp decays and dphase grows.
    """
    h = 1e-4 * max(1.0, a)

    def t0(x):
        return amp(x) / (1j * dphase(x))

    def t1(x):
        return (t0(x + h) - t0(x - h)) / (2.0 * h) / (1j * dphase(x))

    val = -t0(a)
    if n_terms >= 2:
        val += t1(a)
    return complex(val * np.exp(1j * phase_total))


def product_integral(rep_f: TailRep, rep_g: TailRep, lower: float | None = None) -> complex:
    """int f(x) conj(g(x)) dx over the common tail domain.

    For mirrored pairs this is the integral over (-inf, -x0], computed via
    the substitution x -> -x (which leaves the product of values intact).
    The slowly-varying part is integrated by adaptive quadrature and the
    doubly-oscillatory part by two integration-by-parts terms.
    """
    _check_osc(rep_f)
    _check_osc(rep_g)
    if rep_f.m != rep_g.m or rep_f.mirrored != rep_g.mirrored:
        raise TailError("product integral needs tails on the same side")
    m = rep_f.m
    a0 = max(rep_f.x0, rep_g.x0, lower if lower is not None else 0.0)

    cf = rep_f.b - 1j * rep_f.a
    ctf = rep_f.b + 1j * rep_f.a
    cg = rep_g.b - 1j * rep_g.a
    ctg = rep_g.b + 1j * rep_g.a

    phi_f0 = phase(rep_f, a0)
    phi_g0 = phase(rep_g, a0)

    def qf(x):
        return corrected_momentum(m, rep_f.lam, x)[0]

    def qg(x):
        return corrected_momentum(m, rep_g.lam, x)[0]

    def amp(x):
        return 1.0 / np.sqrt(qf(x) * qg(x))

    # Slow factor: e^{i (Phi_f - Phi_g)}; the difference grows at most like
    # the integrable momentum difference.
    def ddiff(x):
        return float(momentum_diff(m, rep_f.lam, rep_g.lam, x))

    if rep_f.lam == rep_g.lam:
        j_slow = quad(lambda x: float(amp(x)), a0, np.inf, epsabs=1e-14, epsrel=1e-12, limit=200)[0]
        j_slow = complex(j_slow) * np.exp(1j * (phi_f0 - phi_g0))
    else:
        def dval(x):
            d, _ = quad(ddiff, a0, x, epsabs=1e-13, epsrel=1e-12, limit=200)
            return (phi_f0 - phi_g0) + d

        re = quad(lambda x: float(amp(x)) * math.cos(dval(x)), a0, np.inf,
                  epsabs=1e-13, epsrel=1e-11, limit=300)[0]
        im = quad(lambda x: float(amp(x)) * math.sin(dval(x)), a0, np.inf,
                  epsabs=1e-13, epsrel=1e-11, limit=300)[0]
        j_slow = complex(re, im)

    # Fast factor: e^{i (Phi_f + Phi_g)}.
    j_fast = _ibp_oscillatory(
        lambda x: float(amp(x)),
        float(phi_f0 + phi_g0),
        lambda x: float(qf(x) + qg(x)),
        a0,
    )

    return complex(
        0.25 * (cf * np.conj(cg) * j_slow
                + ctf * np.conj(ctg) * np.conj(j_slow)
                + cf * np.conj(ctg) * j_fast
                + ctf * np.conj(cg) * np.conj(j_fast))
    )


def l2_tail_mass(rep: TailRep, lower: float | None = None) -> float:
    """int |f|^2 over the tail domain beyond `lower` (defaults to x0)."""
    val = product_integral(rep, rep, lower=lower)
    return float(np.real(val))


def representation_defect(m: int, x: float) -> float:
    """Pointwise defect of the corrected-momentum basis in the ODE at lam=0.

    Closed-form residual of Q^2 - p^2 = (3/4)(Q'/Q)^2 - (1/2) Q''/Q; the
    basis functions satisfy the oscillator equation up to this amount times
    the function value. Leading behavior (3 G (m+2)^2 / 8) x^{-(m+4)} with
    G = m (m+4) / 16.
    """
    s = 0.5 * m
    big_g = m * (m + 4) / 16.0
    gu = big_g * x ** (-(m + 2))
    eps = (m + 2) * gu / (2.0 * (1.0 + gu))
    return (
        big_g
        - 0.25 * (s - eps) ** 2
        - 0.5 * (s - eps)
        + (m + 2) ** 2 * gu / (4.0 * (1.0 + gu) ** 2)
    ) / (x * x)


def defect_budget(m: int, lam: float, x: float) -> float:
    """Estimated relative solution error of a tail started at x.

    Integrates |defect| / (2 Q) from x to infinity on a geometric grid.
    The defect is evaluated at lam = 0 and doubled: in the admissible
    region x^m >= 100 max(1, |lam|) the spectral shift perturbs it by far
    less than that margin.
    """
    total = 0.0
    a = x
    for _ in range(80):
        b = a * 1.25
        mid = 0.5 * (a + b)
        q, _ = corrected_momentum(m, lam, mid)
        inc = 2.0 * abs(representation_defect(m, mid)) / (2.0 * float(q)) * (b - a)
        total += inc
        if inc < 1e-18 * max(total, 1e-30):
            break
        a = b
    return total


def choose_switch(m: int, lam: float, tol: float) -> float:
    """Smallest switch abscissa meeting both the momentum-dominance rule
    (x^m >= 100 max(1, |lam|)) and the representation error budget."""
    x = (100.0 * max(1.0, abs(lam))) ** (1.0 / m)
    x = max(x, 1.5)
    for _ in range(40):
        if defect_budget(m, lam, x) <= tol:
            return x
        x *= 1.2
    raise TailError(f"could not meet tail error budget {tol:g}")
