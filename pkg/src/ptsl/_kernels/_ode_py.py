"""Pure-Python Dormand-Prince 5(4) propagator for y'' = (sign*x^m - lam) y.

Reference implementation and import-time fallback for the compiled kernel.
It is dtype-generic: `y0`, `dy0` and `lam` may be complex, which the
compiled kernel does not support.
"""

import math

import numpy as np

BACKEND_NAME = "python"

# Dormand-Prince coefficients (5th order propagation, 4th order error).
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
# b - b*: error estimator weights (stage 2 weight is zero).
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

STATUS_OK = 0
STATUS_OVERFLOW = 1
STATUS_MAX_STEPS = 2
STATUS_STEP_UNDERFLOW = 3

_OVERFLOW_LIMIT = 1e150


def _xpow(x, m):
    r = 1.0
    for _ in range(m):
        r *= x
    return r


def propagate(
    m,
    sign,
    lam,
    x0,
    y0,
    dy0,
    x1,
    rtol,
    atol=0.0,
    fixed_h=0.0,
    store=True,
    renorm_threshold=0.0,
    max_steps=20_000_000,
):
    """Integrate y'' = (sign*x^m - lam)*y from x0 to x1.

    Returns (xs, ys, dys, log_scale, status, x_reached). The arrays hold the
    accepted step endpoints (just the two ends when store=False). When
    `renorm_threshold` > 0 the pair (y, y') is rescaled by a common factor
    whenever it exceeds the threshold and the accumulated log of that factor
    is returned; otherwise exceeding the representable range stops the run
    with STATUS_OVERFLOW.
    """
    if x1 == x0:
        raise ValueError("empty integration interval")
    direction = 1.0 if x1 > x0 else -1.0
    span = abs(x1 - x0)

    x = float(x0)
    y = y0 + 0.0
    z = dy0 + 0.0
    log_scale = 0.0

    xs = [x]
    ys = [y]
    zs = [z]

    def rhs_q(xx):
        return sign * _xpow(xx, m) - lam

    # Initial step: resolve the local wavelength / decay scale.
    if fixed_h > 0.0:
        h = fixed_h * direction
    else:
        scale = max(1.0, abs(rhs_q(x0)), abs(rhs_q(x1))) ** 0.5
        h = direction * min(span, 1e-2 / scale)

    k1y, k1z = z, rhs_q(x) * y
    status = STATUS_OK
    steps = 0

    while True:
        if steps >= max_steps:
            status = STATUS_MAX_STEPS
            break
        steps += 1

        remaining = x1 - x
        if direction * remaining <= 0.0:
            break
        if abs(h) > abs(remaining):
            h = remaining

        # Stage evaluations.
        xa = x + _C2 * h
        ya = y + h * (_A21 * k1y)
        za = z + h * (_A21 * k1z)
        k2y, k2z = za, rhs_q(xa) * ya

        xa = x + _C3 * h
        ya = y + h * (_A31 * k1y + _A32 * k2y)
        za = z + h * (_A31 * k1z + _A32 * k2z)
        k3y, k3z = za, rhs_q(xa) * ya

        xa = x + _C4 * h
        ya = y + h * (_A41 * k1y + _A42 * k2y + _A43 * k3y)
        za = z + h * (_A41 * k1z + _A42 * k2z + _A43 * k3z)
        k4y, k4z = za, rhs_q(xa) * ya

        xa = x + _C5 * h
        ya = y + h * (_A51 * k1y + _A52 * k2y + _A53 * k3y + _A54 * k4y)
        za = z + h * (_A51 * k1z + _A52 * k2z + _A53 * k3z + _A54 * k4z)
        k5y, k5z = za, rhs_q(xa) * ya

        xa = x + h
        ya = y + h * (_A61 * k1y + _A62 * k2y + _A63 * k3y + _A64 * k4y + _A65 * k5y)
        za = z + h * (_A61 * k1z + _A62 * k2z + _A63 * k3z + _A64 * k4z + _A65 * k5z)
        k6y, k6z = za, rhs_q(xa) * ya

        ynew = y + h * (_B1 * k1y + _B3 * k3y + _B4 * k4y + _B5 * k5y + _B6 * k6y)
        znew = z + h * (_B1 * k1z + _B3 * k3z + _B4 * k4z + _B5 * k5z + _B6 * k6z)
        k7y, k7z = znew, rhs_q(xa) * ynew

        erry = h * (_E1 * k1y + _E3 * k3y + _E4 * k4y + _E5 * k5y + _E6 * k6y + _E7 * k7y)
        errz = h * (_E1 * k1z + _E3 * k3z + _E4 * k4z + _E5 * k5z + _E6 * k6z + _E7 * k7z)

        # Energy-weighted norm: z is measured against the local momentum
        # scale so the control stays meaningful when one component crosses
        # zero, and the scale is homogeneous of degree one in (y, z), which
        # keeps step selection exactly invariant under scaling the data.
        pbar = math.sqrt(max(1.0, abs(rhs_q(x)), abs(rhs_q(x + h))))
        smag = max(abs(y), abs(ynew), max(abs(z), abs(znew)) / pbar)
        den = atol + rtol * smag
        if den == 0.0:
            err = 0.0
        else:
            ey = abs(erry)
            ez = abs(errz) / pbar
            err = math.sqrt(0.5 * (ey * ey + ez * ez)) / den

        if fixed_h > 0.0 or err <= 1.0:
            x = x + h
            y, z = ynew, znew
            k1y, k1z = k7y, k7z

            mag = max(abs(y), abs(z))
            if renorm_threshold > 0.0 and mag > renorm_threshold:
                inv = 1.0 / mag
                y *= inv
                z *= inv
                k1y *= inv
                k1z *= inv
                log_scale += math.log(mag)
                if store:
                    ys = [v * inv for v in ys]
                    zs = [v * inv for v in zs]
            elif renorm_threshold <= 0.0 and mag > _OVERFLOW_LIMIT:
                status = STATUS_OVERFLOW
                break

            if store:
                xs.append(x)
                ys.append(y)
                zs.append(z)

        if fixed_h <= 0.0:
            factor = 0.9 * err ** -0.2 if err > 1e-30 else 5.0
            h *= min(5.0, max(0.2, factor))
            if abs(h) < 1e-14 * max(1.0, abs(x)):
                status = STATUS_STEP_UNDERFLOW
                break

    if not store or status in (STATUS_OVERFLOW, STATUS_MAX_STEPS, STATUS_STEP_UNDERFLOW):
        if not store:
            xs = [x0, x]
            ys = [ys[0], y]
            zs = [zs[0], z]
    if store and xs[-1] != x:
        xs.append(x)
        ys.append(y)
        zs.append(z)

    dtype = complex if any(isinstance(v, complex) for v in (y, z, lam)) else float
    return (
        np.asarray(xs, dtype=float),
        np.asarray(ys, dtype=dtype),
        np.asarray(zs, dtype=dtype),
        log_scale,
        status,
        x,
    )
