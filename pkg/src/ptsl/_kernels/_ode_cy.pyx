# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Dormand-Prince 5(4) propagator for y'' = (sign*x^m - lam) y.

Same algorithm and call signature as `_ode_py.propagate`, restricted to
real data. The stepping loop runs without the GIL so window scans can be
parallelized with threads.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, log, sqrt
from libc.stdlib cimport free, malloc, realloc

cnp.import_array()

BACKEND_NAME = "compiled"

STATUS_OK = 0
STATUS_OVERFLOW = 1
STATUS_MAX_STEPS = 2
STATUS_STEP_UNDERFLOW = 3

cdef enum:
    ST_OK = 0
    ST_OVERFLOW = 1
    ST_MAX_STEPS = 2
    ST_STEP_UNDERFLOW = 3

DEF C2 = 0.2
DEF C3 = 0.3
DEF C4 = 0.8
DEF C5 = 0.8888888888888888

cdef double A21 = 1.0 / 5.0
cdef double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0
cdef double A63 = 46732.0 / 5247.0, A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0
cdef double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0
cdef double B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0

cdef double OVERFLOW_LIMIT = 1e150


cdef inline double xpow(double x, int m) nogil:
    cdef double r = 1.0
    cdef int i
    for i in range(m):
        r *= x
    return r


cdef struct Buf:
    double *x
    double *y
    double *z
    Py_ssize_t n
    Py_ssize_t cap


cdef inline int buf_push(Buf *b, double x, double y, double z) nogil:
    cdef double *np_
    if b.n >= b.cap:
        b.cap = b.cap * 2 if b.cap > 0 else 1024
        np_ = <double *> realloc(b.x, b.cap * sizeof(double))
        if np_ == NULL:
            return -1
        b.x = np_
        np_ = <double *> realloc(b.y, b.cap * sizeof(double))
        if np_ == NULL:
            return -1
        b.y = np_
        np_ = <double *> realloc(b.z, b.cap * sizeof(double))
        if np_ == NULL:
            return -1
        b.z = np_
    b.x[b.n] = x
    b.y[b.n] = y
    b.z[b.n] = z
    b.n += 1
    return 0


def propagate(int m, double sign, double lam, double x0, double y0, double dy0,
              double x1, double rtol, double atol=0.0, double fixed_h=0.0,
              bint store=True, double renorm_threshold=0.0,
              long max_steps=20_000_000):
    """See `_ode_py.propagate`; real-valued fast path."""
    if x1 == x0:
        raise ValueError("empty integration interval")

    cdef double direction = 1.0 if x1 > x0 else -1.0
    cdef double span = fabs(x1 - x0)
    cdef double x = x0, y = y0, z = dy0
    cdef double log_scale = 0.0
    cdef int status = ST_OK
    cdef long steps = 0
    cdef double h, q0, q1, scale0
    cdef double k1y, k1z, k2y, k2z, k3y, k3z, k4y, k4z, k5y, k5z, k6y, k6z, k7y, k7z
    cdef double xa, ya, za, ynew, znew, erry, errz, scy, scz, ey, ez, err
    cdef double remaining, mag, inv, factor, pbar, smag, den
    cdef Py_ssize_t i
    cdef int push_fail = 0

    cdef Buf buf
    buf.x = NULL
    buf.y = NULL
    buf.z = NULL
    buf.n = 0
    buf.cap = 0

    q0 = sign * xpow(x0, m) - lam
    q1 = sign * xpow(x1, m) - lam
    scale0 = sqrt(max(1.0, max(fabs(q0), fabs(q1))))
    if fixed_h > 0.0:
        h = fixed_h * direction
    else:
        h = direction * min(span, 1e-2 / scale0)

    with nogil:
        if store:
            push_fail = buf_push(&buf, x, y, z)
        k1y = z
        k1z = (sign * xpow(x, m) - lam) * y

        while push_fail == 0:
            if steps >= max_steps:
                status = ST_MAX_STEPS
                break
            steps += 1

            remaining = x1 - x
            if direction * remaining <= 0.0:
                break
            if fabs(h) > fabs(remaining):
                h = remaining

            xa = x + C2 * h
            ya = y + h * (A21 * k1y)
            za = z + h * (A21 * k1z)
            k2y = za
            k2z = (sign * xpow(xa, m) - lam) * ya

            xa = x + C3 * h
            ya = y + h * (A31 * k1y + A32 * k2y)
            za = z + h * (A31 * k1z + A32 * k2z)
            k3y = za
            k3z = (sign * xpow(xa, m) - lam) * ya

            xa = x + C4 * h
            ya = y + h * (A41 * k1y + A42 * k2y + A43 * k3y)
            za = z + h * (A41 * k1z + A42 * k2z + A43 * k3z)
            k4y = za
            k4z = (sign * xpow(xa, m) - lam) * ya

            xa = x + C5 * h
            ya = y + h * (A51 * k1y + A52 * k2y + A53 * k3y + A54 * k4y)
            za = z + h * (A51 * k1z + A52 * k2z + A53 * k3z + A54 * k4z)
            k5y = za
            k5z = (sign * xpow(xa, m) - lam) * ya

            xa = x + h
            ya = y + h * (A61 * k1y + A62 * k2y + A63 * k3y + A64 * k4y + A65 * k5y)
            za = z + h * (A61 * k1z + A62 * k2z + A63 * k3z + A64 * k4z + A65 * k5z)
            k6y = za
            k6z = (sign * xpow(xa, m) - lam) * ya

            ynew = y + h * (B1 * k1y + B3 * k3y + B4 * k4y + B5 * k5y + B6 * k6y)
            znew = z + h * (B1 * k1z + B3 * k3z + B4 * k4z + B5 * k5z + B6 * k6z)
            k7y = znew
            k7z = (sign * xpow(xa, m) - lam) * ynew

            erry = h * (E1 * k1y + E3 * k3y + E4 * k4y + E5 * k5y + E6 * k6y + E7 * k7y)
            errz = h * (E1 * k1z + E3 * k3z + E4 * k4z + E5 * k5z + E6 * k6z + E7 * k7z)

            # Energy-weighted error norm; see _ode_py for rationale.
            pbar = sqrt(max(1.0, max(fabs(sign * xpow(x, m) - lam),
                                     fabs(sign * xpow(x + h, m) - lam))))
            smag = max(fabs(y), max(fabs(ynew), max(fabs(z), fabs(znew)) / pbar))
            den = atol + rtol * smag
            if den == 0.0:
                err = 0.0
            else:
                ey = fabs(erry)
                ez = fabs(errz) / pbar
                err = sqrt(0.5 * (ey * ey + ez * ez)) / den

            if fixed_h > 0.0 or err <= 1.0:
                x = x + h
                y = ynew
                z = znew
                k1y = k7y
                k1z = k7z

                mag = max(fabs(y), fabs(z))
                if renorm_threshold > 0.0 and mag > renorm_threshold:
                    inv = 1.0 / mag
                    y *= inv
                    z *= inv
                    k1y *= inv
                    k1z *= inv
                    log_scale += log(mag)
                    if store:
                        for i in range(buf.n):
                            buf.y[i] *= inv
                            buf.z[i] *= inv
                elif renorm_threshold <= 0.0 and mag > OVERFLOW_LIMIT:
                    status = ST_OVERFLOW
                    break

                if store:
                    push_fail = buf_push(&buf, x, y, z)

            if fixed_h <= 0.0:
                factor = 0.9 * err ** -0.2 if err > 1e-30 else 5.0
                h *= min(5.0, max(0.2, factor))
                if fabs(h) < 1e-14 * max(1.0, fabs(x)):
                    status = ST_STEP_UNDERFLOW
                    break

    if push_fail != 0:
        free(buf.x)
        free(buf.y)
        free(buf.z)
        raise MemoryError("node buffer allocation failed")

    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs, ys, zs
    if store and buf.n > 0:
        if buf.x[buf.n - 1] != x:
            buf_push(&buf, x, y, z)
        xs = np.empty(buf.n, dtype=np.float64)
        ys = np.empty(buf.n, dtype=np.float64)
        zs = np.empty(buf.n, dtype=np.float64)
        for i in range(buf.n):
            xs[i] = buf.x[i]
            ys[i] = buf.y[i]
            zs[i] = buf.z[i]
    else:
        xs = np.array([x0, x], dtype=np.float64)
        ys = np.array([y0, y], dtype=np.float64)
        zs = np.array([dy0, z], dtype=np.float64)

    free(buf.x)
    free(buf.y)
    free(buf.z)
    return xs, ys, zs, log_scale, status, x
