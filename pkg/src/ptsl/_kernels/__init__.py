"""Integrator kernel selection.

A compiled Cython kernel is preferred for the hot stepping loop; the
pure-Python module `_ode_py` implements the identical algorithm and is
used when the extension is missing, when PTSL_PURE_PYTHON is set, or
when the inputs are complex (the compiled kernel is real-only).
"""

import os

from . import _ode_py

__all__ = ["propagate", "propagate_backend", "BACKEND", "STATUS_OK",
           "STATUS_OVERFLOW", "STATUS_MAX_STEPS", "STATUS_STEP_UNDERFLOW"]

STATUS_OK = _ode_py.STATUS_OK
STATUS_OVERFLOW = _ode_py.STATUS_OVERFLOW
STATUS_MAX_STEPS = _ode_py.STATUS_MAX_STEPS
STATUS_STEP_UNDERFLOW = _ode_py.STATUS_STEP_UNDERFLOW

if os.environ.get("PTSL_PURE_PYTHON"):
    _impl = _ode_py
else:
    try:
        from . import _ode_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _ode_py

BACKEND = _impl.BACKEND_NAME


def _is_complex(*vals) -> bool:
    return any(isinstance(v, complex) and v.imag != 0.0 for v in vals)


def propagate(m, sign, lam, x0, y0, dy0, x1, rtol, atol=0.0, fixed_h=0.0,
              store=True, renorm_threshold=0.0, max_steps=20_000_000):
    """Backend-dispatching wrapper; see `_ode_py.propagate` for semantics."""
    if _is_complex(lam, y0, dy0):
        mod = _ode_py
        lam_, y0_, dy0_ = complex(lam), complex(y0), complex(dy0)
    else:
        mod = _impl
        lam_, y0_, dy0_ = float(lam.real if isinstance(lam, complex) else lam), \
            float(y0.real if isinstance(y0, complex) else y0), \
            float(dy0.real if isinstance(dy0, complex) else dy0)
    return mod.propagate(int(m), float(sign), lam_, float(x0), y0_, dy0_,
                         float(x1), float(rtol), float(atol), float(fixed_h),
                         bool(store), float(renorm_threshold), int(max_steps))


def propagate_backend(name):
    """Return the raw propagate of a named backend ('python' or 'compiled')."""
    if name == "python":
        return _ode_py.propagate
    if name == "compiled":
        from . import _ode_cy  # noqa: F811 - raises ImportError when absent

        return _ode_cy.propagate
    raise ValueError(f"unknown backend {name!r}")
