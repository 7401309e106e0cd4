"""Quadrature primitives for the bath integrals.

The spectral integrals here fall into three shapes:

* smooth integrands on a finite band, possibly with known interior
  breakpoints (handled by adaptive Gauss-Kronrod through QUADPACK);
* strongly oscillatory kernels cos(w t) / sin(w t) multiplying a smooth
  envelope, on a band or a half-line with slowly decaying tails
  (handled by the QAWO / QAWF oscillatory rules, which integrate the
  weight analytically per subinterval instead of chasing every cycle);
* the pulse filter integrand whose tan^2 poles are removable only in
  product form (handled by pole-aware banding plus a guarded integrand).

All wrappers return ``(value, error_estimate)`` and raise
:class:`~qsl_lab.errors.AccuracyError` when QUADPACK gives up entirely.
Callers accumulate the error estimates and enforce their own contracts.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.integrate import quad

from .errors import AccuracyError

_QUAD_LIMIT = 400


def band_quad(f, a, b, *, points=None, epsabs=1e-13, epsrel=1e-12, limit=_QUAD_LIMIT):
    """Adaptive Gauss-Kronrod integral of ``f`` on [a, b].

    ``points`` marks interior breakpoints (singular derivatives, guard
    boundaries); QUADPACK then never places a node exactly on them.
    """
    if b <= a:
        return 0.0, 0.0
    pts = None
    if points is not None:
        pts = sorted(p for p in points if a < p < b)
        if not pts:
            pts = None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        val, err = quad(f, a, b, points=pts, epsabs=epsabs, epsrel=epsrel,
                        limit=limit, full_output=0)
    if not math.isfinite(val):
        raise AccuracyError(f"band integral on [{a:g}, {b:g}] diverged", achieved=err)
    return val, err


def oscillatory_band_quad(f, a, b, t, kind, *, epsabs=1e-13, epsrel=1e-12, limit=_QUAD_LIMIT):
    """Integral of f(w) * cos(w t) or f(w) * sin(w t) on a finite band."""
    if b <= a:
        return 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        val, err = quad(f, a, b, weight=kind, wvar=t, epsabs=epsabs, epsrel=epsrel,
                        limit=limit, maxp1=100, full_output=0)
    if not math.isfinite(val):
        raise AccuracyError(f"oscillatory band integral on [{a:g}, {b:g}] diverged", achieved=err)
    return val, err


def oscillatory_tail_quad(f, a, t, kind, *, epsabs=1e-12):
    """Fourier integral of f(w) * cos/sin(w t) on [a, inf).

    Uses QUADPACK's convergence-accelerated Fourier rule, which is exact
    for the conditionally convergent 1/w-type tails the Drude spectrum
    produces. Falls back to looser absolute tolerances before giving up.
    """
    last_err = None
    for eps in (epsabs, epsabs * 100, epsabs * 1e4):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = quad(f, a, np.inf, weight=kind, wvar=t, epsabs=eps,
                       limlst=200, limit=_QUAD_LIMIT, maxp1=100, full_output=1)
        val, err = res[0], res[1]
        ier = 0 if len(res) < 4 else 1
        if math.isfinite(val) and (ier == 0 or err < 1e-8):
            return val, err
        last_err = err
    raise AccuracyError(f"Fourier tail integral from {a:g} failed to converge", achieved=last_err)


def adaptive_simpson(f, a, b, *, tol=1e-8, max_depth=30, noise_floor=1e-12):
    """Classic adaptive Simpson integration of a scalar function.

    Used for the time average of |dq/dt| in the closed-form speed-limit
    bound, where every evaluation is itself a pair of quadratures and
    node economy matters more than raw order. Panels whose refinement
    delta falls below ``noise_floor`` are accepted: the integrand itself
    carries quadrature jitter at that scale, so further splitting only
    chases noise.
    """
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(x0, x2, f0, f1, f2, acc, eps, depth):
        x1 = 0.5 * (x0 + x2)
        lm, rm = 0.5 * (x0 + x1), 0.5 * (x1 + x2)
        flm, frm = f(lm), f(rm)
        left = (x1 - x0) / 6.0 * (f0 + 4.0 * flm + f1)
        right = (x2 - x1) / 6.0 * (f1 + 4.0 * frm + f2)
        delta = left + right - acc
        if abs(delta) <= max(15.0 * eps, noise_floor):
            return left + right + delta / 15.0
        if depth <= 0:
            raise AccuracyError("adaptive Simpson hit maximum depth", achieved=abs(delta))
        return (recurse(x0, x1, f0, flm, f1, left, 0.5 * eps, depth - 1)
                + recurse(x1, x2, f1, frm, f2, right, 0.5 * eps, depth - 1))

    if b <= a:
        return 0.0
    return recurse(a, b, fa, fm, fb, whole, tol, max_depth)
