"""Adaptive quadrature and the error function.

The integrator is a thin, deterministic layer over QUADPACK's adaptive
Gauss-Kronrod routines (``scipy.integrate.quad``). Infinite ranges are
mapped onto finite ones with a tangent substitution before QUADPACK sees
them:

    [a, inf)     x = a + tan(t),  t in [0, pi/2)
    (-inf, b]    x = b - tan(t),  t in [0, pi/2)
    (-inf, inf)  x = tan(t),      t in (-pi/2, pi/2)

so an algebraic tail ~1/x^2 becomes a bounded integrand. Gauss-Kronrod
nodes never touch interval ends, so integrands may be singular there as
long as the singularity is integrable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

from scipy import integrate as _integrate
from scipy import special as _special

from .errors import ConvergenceError, IntegrandError

DEFAULT_REL_TOL = 1e-8
DEFAULT_ABS_TOL = 1e-12
DEFAULT_LIMIT = 500

# Tail cut, in decay scales, used when the caller certifies exp(-x/scale) decay.
_TRUNCATION_PAD = 10.0


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int

    def __float__(self) -> float:
        return self.value


class _Counted:
    """Wraps an integrand: counts calls and rejects non-finite values."""

    def __init__(self, f: Callable[[float], float], transform=None):
        self.f = f
        self.transform = transform
        self.calls = 0

    def __call__(self, t: float) -> float:
        self.calls += 1
        if self.transform is None:
            x, jac = t, 1.0
        else:
            x, jac = self.transform(t)
        y = self.f(x)
        if not math.isfinite(y):
            raise IntegrandError(x, y)
        return y * jac


def _upper_tail(a):
    def tr(t):
        c = math.cos(t)
        return a + math.tan(t), 1.0 / (c * c)
    return tr


def _lower_tail(b):
    def tr(t):
        c = math.cos(t)
        return b - math.tan(t), 1.0 / (c * c)
    return tr


def _whole_line(t):
    c = math.cos(t)
    return math.tan(t), 1.0 / (c * c)


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    *,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
    points: Iterable[float] = (),
    limit: int = DEFAULT_LIMIT,
    decay_scale: float | None = None,
) -> QuadratureResult:
    """Integrate ``f`` over [a, b]; either end may be infinite.

    Parameters
    ----------
    f : callable
        Real scalar integrand.
    a, b : float
        Limits, ``a < b``. ``-math.inf`` / ``math.inf`` select the
        half-line or real-line substitutions.
    rel_tol, abs_tol : float
        Target ``|error| <= max(rel_tol*|value|, abs_tol)``.
    points : iterable of float
        Interior breakpoints (kinks, steps, log singularities, peaks).
    limit : int
        Maximum number of subintervals.
    decay_scale : float, optional
        For ``[a, inf)`` only: the caller certifies the integrand decays at
        least like ``exp(-(x-a)/decay_scale)``. The range is then truncated
        at ``a + decay_scale*(ln(1/rel_tol) + 10)`` instead of being mapped.

    Raises
    ------
    ConvergenceError
        Tolerance not met within ``limit`` subintervals; carries the best
        estimate.
    IntegrandError
        ``f`` returned NaN or inf; carries the abscissa.
    """
    if not (rel_tol > 0 and abs_tol > 0):
        raise ValueError("tolerances must be positive")
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    points = sorted(float(p) for p in points if a < p < b)

    if math.isinf(b) and not math.isinf(a) and decay_scale is not None:
        b = a + decay_scale * (math.log(1.0 / rel_tol) + _TRUNCATION_PAD)
        points = [p for p in points if p < b]

    if math.isinf(a) and math.isinf(b):
        g = _Counted(f, _whole_line)
        lo, hi = -math.pi / 2, math.pi / 2
        pts = [math.atan(p) for p in points]
    elif math.isinf(b):
        g = _Counted(f, _upper_tail(a))
        lo, hi = 0.0, math.pi / 2
        pts = [math.atan(p - a) for p in points]
    elif math.isinf(a):
        # t runs from b down to -inf; the orientation flip is absorbed by
        # integrating t over [0, pi/2) with a positive Jacobian.
        g = _Counted(f, _lower_tail(b))
        lo, hi = 0.0, math.pi / 2
        pts = sorted(math.atan(b - p) for p in points)
    else:
        g = _Counted(f)
        lo, hi = a, b
        pts = points

    out = _integrate.quad(
        g, lo, hi,
        epsabs=abs_tol, epsrel=rel_tol, limit=limit,
        points=pts or None, full_output=1,
    )
    # quad appends a message only when its ier flag is non-zero.
    value, err = out[0], out[1]
    flagged = len(out) > 3
    target = max(rel_tol * abs(value), abs_tol)
    if flagged and not err <= target:
        msg = " ".join(str(out[3]).split())
        raise ConvergenceError(
            f"tolerance not reached (error estimate {err:.3g} > {target:.3g}): {msg}",
            best_estimate=value, error_estimate=err, evaluations=g.calls,
        )
    return QuadratureResult(value=value, error_estimate=abs(err), evaluations=g.calls)


def erf(x: float) -> float:
    """Error function (libm; better than 1e-15 relative)."""
    return math.erf(x)


def erfc(x: float) -> float:
    return math.erfc(x)


def erfcx(x: float) -> float:
    """Scaled complementary error function exp(x^2) erfc(x)."""
    return float(_special.erfcx(x))
