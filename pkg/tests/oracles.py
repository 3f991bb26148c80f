"""Independent reference implementations used only by the tests.

Nothing here imports the package's integrator or formulas: integrals are
done with fixed-grid composite Simpson rules (numpy) or mpmath, and
constants come from scipy.constants.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np
from scipy import constants as sc

E = sc.elementary_charge
EPS0 = sc.epsilon_0
HBAR = sc.hbar
ME = sc.electron_mass
KB = sc.Boltzmann
A0 = 4 * math.pi * EPS0 * HBAR**2 / (ME * E**2)


def simpson(y: np.ndarray, h: float) -> float:
    """Composite Simpson rule on an odd number of equally spaced samples."""
    if len(y) % 2 == 0:
        raise ValueError("Simpson needs an odd number of samples")
    return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()))


def gamma_closed(x: float) -> float:
    """gamma(x) = pi ln[(1 + sqrt(1 + x^2/4)) / 2].

    Obtained by the substitution u = tan t, which turns the defining
    integral into int_0^{pi/2} ln(1 + a sin^2 t) dt with a = x^2/4.
    """
    a = x * x / 4.0
    # (sqrt(1+a) - 1)/2 written without cancellation for small a
    return math.pi * math.log1p(0.5 * a / (math.sqrt(1.0 + a) + 1.0))


def gamma_simpson(x: float, n: int = 4001) -> float:
    t = np.linspace(0.0, math.pi / 2, n)
    return simpson(np.log1p(0.25 * x * x * np.sin(t) ** 2), t[1] - t[0])


def mu_simpson(x: float, n: int = 200_001) -> float:
    """Fixed-grid mu(x); u = s^2 pushes samples toward u = 0 and avoids u = 1 exactly."""
    s = np.linspace(0.0, 1.0, n)
    u = s * s
    k = x / (4.0 * math.pi)
    with np.errstate(divide="ignore", invalid="ignore"):
        b = 1.0 + (1.0 - u * u) / (2.0 * u) * np.log((1.0 + u) / (1.0 - u))
    b[0] = 2.0
    b[-1] = 1.0
    f = u / (u * u + k * b) ** 2 * 2.0 * s
    return 0.25 * x * x * simpson(f, s[1] - s[0])


def mu_mpmath(x: float, dps: int = 30) -> float:
    with mpmath.workdps(dps):
        k = mpmath.mpf(x) / (4 * mpmath.pi)

        def f(u):
            b = 1 + (1 - u * u) / (2 * u) * mpmath.log((1 + u) / (1 - u))
            return 1 / u**3 / (1 + k * b / u**2) ** 2

        return float(mpmath.mpf(x) ** 2 / 4 * mpmath.quad(f, [0, 0.5, 1]))


def erf_series(x: float) -> float:
    """Maclaurin series of erf in mpmath arithmetic (no erf call)."""
    with mpmath.workdps(50):
        x = mpmath.mpf(x)
        term, total, n = x, x, 0
        while abs(term) > mpmath.mpf(10) ** -45:
            n += 1
            term *= -x * x / n
            total += term / (2 * n + 1)
        return float(2 / mpmath.sqrt(mpmath.pi) * total)


def im_chi(q: float, omega: float, k_F: float) -> float:
    v_F = HBAR * k_F / ME
    if not omega / v_F < q < 2 * k_F:
        return 0.0
    return E**2 * ME**2 * omega / (2 * math.pi * EPS0 * HBAR**3 * q**3)


def re_chi_static(q: float, k_F: float) -> float:
    log = math.log(abs((q + 2 * k_F) / (q - 2 * k_F))) if q != 2 * k_F else 0.0
    bracket = 1 + (4 * k_F**2 - q**2) / (4 * q * k_F) * log
    return ME * E**2 * k_F / (2 * math.pi**2 * EPS0 * HBAR**2 * q**2) * bracket


def inverse_length(T: float, v: float, k_F: float, eps_i: float, d_over_z0: float) -> float:
    x = 2.0 / (eps_i * A0 * k_F)
    return KB * T / (2 * math.pi**2 * HBAR * v) * mu_simpson(x) * gamma_simpson(d_over_z0)


def asymptotic_S(W: float, x: float, n: int = 20001) -> float:
    """Plateau spectrum, reduced units, by Simpson in t = atan(u) over [0, pi/2)."""
    t = np.linspace(0.0, math.pi / 2, n)[:-1]
    c = np.cos(t)
    f = 2.0 * (1.0 - np.cos(x * W * np.tan(t))) * np.exp(-2.0 * W / c) / 1.0
    f = np.append(f, 0.0)
    return simpson(f, t[1] - t[0])


def kF_from_density(n: float) -> float:
    return (3 * math.pi**2 * n) ** (1.0 / 3.0)
