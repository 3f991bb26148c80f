"""Flying-electron side of the correlation constants.

Functions here take SI arguments and an :class:`ExperimentSetup`, but
evaluate everything in units of the height z0 and the flight time z0/v:

    Q = q z0,   W = omega z0 / v,   x = D / z0.
"""

from __future__ import annotations

import math
from typing import Iterable

from .errors import DomainError
from .materials import ExperimentSetup
from .quadrature import DEFAULT_REL_TOL, erfc, erfcx, integrate

__all__ = [
    "vertical_overlap_Iz", "vertical_factor",
    "spectral_reduced_exact", "spectral_reduced_saddle", "spectral_asymptotic",
    "asymptotic_frequency_integral", "gamma_geometry",
    "broadened_delta", "edge_delta", "broadened_delta_mass",
]

_TINY = 1e-300


def vertical_overlap_Iz(q_z: float, q_tilde: float, setup: ExperimentSetup) -> complex:
    """Overlap of the packet's vertical profile with the plate (closed form).

    Terms of order (l_z/z0) exp(-(z0/l_z)^2) are dropped.
    """
    if not q_tilde > 0:
        raise DomainError(f"q_tilde must be positive, got {q_tilde!r}")
    z0, lz = setup.z0, setup.l_z
    if lz == 0.0:
        mag = math.pi / q_tilde * math.exp(-q_tilde * z0)
    else:
        y = q_tilde * lz / 2.0 - z0 / lz
        if y < 0.0:
            mag = (math.pi / (2.0 * q_tilde)
                   * math.exp(0.25 * (q_tilde * lz) ** 2 - q_tilde * z0) * erfc(y))
        else:
            # 1 - erf(y) = erfcx(y) exp(-y^2); the exponents combine to -(z0/l_z)^2
            mag = math.pi / (2.0 * q_tilde) * math.exp(-((z0 / lz) ** 2)) * erfcx(y)
    return mag / complex(-q_tilde, q_z)


def vertical_factor(q_tilde: float, z0: float, l_z: float) -> float:
    """exp((q l_z)^2/2 - 2 q z0) * erfc(q l_z/2 - z0/l_z)^2, overflow-safe.

    Equals |I_z|^2 (q_z^2 + q~^2) (2 q~/pi)^2; tends to 4 exp(-2 q z0) as
    l_z -> 0.
    """
    if l_z == 0.0:
        return 4.0 * math.exp(-2.0 * q_tilde * z0)
    y = q_tilde * l_z / 2.0 - z0 / l_z
    if y < 0.0:
        return math.exp(0.5 * (q_tilde * l_z) ** 2 - 2.0 * q_tilde * z0) * erfc(y) ** 2
    # exp(a^2) erfc(a) form: the exponents combine to -2 (z0/l_z)^2
    return math.exp(-2.0 * (z0 / l_z) ** 2) * erfcx(y) ** 2


def _reduced(q, omega, setup):
    z0 = setup.z0
    return q * z0, omega * z0 / setup.velocity, setup.D / z0


def spectral_reduced_exact(q: float, omega: float, setup: ExperimentSetup,
                           rel_tol: float = DEFAULT_REL_TOL) -> float:
    """S(q, omega) by direct angular integration, no saddle point.

    The polar angle is fixed by the energy constraint sin(theta) = -omega/(q v);
    the azimuth is integrated numerically. The integrand depends on phi only
    through |cos(phi)|, so one quadrant is integrated and multiplied by 4;
    the sharp peak at phi = pi/2 sits at the quadrant edge and is resolved
    with breakpoints at multiples of its width omega/(q v).
    """
    Q, W, x = _reduced(q, omega, setup)
    if W <= 0.0 or Q <= W:
        return 0.0
    if x == 0.0:
        return 0.0
    z0 = setup.z0
    lx, ly, lz = setup.l_x / z0, setup.l_y / z0, setup.l_z / z0
    r = W / Q
    cos_t0 = math.sqrt(1.0 - r * r)
    base = -0.5 * (lx * W) ** 2

    def f(psi):
        # psi = pi/2 - phi, so cos(phi) = sin(psi)
        c = math.sin(psi) * cos_t0
        s2 = c * c + r * r
        bracket = 2.0 * math.sin(0.5 * x * Q * c) ** 2  # 1 - cos(x Q c)
        gauss = math.exp(base - 0.5 * (ly * Q * c) ** 2)
        return bracket * gauss * vertical_factor(Q * math.sqrt(s2), 1.0, lz) / s2

    pts = [k * r for k in (1.0, 3.0, 10.0, 30.0, 100.0, 300.0) if k * r < math.pi / 2]
    res = integrate(f, 0.0, math.pi / 2, rel_tol=rel_tol, abs_tol=_TINY, points=pts)
    return 4.0 * (r / 8.0) * res.value


def _saddle_integral(W, x, lx, ly, lz, rel_tol):
    base = -0.5 * (lx * W) ** 2

    def f(u):
        root = math.sqrt(1.0 + u * u)
        bracket = 2.0 * math.sin(0.5 * x * W * u) ** 2
        gauss = math.exp(base - 0.5 * (ly * W * u) ** 2)
        return bracket / (1.0 + u * u) * gauss * 0.25 * vertical_factor(W * root, 1.0, lz)

    # even in u
    return 2.0 * integrate(f, 0.0, math.inf, rel_tol=rel_tol, abs_tol=_TINY).value


def spectral_reduced_saddle(q: float, omega: float, setup: ExperimentSetup,
                            rel_tol: float = DEFAULT_REL_TOL) -> float:
    """S(q, omega) with the azimuthal integral done by the saddle point at phi = +-pi/2.

    [1 - (omega/qv)^2]^(-1/2) times a single u-integral that keeps all
    packet-width factors. Zero when q <= omega/v.
    """
    Q, W, x = _reduced(q, omega, setup)
    if W <= 0.0 or Q <= W or x == 0.0:
        return 0.0
    z0 = setup.z0
    r = W / Q
    val = _saddle_integral(W, x, setup.l_x / z0, setup.l_y / z0, setup.l_z / z0, rel_tol)
    return val / math.sqrt(1.0 - r * r)


def _asymptotic(W, x, rel_tol):
    if W <= 0.0 or x == 0.0:
        return 0.0

    def f(t):
        # u = tan(t): du/(1+u^2) = dt, sqrt(1+u^2) = 1/cos(t)
        c = math.cos(t)
        if c <= 0.0:
            return 0.0
        return 2.0 * math.sin(0.5 * x * W * math.tan(t)) ** 2 * math.exp(-2.0 * W / c)

    return 2.0 * integrate(f, 0.0, math.pi / 2, rel_tol=rel_tol, abs_tol=_TINY).value


def spectral_asymptotic(omega: float, setup: ExperimentSetup,
                        rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Plateau value S(omega) reached for q >> omega/v, point-like packet.

    int du [1 - cos(D omega u / v)] / (1+u^2) exp(-2 z0 omega sqrt(1+u^2) / v)
    """
    if not omega > 0:
        raise DomainError(f"frequency must be positive, got {omega!r}")
    _, W, x = _reduced(1.0, omega, setup)
    return _asymptotic(W, x, rel_tol)


def asymptotic_frequency_integral(d_over_z0: float, rel_tol: float = 1e-10) -> float:
    """int_0^inf S(omega)/omega d omega, evaluated in reduced frequency W.

    The inner u-integrals are done at a tolerance 100x tighter than the
    outer one.
    """
    inner = rel_tol * 1e-2

    def f(W):
        return _asymptotic(W, d_over_z0, inner) / W

    return integrate(f, 0.0, math.inf, rel_tol=rel_tol, abs_tol=_TINY).value


def gamma_geometry(x: float, rel_tol: float = 1e-10) -> float:
    """Geometry function gamma(x) of the path-separation ratio x = D/z0.

    gamma(x) = 1/2 int du/(1+u^2) ln[1 + (x^2/4) u^2/(1+u^2)],
    monotone, ~ (pi/16) x^2 for small x.
    """
    if not x >= 0:
        raise DomainError(f"x must be non-negative, got {x!r}")
    if x == 0.0:
        return 0.0
    a = 0.25 * x * x

    def f(u):
        u2 = u * u
        return math.log1p(a * u2 / (1.0 + u2)) / (1.0 + u2)

    # even integrand: 1/2 * 2 * int_0^inf
    return integrate(f, 0.0, math.inf, rel_tol=rel_tol, abs_tol=_TINY).value


def broadened_delta(q: float, L: float) -> float:
    """Finite-plate delta 4 sin^2(Lq/2) / (2 pi L q^2); unit mass, peak L/(2 pi)."""
    if not L > 0:
        raise DomainError("plate length must be positive")
    h = 0.5 * L * q
    if abs(h) < 1e-8:
        return L / (2.0 * math.pi)
    return 4.0 * math.sin(h) ** 2 / (2.0 * math.pi * L * q * q)


def edge_delta(q: float, L: float) -> float:
    """Single-sided variant sin(qL/2) / (pi q), also of unit mass."""
    if not L > 0:
        raise DomainError("plate length must be positive")
    if abs(q) * L < 1e-8:
        return L / (2.0 * math.pi)
    return math.sin(0.5 * q * L) / (math.pi * q)


def broadened_delta_mass(L: float, n_lobes: int = 200, rel_tol: float = 1e-10) -> float:
    """Numerical integral of :func:`broadened_delta` over the real line.

    Integrates lobe by lobe out to |q| = 2 pi n_lobes / L and adds the tail
    beyond it analytically, with sin^2 replaced by its mean 1/2.
    """
    period = 2.0 * math.pi / L
    body = 0.0
    for k in range(n_lobes):
        body += integrate(lambda q: broadened_delta(q, L), k * period, (k + 1) * period,
                          rel_tol=rel_tol, abs_tol=_TINY).value
    q_max = n_lobes * period
    tail = 1.0 / (math.pi * L * q_max)
    return 2.0 * (body + tail)


def spectral_grid(q_values: Iterable[float], omega_values: Iterable[float],
                  setup: ExperimentSetup, method: str = "saddle",
                  rel_tol: float = DEFAULT_REL_TOL) -> list[tuple[float, float, float]]:
    """Rows (q z0, omega z0/v, S) over the Cartesian grid, q varying fastest."""
    fn = {"saddle": spectral_reduced_saddle, "exact": spectral_reduced_exact}[method]
    rows = []
    for w in omega_values:
        for q in q_values:
            rows.append((q * setup.z0, w * setup.z0 / setup.velocity, fn(q, w, setup, rel_tol)))
    return rows
