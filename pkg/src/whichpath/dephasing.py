"""Dephasing over a metallic plate: material function, decoherence length and times."""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .dielectric import LossModel, loss_function
from .errors import RegimeWarning
from .materials import (
    E_CHARGE, EPS0, HBAR, K_B, M_E,
    ExperimentSetup, MetalParameters, ion_screening_constant, lindhard_argument,
)
from .quadrature import integrate
from .spectral import gamma_geometry

MU_REL_TOL = 1e-11


@dataclass(frozen=True)
class DephasingBreakdown:
    """All intermediate quantities of one decoherence-length evaluation (SI)."""

    x: float
    mu: float
    gamma: float
    inverse_length: float
    dephasing_time: float
    relaxation_rate: float
    thermal_de_broglie: float
    visibility: float
    L: float
    model: str = LossModel.LINDHARD.value
    warnings: tuple[str, ...] = field(default=())

    @property
    def delta_R(self) -> float:
        """Change of the correlation-constant difference over the plate, -L/lambda."""
        return -self.inverse_length * self.L


def _mu_integrand(x):
    k = x / (4.0 * math.pi)

    def f(u):
        if u == 1.0:
            b = 1.0
        else:
            b = 1.0 + (1.0 - u * u) / u * math.atanh(u)
        # [1 + k b/u^2]^-2 / u^3 rewritten as u / (u^2 + k b)^2 to stay finite at u -> 0
        return u / (u * u + k * b) ** 2

    return f


@functools.lru_cache(maxsize=1024)
def mu_material(x: float, rel_tol: float = MU_REL_TOL) -> float:
    """Material function mu(x) of the Lindhard plate.

    mu(x) = (x^2/4) int_0^1 du/u^3 [1 + (x/(4 pi u^2))(1 + (1-u^2)/(2u) ln((1+u)/(1-u)))]^-2
    """
    if not x >= 0:
        raise ValueError(f"x must be non-negative, got {x!r}")
    if x == 0.0:
        return 0.0
    res = integrate(_mu_integrand(x), 0.0, 1.0, rel_tol=rel_tol, abs_tol=1e-300)
    return 0.25 * x * x * res.value


def mu_asymptotic(x: float, order: int = 2) -> float:
    """Small-x expansion (pi/4) x - x^2/12, truncated at ``order``."""
    if order == 1:
        return 0.25 * math.pi * x
    if order == 2:
        return 0.25 * math.pi * x - x * x / 12.0
    raise ValueError("order must be 1 or 2")


def momentum_loss_integral(omega: float, metal: MetalParameters,
                           model: LossModel = LossModel.LINDHARD,
                           rel_tol: float = MU_REL_TOL) -> float:
    """int dq eps_2(q, omega) / eps_1(q, 0)^2 over the particle-hole window, 1/m.

    The window's lower edge omega/v_F is where the loss switches on; the
    neglected sliver below it is O((omega/(k_F v_F))^2).
    """
    if not omega > 0:
        raise ValueError("frequency must be positive")
    lo = omega / metal.fermi_velocity
    hi = 2.0 * metal.k_F
    res = integrate(lambda q: loss_function(q, omega, metal, model), lo, hi,
                    rel_tol=rel_tol, abs_tol=1e-300)
    return res.value


def mu_from_loss_integral(metal: MetalParameters, model: LossModel = LossModel.LINDHARD,
                          omega: float = 1e9, rel_tol: float = MU_REL_TOL) -> float:
    """mu extracted from the loss integral: value * e^2 / (2 pi eps0 hbar omega)."""
    value = momentum_loss_integral(omega, metal, model, rel_tol)
    return value * E_CHARGE**2 / (2.0 * math.pi * EPS0 * HBAR * omega)


def material_mu(metal: MetalParameters, model: LossModel = LossModel.LINDHARD) -> float:
    """mu for a metal: closed integral for Lindhard, loss integral for Hubbard."""
    model = LossModel(model)
    if model is LossModel.LINDHARD:
        return mu_material(lindhard_argument(metal))
    return _hubbard_mu(metal)


@functools.lru_cache(maxsize=64)
def _hubbard_mu(metal):
    return mu_from_loss_integral(metal, LossModel.HUBBARD)


def thermal_de_broglie(temperature: float) -> float:
    """2 pi hbar / sqrt(2 m k_B T) for an electron in the metal."""
    return 2.0 * math.pi * HBAR / math.sqrt(2.0 * M_E * K_B * temperature)


def relaxation_rate(z0: float, metal: MetalParameters) -> float:
    """1/tau_r = e^2 / (2 pi eps0 eps_i z0^2 hbar k_F)."""
    if not z0 > 0:
        raise ValueError("z0 must be positive")
    eps_i = ion_screening_constant(metal)
    return E_CHARGE**2 / (2.0 * math.pi * EPS0 * eps_i * z0**2 * HBAR * metal.k_F)


def semiclassical_relaxation_rate(z0: float, metal: MetalParameters) -> float:
    """1/tau_r as the relative energy gain rate of Fermi-surface electrons.

    dE/dt = v_F e F with the screened image-field force
    F = e / (4 pi eps0 eps_i z0^2), divided by E_F.
    """
    if not z0 > 0:
        raise ValueError("z0 must be positive")
    eps_i = ion_screening_constant(metal)
    v_F = HBAR * metal.k_F / M_E
    E_F = HBAR**2 * metal.k_F**2 / (2.0 * M_E)
    dE_dt = v_F * E_CHARGE**2 / (4.0 * math.pi * EPS0 * eps_i * z0**2)
    return dE_dt / E_F


def regime_warnings(setup: ExperimentSetup, metal: MetalParameters) -> list[str]:
    out = []
    if setup.velocity <= metal.fermi_velocity:
        out.append(f"beam velocity {setup.velocity:.3g} m/s does not exceed v_F = "
                   f"{metal.fermi_velocity:.3g} m/s of {metal.name}")
    if setup.D > setup.z0:
        out.append(f"D/z0 = {setup.d_over_z0:.3g} > 1: small-x expansion of gamma not valid")
    return out


def _prefactor(setup):
    return K_B * setup.T / (2.0 * math.pi**2 * HBAR * setup.velocity)


def inverse_decoherence_length(setup: ExperimentSetup, metal: MetalParameters,
                               model: LossModel = LossModel.LINDHARD) -> DephasingBreakdown:
    """lambda^-1 = k_B T / (2 pi^2 hbar v) * mu(x) * gamma(D/z0), with the full breakdown.

    Regime violations (v <= v_F, D > z0) are attached as warning strings;
    they never raise.
    """
    model = LossModel(model)
    x = lindhard_argument(metal)
    mu = material_mu(metal, model)
    gamma = gamma_geometry(setup.d_over_z0)
    inv = _prefactor(setup) * mu * gamma
    return DephasingBreakdown(
        x=x,
        mu=mu,
        gamma=gamma,
        inverse_length=inv,
        dephasing_time=1.0 / (setup.velocity * inv) if inv > 0 else math.inf,
        relaxation_rate=relaxation_rate(setup.z0, metal),
        thermal_de_broglie=thermal_de_broglie(setup.T),
        visibility=math.exp(-setup.L * inv),
        L=setup.L,
        model=model.value,
        warnings=tuple(regime_warnings(setup, metal)),
    )


def closed_form_lambda(setup: ExperimentSetup, metal: MetalParameters) -> float:
    """Approximate closed-form inverse decoherence length, evaluated literally:

        k_B T / (8 pi^2 hbar v) * m e^2 / (eps0 eps_i hbar k_F) * gamma(D/z0)

    This expression is one power of hbar short of 1/length; it is kept
    verbatim and flagged by :func:`consistency_audit`.
    """
    eps_i = ion_screening_constant(metal)
    return (K_B * setup.T / (8.0 * math.pi**2 * HBAR * setup.velocity)
            * M_E * E_CHARGE**2 / (EPS0 * eps_i * HBAR * metal.k_F)
            * gamma_geometry(setup.d_over_z0))


def decoherence_rate(setup: ExperimentSetup, metal: MetalParameters) -> float:
    """1/tau_d = (pi/32) (1/tau_r) (D / lambda_dB)^2, in 1/s."""
    lam = thermal_de_broglie(setup.T)
    return math.pi / 32.0 * relaxation_rate(setup.z0, metal) * (setup.D / lam) ** 2


def decoherence_time(setup: ExperimentSetup, metal: MetalParameters) -> float:
    """tau_d from the small-D/z0 closed form. Warns (RegimeWarning) when D > z0."""
    if setup.D > setup.z0:
        warnings.warn(f"D/z0 = {setup.d_over_z0:.3g} > 1", RegimeWarning, stacklevel=2)
    rate = decoherence_rate(setup, metal)
    return math.inf if rate == 0 else 1.0 / rate


# --- dimensional bookkeeping for the audit -------------------------------
# exponents over (kg, m, s, A, K)
_DIMS = {
    "e": (0, 0, 1, 1, 0),
    "eps0": (-1, -3, 4, 2, 0),
    "hbar": (1, 2, -1, 0, 0),
    "m": (1, 0, 0, 0, 0),
    "k_B": (1, 2, -2, 0, -1),
    "T": (0, 0, 0, 0, 1),
    "v": (0, 1, -1, 0, 0),
    "k_F": (0, -1, 0, 0, 0),
    "z0": (0, 1, 0, 0, 0),
    "D": (0, 1, 0, 0, 0),
}
_BASE = ("kg", "m", "s", "A", "K")

# symbolic power products of each route (dimensionless factors omitted)
ROUTE_FORMULAS = {
    "x": {"m": 1, "e": 2, "eps0": -1, "hbar": -2, "k_F": -1},
    "a": {"k_B": 1, "T": 1, "hbar": -1, "v": -1},
    "b": {"k_B": 1, "T": 1, "hbar": -2, "v": -1, "m": 1, "e": 2, "eps0": -1, "k_F": -1},
    "c": {"e": 2, "eps0": -1, "z0": -2, "hbar": -3, "k_F": -1,
          "D": 2, "m": 1, "k_B": 1, "T": 1, "v": -1},
}


def dimension_of(formula: dict[str, int]) -> tuple[Fraction, ...]:
    total = [Fraction(0)] * len(_BASE)
    for sym, power in formula.items():
        if power == 0:
            continue
        for i, e in enumerate(_DIMS[sym]):
            total[i] += power * e
    return tuple(total)


def format_dimension(dim) -> str:
    parts = [f"{b}^{int(p) if p.denominator == 1 else p}" if p != 1 else b
             for b, p in zip(_BASE, dim) if p != 0]
    return " ".join(parts) if parts else "1"


INVERSE_LENGTH = (0, -1, 0, 0, 0)


def consistency_audit(setup: ExperimentSetup, metal: MetalParameters,
                      model: LossModel = LossModel.LINDHARD) -> dict:
    """Compare three routes to the inverse decoherence length.

    (a) canonical: quadrature mu and gamma;
    (b) the approximate closed formula, evaluated literally;
    (c) 1/(v tau_d) from the small-separation decoherence time.
    Returns a JSON-serialisable report.
    """
    bd = inverse_decoherence_length(setup, metal, model)
    route_values = {
        "a": bd.inverse_length,
        "b": closed_form_lambda(setup, metal),
        "c": decoherence_rate(setup, metal) / setup.velocity,
    }
    canon = route_values["a"]
    ratios = {
        f"{k}/a": (v / canon if canon else math.nan) for k, v in route_values.items()
    }
    ratios["c/b"] = route_values["c"] / route_values["b"] if route_values["b"] else math.nan
    dims = {}
    for key in ("x", "a", "b", "c"):
        dim = dimension_of(ROUTE_FORMULAS[key])
        want = (0, 0, 0, 0, 0) if key == "x" else INVERSE_LENGTH
        dims[key] = {
            "dimension": format_dimension(dim),
            "expected": format_dimension(want),
            "consistent": dim == tuple(Fraction(w) for w in want),
        }
    notes = list(bd.warnings)
    for key in ("b", "c"):
        if not dims[key]["consistent"]:
            notes.append(f"route {key} is not 1/length; its ratio to route a carries units")
    return {
        "inputs": {
            "metal": metal.name,
            "k_F": metal.k_F,
            "epsilon_i": ion_screening_constant(metal),
            "model": bd.model,
            "velocity": setup.velocity,
            "kinetic_energy_eV": setup.kinetic_energy / E_CHARGE,
            "D": setup.D,
            "z0": setup.z0,
            "L": setup.L,
            "T": setup.T,
        },
        "canonical_route": "a",
        "route_descriptions": {
            "a": "k_B T/(2 pi^2 hbar v) * mu(x) * gamma(D/z0), mu and gamma by quadrature",
            "b": "approximate closed formula with mu ~ (pi/4) x, evaluated literally",
            "c": "tau_d^-1 / v with tau_d^-1 = (pi/32) tau_r^-1 (D/lambda_dB)^2",
        },
        "route_values": route_values,
        "ratios": ratios,
        "dimensional_checks": dims,
        "breakdown": {
            "x": bd.x, "mu": bd.mu, "gamma": bd.gamma,
            "dephasing_time": bd.dephasing_time,
            "relaxation_rate": bd.relaxation_rate,
            "thermal_de_broglie": bd.thermal_de_broglie,
            "visibility": bd.visibility,
        },
        "warnings": notes,
    }
