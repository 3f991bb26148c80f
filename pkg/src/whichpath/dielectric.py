"""Low-frequency longitudinal response of the metallic plate.

The total dielectric function is eps = eps_i + chi_el, with the lattice
entering only through the static constant eps_i (its dissipative part is
dropped). chi_el is the Lindhard susceptibility in its low-frequency form:
imaginary part linear in omega inside the particle-hole window
omega/v_F < q < 2 k_F, real part frozen at omega = 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, SingularityError
from .materials import (
    E_CHARGE, EPS0, HBAR, K_B, M_E,
    MetalParameters, ion_plasma_frequency, ion_screening_constant,
)
from .quadrature import DEFAULT_REL_TOL, integrate

__all__ = [
    "LossModel", "SusceptibilityValue",
    "im_chi_lindhard", "re_chi_lindhard_static", "lindhard_chi",
    "local_field_factor", "hubbard_chi", "susceptibility",
    "ion_plasma_frequency", "ion_screening_constant",
    "dielectric_function", "loss_function", "thermal_factor", "memory_kernel",
]


class LossModel(str, enum.Enum):
    LINDHARD = "lindhard"
    HUBBARD = "hubbard"


@dataclass(frozen=True)
class SusceptibilityValue:
    real_part: float
    imag_part: float

    def __complex__(self) -> complex:
        return complex(self.real_part, self.imag_part)


def _check_q(q):
    if not q > 0:
        raise DomainError(f"wave vector must be positive, got {q!r}")


def im_chi_lindhard(q: float, omega: float, metal: MetalParameters) -> float:
    """Imaginary Lindhard susceptibility to first order in omega.

    e^2 m^2 omega / (2 pi eps0 hbar^3 q^3) inside omega/v_F < q < 2 k_F,
    zero elsewhere.
    """
    _check_q(q)
    if omega < 0:
        raise DomainError(f"frequency must be non-negative, got {omega!r}")
    if not (omega / metal.fermi_velocity < q < 2.0 * metal.k_F):
        return 0.0
    return E_CHARGE**2 * M_E**2 * omega / (2.0 * math.pi * EPS0 * HBAR**3 * q**3)


def _lindhard_bracket(u: float) -> float:
    # 1 + (1-u^2)/(2u) ln|(1+u)/(1-u)| with u = q/2k_F, written via atanh
    # so that small u and u ~ 1 stay accurate.
    if u == 1.0:
        return 1.0
    return 1.0 + (1.0 - u * u) / u * math.atanh(min(u, 1.0 / u))


def re_chi_lindhard_static(q: float, metal: MetalParameters) -> float:
    """Static real part of the Lindhard susceptibility.

    Tends to (k_TF/q)^2 for q -> 0; the logarithm's coefficient vanishes at
    q = 2 k_F, where the bracket equals exactly 1.
    """
    _check_q(q)
    k_F = metal.k_F
    pref = M_E * E_CHARGE**2 * k_F / (2.0 * math.pi**2 * EPS0 * HBAR**2 * q * q)
    return pref * _lindhard_bracket(q / (2.0 * k_F))


def lindhard_chi(q: float, omega: float, metal: MetalParameters) -> SusceptibilityValue:
    return SusceptibilityValue(re_chi_lindhard_static(q, metal), im_chi_lindhard(q, omega, metal))


def local_field_factor(q: float, metal: MetalParameters) -> float:
    """Hubbard G(q) = q^2 / (2 (q^2 + k_F^2 + k_TF^2)), in [0, 1/2)."""
    q2 = q * q
    return 0.5 * q2 / (q2 + metal.k_F**2 + metal.k_TF**2)


def hubbard_chi(
    q: float, omega: float, metal: MetalParameters, *, ion_screened: bool = False
) -> SusceptibilityValue:
    """Local-field corrected susceptibility chi / (1 - G chi).

    By default G multiplies the bare electron susceptibility. With
    ``ion_screened=True`` the correction acts on chi/eps_i instead, i.e. the
    electron-electron interaction is taken as screened by the lattice, and
    the result is scaled back by eps_i.
    """
    chi = complex(lindhard_chi(q, omega, metal))
    g = local_field_factor(q, metal)
    scale = ion_screening_constant(metal) if ion_screened else 1.0
    denom = 1.0 - g * chi / scale
    if abs(denom) == 0.0:
        raise SingularityError(f"1 - G chi vanishes at q = {q!r}")
    out = chi / denom
    return SusceptibilityValue(out.real, out.imag)


def susceptibility(q: float, omega: float, metal: MetalParameters,
                   model: LossModel = LossModel.LINDHARD) -> SusceptibilityValue:
    model = LossModel(model)
    if model is LossModel.HUBBARD:
        return hubbard_chi(q, omega, metal)
    return lindhard_chi(q, omega, metal)


def dielectric_function(q: float, omega: float, metal: MetalParameters,
                        model: LossModel = LossModel.LINDHARD) -> complex:
    """eps_1 + i eps_2 = eps_i + chi_model."""
    chi = susceptibility(q, omega, metal, model)
    return complex(ion_screening_constant(metal) + chi.real_part, chi.imag_part)


def loss_function(q: float, omega: float, metal: MetalParameters,
                  model: LossModel = LossModel.LINDHARD) -> float:
    """Im[-1/eps] ~ eps_2 / eps_1^2, valid while eps_2 << eps_1."""
    eps = dielectric_function(q, omega, metal, model)
    if eps.imag == 0.0:
        return 0.0
    return eps.imag / eps.real**2


def thermal_factor(omega: float, temperature: float) -> float:
    """coth(hbar omega / 2 k_B T)."""
    return 1.0 / math.tanh(HBAR * omega / (2.0 * K_B * temperature))


def memory_kernel(
    q: float,
    t: float,
    metal: MetalParameters,
    temperature: float = 293.0,
    model: LossModel = LossModel.LINDHARD,
    rel_tol: float = DEFAULT_REL_TOL,
) -> complex:
    """Reservoir memory function M_q(t) = int_0^inf e^{-i w t} coth(hbar w/2kT) Im[-1/eps] dw.

    The loss vanishes above w = q v_F, so the integral is finite. For
    t > 0 it is split into panels of one oscillation period each and summed
    in order.
    """
    _check_q(q)
    if not temperature > 0:
        raise DomainError("temperature must be positive")
    w_max = q * metal.fermi_velocity
    if q >= 2.0 * metal.k_F:
        return 0j

    def spectral(w):
        return thermal_factor(w, temperature) * loss_function(q, w, metal, model)

    m0 = integrate(spectral, 0.0, w_max, rel_tol=rel_tol, abs_tol=1e-300).value
    if t == 0.0 or m0 == 0.0:
        return complex(m0, 0.0)

    period = 2.0 * math.pi / abs(t)
    n_panels = max(1, math.ceil(w_max / period))
    tol = rel_tol * m0 / n_panels
    re = im = 0.0
    for k in range(n_panels):
        lo = k * period
        hi = min(w_max, (k + 1) * period)
        re += integrate(lambda w: math.cos(w * t) * spectral(w), lo, hi,
                        rel_tol=rel_tol, abs_tol=tol).value
        im -= integrate(lambda w: math.sin(w * t) * spectral(w), lo, hi,
                        rel_tol=rel_tol, abs_tol=tol).value
    return complex(re, im)
