"""Electron-side observables: reduced state after the flight, fringes, visibility."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import partial
from typing import IO, Sequence

import numpy as np

from .dephasing import inverse_decoherence_length
from .dielectric import LossModel
from .errors import ConfigError, DomainError
from .materials import E_CHARGE, EPS0, HBAR, K_B, ExperimentSetup, MetalParameters


@dataclass(frozen=True)
class DensityMatrix2:
    """Two-path reduced density matrix, entries rho_ij for i, j in {0, 1}."""

    rho00: complex
    rho01: complex
    rho10: complex
    rho11: complex

    def as_array(self) -> np.ndarray:
        return np.array([[self.rho00, self.rho01], [self.rho10, self.rho11]], dtype=complex)

    @property
    def trace(self) -> complex:
        return self.rho00 + self.rho11

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        a = self.as_array()
        return bool(np.allclose(a, a.conj().T, atol=tol, rtol=0))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.as_array())

    @property
    def coherence(self) -> float:
        """|rho_01| / sqrt(rho_00 rho_11), the fringe visibility it implies."""
        return abs(self.rho01) / math.sqrt((self.rho00 * self.rho11).real)


def _check_flight(L, inverse_length):
    if not L >= 0:
        raise DomainError(f"plate length must be >= 0, got {L!r}")
    if not inverse_length >= 0:
        raise DomainError(f"inverse length must be >= 0, got {inverse_length!r}")


def density_matrix_after_flight(L: float, inverse_length: float) -> DensityMatrix2:
    """State after the plate, starting from (|0> + |1>)/sqrt(2).

    Populations are untouched; coherences shrink by exp(-L/lambda).
    """
    _check_flight(L, inverse_length)
    off = 0.5 * math.exp(-L * inverse_length)
    return DensityMatrix2(0.5 + 0j, off + 0j, off + 0j, 0.5 + 0j)


def visibility(L: float, inverse_length: float) -> float:
    _check_flight(L, inverse_length)
    return math.exp(-L * inverse_length)


def fringe_intensity(dphi, L: float, inverse_length: float, j: float = 1.0):
    """I = 2 j [1 + exp(-L/lambda) cos(dphi)]; ``dphi`` may be an array."""
    if not j >= 0:
        raise DomainError("beam intensity must be >= 0")
    alpha = visibility(L, inverse_length)
    return 2.0 * j * (1.0 + alpha * np.cos(dphi))


def visibility_from_extremes(intensity) -> float:
    """(I_max - I_min) / (I_max + I_min)."""
    i = np.asarray(intensity, dtype=float)
    hi, lo = float(i.max()), float(i.min())
    return (hi - lo) / (hi + lo)


def de_broglie_wavelength(velocity: float, mass: float) -> float:
    return 2.0 * math.pi * HBAR / (mass * velocity)


def fringe_spacing(setup: ExperimentSetup) -> float:
    """Far-field period lambda_e * screen_distance / D on the screen."""
    if not setup.screen_distance > 0:
        raise ConfigError("screen distance must be positive")
    if setup.D == 0:
        return math.inf
    return de_broglie_wavelength(setup.velocity, setup.particle_mass) * setup.screen_distance / setup.D


def two_slit_phase(x_s, setup: ExperimentSetup):
    """Far-field phase difference 2 pi D x_S / (lambda_e * screen_distance)."""
    if not setup.screen_distance > 0:
        raise ConfigError("screen distance must be positive")
    lam = de_broglie_wavelength(setup.velocity, setup.particle_mass)
    return 2.0 * math.pi * setup.D * np.asarray(x_s, dtype=float) / (lam * setup.screen_distance)


def screen_grid(setup: ExperimentSetup, n_fringes: int = 4, points_per_fringe: int = 16) -> np.ndarray:
    """Symmetric x_S grid that samples every bright (dphi = 0) and dark (dphi = pi) point."""
    if points_per_fringe < 2 or points_per_fringe % 2:
        raise ConfigError("points_per_fringe must be an even number >= 2")
    spacing = fringe_spacing(setup)
    k = np.arange(-n_fringes * points_per_fringe, n_fringes * points_per_fringe + 1)
    return k * (spacing / points_per_fringe)


@dataclass(frozen=True)
class FringeMap:
    """Fringe intensity over (z0, x_S), normalised to a global maximum of 1."""

    z0: np.ndarray
    x_s: np.ndarray
    intensity: np.ndarray
    visibility: np.ndarray  # exp(-L/lambda) per row

    def row_visibility(self) -> np.ndarray:
        """Visibility recovered from each row's sampled extremes."""
        hi = self.intensity.max(axis=1)
        lo = self.intensity.min(axis=1)
        return (hi - lo) / (hi + lo)


def _row_visibility(z0, setup, metal, model):
    s = _replace_z0(setup, z0)
    return inverse_decoherence_length(s, metal, model).visibility


def _replace_z0(setup, z0):
    # packet widths scale with z0 only when they were left at their default
    return replace(setup, z0=float(z0), l_x=None, l_y=None, l_z=None)


def fringe_map(z0_values: Sequence[float], x_s_values: Sequence[float],
               setup: ExperimentSetup, metal: MetalParameters,
               model: LossModel = LossModel.LINDHARD, j: float = 1.0,
               executor=None) -> FringeMap:
    """Simulated screen image for a beam spread over a range of heights.

    ``executor`` may be any object with an order-preserving ``map`` (e.g. a
    ``concurrent.futures`` pool); rows are assembled in ``z0_values`` order.
    """
    z0 = np.asarray(z0_values, dtype=float)
    x_s = np.asarray(x_s_values, dtype=float)
    mapper = map if executor is None else executor.map
    alphas = np.array(list(mapper(partial(_row_visibility, setup=setup, metal=metal, model=model), z0)))
    dphi = two_slit_phase(x_s, setup)
    raw = 2.0 * j * (1.0 + alphas[:, None] * np.cos(dphi)[None, :])
    peak = raw.max()
    intensity = raw / peak if peak > 0 else raw
    return FringeMap(z0=z0, x_s=x_s, intensity=intensity, visibility=alphas)


def write_fringe_csv(fmap: FringeMap, fh: IO[str]) -> None:
    """Matrix CSV: header row of x_S values, first column z0 (metres)."""
    fh.write("z0\\x_S," + ",".join(format(x, ".17g") for x in fmap.x_s) + "\n")
    for z, row in zip(fmap.z0, fmap.intensity):
        fh.write(format(z, ".17g") + "," + ",".join(format(v, ".17g") for v in row) + "\n")


def write_pgm(fmap: FringeMap, fh: IO[str]) -> None:
    """Plain (P2) grayscale image, one pixel row per z0, max value 255."""
    rows, cols = fmap.intensity.shape
    fh.write(f"P2\n{cols} {rows}\n255\n")
    pix = np.rint(np.clip(fmap.intensity, 0.0, 1.0) * 255).astype(int)
    for row in pix:
        fh.write(" ".join(str(p) for p in row) + "\n")


def sanity_estimates(setup: ExperimentSetup, metal: MetalParameters | None = None,
                     packet_width: float = 2e-6) -> dict:
    """Order-of-magnitude checks on the setup.

    image_force_deflection : metres the image attraction e^2/(16 pi eps0 z0^2)
        pulls the electron down during the flight time L/v.
    dispersion_spread : extra width of a minimum-uncertainty packet of
        initial width ``packet_width`` after the flight.
    crossover_temperature : hbar v / (k_B z0); well below T means the
        classical limit of coth holds.
    frequency_ratio : hbar v / z0 over E_F (needs ``metal``).
    """
    m = setup.particle_mass
    t_flight = setup.L / setup.velocity
    accel = E_CHARGE**2 / (16.0 * math.pi * EPS0 * setup.z0**2 * m)
    deflection = 0.5 * accel * t_flight**2
    s0 = packet_width
    spread = s0 * (math.sqrt(1.0 + (HBAR * t_flight / (m * s0 * s0)) ** 2) - 1.0)
    crossover = HBAR * setup.velocity / (K_B * setup.z0)
    out = {
        "flight_time": t_flight,
        "image_force_deflection": deflection,
        "dispersion_spread": spread,
        "crossover_temperature": crossover,
    }
    if metal is not None:
        out["frequency_ratio"] = HBAR * setup.velocity / setup.z0 / metal.fermi_energy
    return out
