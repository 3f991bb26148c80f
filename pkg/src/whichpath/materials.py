"""Physical constants, plate materials and the flying-electron setup.

Everything is SI. Unit conversion from eV, um or cm happens at the CLI
boundary, never in here.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ConfigError, DomainError, ParseError, ValidationError


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA-2018 values."""

    elementary_charge: float = 1.602176634e-19  # C
    vacuum_permittivity: float = 8.8541878128e-12  # F/m
    reduced_planck: float = 1.054571817e-34  # J s
    electron_mass: float = 9.1093837015e-31  # kg
    boltzmann: float = 1.380649e-23  # J/K

    @property
    def bohr_radius(self) -> float:
        return (
            4.0 * math.pi * self.vacuum_permittivity * self.reduced_planck**2
            / (self.electron_mass * self.elementary_charge**2)
        )


CONSTANTS = PhysicalConstants()

E_CHARGE = CONSTANTS.elementary_charge
EPS0 = CONSTANTS.vacuum_permittivity
HBAR = CONSTANTS.reduced_planck
M_E = CONSTANTS.electron_mass
K_B = CONSTANTS.boltzmann
A0 = CONSTANTS.bohr_radius
EV = E_CHARGE  # J per eV

DEFAULT_EPSILON_I = 2.0

MATERIALS_ENV = "WHICHPATH_MATERIALS"


@dataclass(frozen=True)
class MetalParameters:
    """Free-electron description of a plate metal.

    Attributes
    ----------
    name : str
    k_F : float
        Fermi wave vector, 1/m.
    k_TF : float
        Thomas-Fermi wave vector, 1/m.
    epsilon_i : float or None
        Static ion dielectric constant. ``None`` means "derive it from the
        ion data", see :func:`ion_screening_constant`.
    ion_charge, ion_mass, ion_density : float, optional
        Z, M (kg) and n (1/m^3), only needed for the ion plasma frequency.
    """

    name: str
    k_F: float
    k_TF: float
    epsilon_i: float | None = DEFAULT_EPSILON_I
    ion_charge: float | None = None
    ion_mass: float | None = None
    ion_density: float | None = None

    def __post_init__(self):
        if not self.name:
            raise ValidationError("metal name must be non-empty")
        for label in ("k_F", "k_TF"):
            value = getattr(self, label)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"{self.name}: {label} must be positive, got {value!r}")
        if self.epsilon_i is not None and not (self.epsilon_i >= 1.0):
            raise ValidationError(f"{self.name}: epsilon_i must be >= 1, got {self.epsilon_i!r}")
        ion = (self.ion_charge, self.ion_mass, self.ion_density)
        if any(v is not None for v in ion):
            if any(v is None or not v > 0 for v in ion):
                raise ValidationError(f"{self.name}: ion data needs positive Z, M and n")

    @property
    def has_ion_data(self) -> bool:
        return self.ion_charge is not None

    @property
    def eps_i(self) -> float:
        """Resolved ion dielectric constant."""
        return ion_screening_constant(self)

    @property
    def fermi_velocity(self) -> float:
        return HBAR * self.k_F / M_E

    @property
    def fermi_energy(self) -> float:
        return (HBAR * self.k_F) ** 2 / (2.0 * M_E)


def ion_plasma_frequency(metal: MetalParameters) -> float:
    """omega_pi = Z e sqrt(n / (eps0 M)), rad/s."""
    if not metal.has_ion_data:
        raise ConfigError(f"{metal.name}: no ion data (Z, M, n) available")
    return metal.ion_charge * E_CHARGE * math.sqrt(metal.ion_density / (EPS0 * metal.ion_mass))


def ion_screening_constant(metal: MetalParameters) -> float:
    """Static lattice screening constant epsilon_i.

    A stored value always wins. Without one, the phonon susceptibility
    omega_pi^2 / (omega(q)^2 - omega^2) is taken at omega -> 0 with the
    short-wavelength replacement omega(k_D) -> omega_pi, which gives
    1 + omega_pi^2 / omega_pi^2.
    """
    if metal.epsilon_i is not None:
        return metal.epsilon_i
    if not metal.has_ion_data:
        raise ConfigError(f"{metal.name}: neither epsilon_i nor ion data given")
    w_pi = ion_plasma_frequency(metal)
    return 1.0 + w_pi**2 / w_pi**2


def electron_velocity(kinetic_energy: float, mass: float = M_E) -> float:
    """Non-relativistic speed sqrt(2E/m) for a kinetic energy in joules."""
    if not (kinetic_energy > 0):
        raise DomainError(f"kinetic energy must be positive, got {kinetic_energy!r}")
    return math.sqrt(2.0 * kinetic_energy / mass)


def lindhard_argument(metal: MetalParameters) -> float:
    """Dimensionless material parameter x = m e^2 / (2 pi eps0 eps_i hbar^2 k_F).

    Equivalent to 2 / (eps_i a0 k_F).
    """
    eps_i = ion_screening_constant(metal)
    return M_E * E_CHARGE**2 / (2.0 * math.pi * EPS0 * eps_i * HBAR**2 * metal.k_F)


@dataclass(frozen=True)
class ExperimentSetup:
    """Geometry and beam of a single run.

    ``velocity`` in m/s, lengths in m, temperature in K. Packet widths left
    as ``None`` default to 1 % of the height z0.
    """

    velocity: float
    D: float = 10e-6
    z0: float = 100e-6
    L: float = 1e-2
    T: float = 293.0
    l_x: float | None = None
    l_y: float | None = None
    l_z: float | None = None
    screen_distance: float = 1.0
    particle_mass: float = field(default=M_E)

    def __post_init__(self):
        for label in ("velocity", "z0", "L", "T", "particle_mass"):
            value = getattr(self, label)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"{label} must be positive, got {value!r}")
        if not (math.isfinite(self.D) and self.D >= 0):
            raise ValidationError(f"D must be non-negative, got {self.D!r}")
        for label in ("l_x", "l_y", "l_z"):
            value = getattr(self, label)
            if value is None:
                object.__setattr__(self, label, 0.01 * self.z0)
            elif not value >= 0:
                raise ValidationError(f"{label} must be >= 0, got {value!r}")
        if not self.l_z < self.z0:
            raise ValidationError("packet height l_z must be smaller than z0")

    @classmethod
    def from_energy(cls, kinetic_energy: float, mass: float = M_E, **kwargs) -> "ExperimentSetup":
        return cls(velocity=electron_velocity(kinetic_energy, mass), particle_mass=mass, **kwargs)

    @property
    def kinetic_energy(self) -> float:
        return 0.5 * self.particle_mass * self.velocity**2

    @property
    def beta(self) -> float:
        return 1.0 / (K_B * self.T)

    @property
    def d_over_z0(self) -> float:
        return self.D / self.z0


def bundled_table_path() -> Path:
    return Path(str(resources.files("whichpath") / "data" / "metals.csv"))


def default_table_path() -> Path:
    """Table named by $WHICHPATH_MATERIALS, else the bundled one."""
    env = os.environ.get(MATERIALS_ENV)
    return Path(env) if env else bundled_table_path()


_REQUIRED = ("name", "k_F", "k_TF", "epsilon_i")
_OPTIONAL = ("Z", "M", "n_ion")


def load_material_table(path: str | os.PathLike | None = None) -> list[MetalParameters]:
    """Read a ``name,k_F,k_TF,epsilon_i`` CSV (``#`` lines are comments).

    Optional ion columns ``Z,M,n_ion`` are accepted; an empty ``epsilon_i``
    cell then means "derive from ion data".
    """
    path = Path(path) if path is not None else default_table_path()
    with open(path, newline="") as fh:
        numbered = [(i, line) for i, line in enumerate(fh, start=1)
                    if line.strip() and not line.lstrip().startswith("#")]
    if not numbered:
        raise ParseError(f"{path}: no header or rows")
    header_line, header = numbered[0][0], next(csv.reader([numbered[0][1]]))
    header = [h.strip() for h in header]
    missing = [c for c in _REQUIRED if c not in header]
    if missing:
        raise ParseError(f"missing column(s) {', '.join(missing)}", header_line)
    unknown = [c for c in header if c not in _REQUIRED + _OPTIONAL]
    if unknown:
        raise ParseError(f"unknown column(s) {', '.join(unknown)}", header_line)
    if len(numbered) == 1:
        raise ParseError(f"{path}: table has no rows")

    metals: list[MetalParameters] = []
    seen: set[str] = set()
    for lineno, line in numbered[1:]:
        cells = [c.strip() for c in next(csv.reader([line]))]
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(cells)}", lineno)
        row = dict(zip(header, cells))

        def num(key, optional=False):
            text = row.get(key, "")
            if text == "" and optional:
                return None
            try:
                return float(text)
            except ValueError:
                raise ParseError(f"column {key}: not a number: {text!r}", lineno) from None

        try:
            metal = MetalParameters(
                name=row["name"],
                k_F=num("k_F"),
                k_TF=num("k_TF"),
                epsilon_i=num("epsilon_i", optional=True),
                ion_charge=num("Z", optional=True),
                ion_mass=num("M", optional=True),
                ion_density=num("n_ion", optional=True),
            )
        except ValidationError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
        if metal.name in seen:
            raise ConfigError(f"duplicate metal {metal.name!r} on line {lineno}")
        seen.add(metal.name)
        metals.append(metal)
    return metals


def find_metal(name: str, table: list[MetalParameters] | None = None) -> MetalParameters:
    table = load_material_table() if table is None else table
    for metal in table:
        if metal.name.lower() == name.lower():
            return metal
    known = ", ".join(m.name for m in table)
    raise ConfigError(f"unknown metal {name!r} (known: {known})")
