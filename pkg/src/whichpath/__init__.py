"""Which-path dephasing of a single electron flying over a metallic plate."""

from .dephasing import (
    DephasingBreakdown, closed_form_lambda, consistency_audit, decoherence_time,
    inverse_decoherence_length, momentum_loss_integral, mu_asymptotic, mu_material,
    relaxation_rate, semiclassical_relaxation_rate, thermal_de_broglie,
)
from .dielectric import LossModel, hubbard_chi, loss_function, memory_kernel
from .interference import (
    DensityMatrix2, FringeMap, density_matrix_after_flight, fringe_intensity, fringe_map,
    sanity_estimates, two_slit_phase, visibility,
)
from .materials import (
    CONSTANTS, ExperimentSetup, MetalParameters, electron_velocity, find_metal,
    lindhard_argument, load_material_table,
)
from .quadrature import QuadratureResult, erf, integrate
from .spectral import (
    gamma_geometry, spectral_asymptotic, spectral_reduced_exact, spectral_reduced_saddle,
)

__all__ = [
    "CONSTANTS", "DensityMatrix2", "DephasingBreakdown", "ExperimentSetup", "FringeMap",
    "LossModel", "MetalParameters", "QuadratureResult", "closed_form_lambda",
    "consistency_audit", "decoherence_time", "density_matrix_after_flight",
    "electron_velocity", "erf", "find_metal", "fringe_intensity", "fringe_map",
    "gamma_geometry", "hubbard_chi", "integrate", "inverse_decoherence_length",
    "lindhard_argument", "load_material_table", "loss_function", "memory_kernel",
    "momentum_loss_integral", "mu_asymptotic", "mu_material", "relaxation_rate",
    "sanity_estimates", "semiclassical_relaxation_rate", "spectral_asymptotic",
    "spectral_reduced_exact", "spectral_reduced_saddle", "thermal_de_broglie",
    "two_slit_phase", "visibility",
]

__version__ = "0.1.0"
