"""Surface-mode and cavity-photon creation in time-modulated media.

Submodules
----------
numerics    Bessel functions, root finding, ODE integration, quadrature
media       time-dependent permittivity / permeability
dispersion  single-interface and three-layer surface modes
cavity      TM modes of a cylindrical cavity with a dielectric slab
dynamics    mode evolution, Bogolyubov coefficients, creation rates
cli         scenario runner
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BracketError,
    ConfigError,
    ConvergenceError,
    DegenerateFormulaError,
    DomainError,
    PoleError,
    PreconditionError,
    ResonancePoleError,
    SingularMediumError,
    TrackingError,
    VacSPPError,
)
from .media import C0, MediumState, ModulationProfile, Polarization, RegionStack  # noqa: E402

__all__ = [
    "BracketError",
    "C0",
    "ConfigError",
    "ConvergenceError",
    "DegenerateFormulaError",
    "DomainError",
    "MediumState",
    "ModulationProfile",
    "PoleError",
    "Polarization",
    "PreconditionError",
    "RegionStack",
    "ResonancePoleError",
    "SingularMediumError",
    "TrackingError",
    "VacSPPError",
    "__version__",
]
