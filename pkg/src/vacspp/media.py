"""Time-dependent, spatially uniform media.

The modulation is parameterised on the ratio ``r(t) = eps2 / eps1(t)``
(``mu2 / mu1(t)`` for a magnetic drive) rather than on ``eps1(t)``
itself, because the creation rates depend on that combination only:

    r(t) = chi - kappa * sin(nu * (t - t_start))     for t_start <= t <= t_end

and the region-1 value is back-solved as ``eps1(t) = eps2 / r(t)``.
"""

import enum
import math
import warnings
from dataclasses import dataclass, field, replace

from .errors import DomainError, SingularMediumError

#: speed of light in vacuum, m/s
C0 = 299_792_458.0


class Target(str, enum.Enum):
    PERMITTIVITY = "Permittivity"
    PERMEABILITY = "Permeability"


class Polarization(str, enum.Enum):
    TM_ELECTRIC = "TMelectric"
    TE_MAGNETIC = "TEmagnetic"


@dataclass(frozen=True)
class MediumState:
    """Relative permittivity and permeability of one region at one instant.

    Passive media have ``Im(eps) >= 0`` and ``Im(mu) >= 0`` (``exp(-i w t)``
    convention).  Gain is allowed but warned about.
    """

    eps: complex = 1.0
    mu: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "eps", complex(self.eps))
        object.__setattr__(self, "mu", complex(self.mu))
        if self.eps.imag < 0 or self.mu.imag < 0:
            warnings.warn(f"non-passive medium {self}", RuntimeWarning, stacklevel=3)

    def swapped(self):
        """The dual medium with ``eps`` and ``mu`` exchanged."""
        return MediumState(self.mu, self.eps)

    def value(self, target):
        return self.eps if Target(target) is Target.PERMITTIVITY else self.mu


@dataclass(frozen=True)
class ModulationProfile:
    """Parametric drive of region 1 against a static region 2.

    Attributes
    ----------
    base : MediumState
        Region-1 medium outside the modulation window.
    partner : MediumState
        Static region-2 medium entering ``r(t)``.
    kappa : float
        Modulation depth, ``|kappa| < 1``.
    omega0 : float
        Reference (mode) angular frequency in rad/s.
    chi : float
        Static offset of ``r`` inside the window.
    t_start, t_end : float
        Modulation window in seconds.
    target : Target
        Which material parameter is driven.
    nu : float, optional
        Drive angular frequency; defaults to ``omega0``.
    """

    base: MediumState = field(default_factory=MediumState)
    partner: MediumState = field(default_factory=MediumState)
    kappa: float = 0.0
    omega0: float = 1.0
    chi: float = 0.0
    t_start: float = 0.0
    t_end: float = 1.0
    target: Target = Target.PERMITTIVITY
    nu: float = None

    def __post_init__(self):
        object.__setattr__(self, "target", Target(self.target))
        if self.nu is None:
            object.__setattr__(self, "nu", self.omega0)
        if not abs(self.kappa) < 1.0:
            raise DomainError(f"modulation depth |kappa|={abs(self.kappa)} must be < 1")
        if not self.t_start < self.t_end:
            raise DomainError("modulation window needs t_start < t_end")

    @property
    def drive_frequency(self):
        return self.nu

    def active(self, t):
        return self.kappa != 0.0 and self.t_start <= t <= self.t_end

    def ratio(self, t):
        """``r(t) = partner / region-1`` for the driven parameter."""
        if not self.active(t):
            return self.partner.value(self.target) / self.base.value(self.target)
        return self.chi - self.kappa * math.sin(self.nu * (t - self.t_start))

    def mirrored(self):
        """Same numbers with permittivity and permeability exchanged."""
        other = (
            Target.PERMEABILITY if self.target is Target.PERMITTIVITY else Target.PERMITTIVITY
        )
        return replace(
            self, base=self.base.swapped(), partner=self.partner.swapped(), target=other
        )


def eval_medium(profile, t):
    """Region-1 medium of ``profile`` at time ``t``.

    Raises
    ------
    SingularMediumError
        If ``r(t)`` is 0 (region-1 value unbounded) or -1 (the surface-mode
        pole ``eps1 + eps2 = 0``) at this instant.
    """
    if not profile.active(t):
        return profile.base
    r = profile.ratio(t)
    if r == 0.0:
        raise SingularMediumError(f"r(t)=0 at t={t}: region-1 value unbounded")
    if abs(1.0 + r) <= 1e-15:
        raise SingularMediumError(f"r(t)=-1 at t={t}: eps1 + eps2 = 0")
    driven = profile.partner.value(profile.target) / r
    if profile.target is Target.PERMITTIVITY:
        return MediumState(driven, profile.base.mu)
    return MediumState(profile.base.eps, driven)


def spp_exists(m1, m2, polarization=Polarization.TM_ELECTRIC):
    """Whether a bound surface mode exists at the 1|2 interface.

    TM (electric) modes need ``Re eps1 * Re eps2 < 0`` and
    ``Re eps1 + Re eps2 < 0``; TE (magnetic) modes the same with ``mu``.
    """
    if Polarization(polarization) is Polarization.TM_ELECTRIC:
        x1, x2 = m1.eps.real, m2.eps.real
    else:
        x1, x2 = m1.mu.real, m2.mu.real
    return x1 * x2 < 0.0 and x1 + x2 < 0.0


@dataclass(frozen=True)
class Region:
    label: str
    medium: object  # MediumState or ModulationProfile

    def state(self, t=0.0):
        if isinstance(self.medium, ModulationProfile):
            return eval_medium(self.medium, t)
        return self.medium


@dataclass(frozen=True)
class RegionStack:
    """Ordered regions; three-region stacks carry the middle thickness ``d`` (m)."""

    regions: tuple
    d: float = None

    def __post_init__(self):
        regions = tuple(
            r if isinstance(r, Region) else Region(str(i + 1), r)
            for i, r in enumerate(self.regions)
        )
        object.__setattr__(self, "regions", regions)
        if len(regions) < 2:
            raise DomainError("a region stack needs at least two regions")
        if len(regions) == 3 and not (self.d is not None and self.d > 0):
            raise DomainError("three-region stack needs middle thickness d > 0")

    def states(self, t=0.0):
        return tuple(r.state(t) for r in self.regions)

    def swapped(self):
        return RegionStack(
            tuple(Region(r.label, r.state().swapped()) for r in self.regions), self.d
        )
