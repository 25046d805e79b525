"""Surface-mode dispersion at a single interface and in three-layer stacks.

Single interfaces are solved in closed form for ``k_perp(omega)``;
three-layer stacks are solved for ``omega(k_perp)`` by root finding.
All complex square roots use the principal branch flipped to ``Re >= 0``,
i.e. fields decay away from the interface.
"""

import cmath
import math
from dataclasses import dataclass

from .errors import DegenerateFormulaError, DomainError, PoleError, ResonancePoleError
from .media import C0, Polarization
from .numerics import Bracket, find_root, scan_sign_changes


@dataclass(frozen=True)
class SurfaceMode:
    """A bound interface solution.

    For three-layer stacks ``kappa3`` is set, ``parity`` is ``"even"`` or
    ``"odd"`` (sign of the potential at the far interface relative to the
    near one) and ``amplitude_ratio`` is that signed ratio.
    """

    k_perp: complex
    omega: float
    kappa1: complex
    kappa2: complex
    polarization: Polarization = Polarization.TM_ELECTRIC
    amplitude_ratio: complex = 1.0
    kappa3: complex = None
    parity: str = None


@dataclass(frozen=True)
class PropagationQuantities:
    lambda_sp: float
    prop_length: float


def _bound_sqrt(z):
    root = cmath.sqrt(z)
    return -root if root.real < 0 else root


def _kperp_sq_over_k0sq(e1, e2, m1, m2):
    if e1 + e2 == 0:
        raise ResonancePoleError(f"eps1 + eps2 = 0 (eps1={e1}, eps2={e2})")
    if m1 == m2:
        factor = m1
    elif e1 == e2:
        raise DegenerateFormulaError("eps1 == eps2 with mu1 != mu2")
    else:
        factor = (e1 * m2 - e2 * m1) / (e1 - e2)
    return e1 * e2 / (e1 + e2) * factor


def electric_spp_kperp(m1, m2, omega, c=C0):
    """In-plane wavenumber of the TM (electric) surface mode.

    ``k = (omega/c) sqrt[ eps1 eps2/(eps1+eps2) * (eps1 mu2 - eps2 mu1)/(eps1 - eps2) ]``,
    with the second factor reduced to ``mu`` exactly when ``mu1 == mu2``.

    Parameters
    ----------
    m1, m2 : MediumState
        Media below and above the interface.
    omega : float
        Angular frequency, rad/s.
    c : float
        Speed of light.

    Returns
    -------
    complex
        ``k_perp`` with ``Re >= 0`` (and ``Im >= 0`` for passive media).
    """
    ratio = _kperp_sq_over_k0sq(m1.eps, m2.eps, m1.mu, m2.mu)
    k = (omega / c) * cmath.sqrt(ratio)
    if k.real < 0 or (k.real == 0 and k.imag < 0):
        k = -k
    return k


def magnetic_spp_kperp(m1, m2, omega, c=C0):
    """TE (magnetic) surface mode: the electric relation with eps and mu exchanged."""
    return electric_spp_kperp(m1.swapped(), m2.swapped(), omega, c)


def spp_kperp(m1, m2, omega, c=C0, polarization=Polarization.TM_ELECTRIC):
    if Polarization(polarization) is Polarization.TM_ELECTRIC:
        return electric_spp_kperp(m1, m2, omega, c)
    return magnetic_spp_kperp(m1, m2, omega, c)


def spp_omega(k_perp, m1, m2, c=C0, polarization=Polarization.TM_ELECTRIC):
    """Inverse of :func:`spp_kperp` for real, lossless media."""
    if Polarization(polarization) is Polarization.TE_MAGNETIC:
        m1, m2 = m1.swapped(), m2.swapped()
    ratio = _kperp_sq_over_k0sq(m1.eps, m2.eps, m1.mu, m2.mu)
    if ratio.imag != 0 or ratio.real <= 0:
        raise DomainError(f"no real surface-mode frequency for k^2/k0^2 = {ratio}")
    # bound only if k lies beyond both light lines (real, positive kappas)
    if ratio.real <= max((m1.eps * m1.mu).real, (m2.eps * m2.mu).real):
        raise DomainError(f"k^2/k0^2 = {ratio.real} is not below both light lines: no bound mode")
    return float(k_perp) * c / math.sqrt(ratio.real)


def decay_constants(omega, k_perp, m1, m2, c=C0):
    """``kappa_i = sqrt(k_perp^2 - eps_i mu_i omega^2 / c^2)`` with ``Re >= 0``."""
    k0sq = (omega / c) ** 2
    k2 = complex(k_perp) ** 2
    return (
        _bound_sqrt(k2 - m1.eps * m1.mu * k0sq),
        _bound_sqrt(k2 - m2.eps * m2.mu * k0sq),
    )


def interface_residual(kappa1, kappa2, m1, m2, polarization=Polarization.TM_ELECTRIC):
    """``kappa1/eps1 + kappa2/eps2`` (TM) or ``kappa1/mu1 + kappa2/mu2`` (TE)."""
    if Polarization(polarization) is Polarization.TM_ELECTRIC:
        return kappa1 / m1.eps + kappa2 / m2.eps
    return kappa1 / m1.mu + kappa2 / m2.mu


def single_interface_mode(m1, m2, omega, c=C0, polarization=Polarization.TM_ELECTRIC):
    """Closed-form surface mode of one interface at frequency ``omega``.

    The amplitude ratio follows from continuity of the normal displacement
    (TM) or induction (TE), which for the Hertz potential means the
    potential itself is continuous, hence ``A1/A2 = 1``.
    """
    polarization = Polarization(polarization)
    k = spp_kperp(m1, m2, omega, c, polarization)
    kap1, kap2 = decay_constants(omega, k, m1, m2, c)
    return SurfaceMode(k, float(omega), kap1, kap2, polarization, 1.0 + 0j)


def propagation_quantities(k_perp):
    """SPP wavelength ``2 pi / Re k`` and propagation length ``1 / (2 Im k)``.

    A lossless mode (``Im k == 0``) reports ``prop_length = inf``.
    """
    k_perp = complex(k_perp)
    if not k_perp.real > 0:
        raise DomainError(f"propagation quantities need Re(k_perp) > 0, got {k_perp}")
    lam = 2.0 * math.pi / k_perp.real
    prop = math.inf if k_perp.imag == 0 else 1.0 / (2.0 * k_perp.imag)
    return PropagationQuantities(lam, prop)


# -- three-layer stacks -----------------------------------------------------


def _layer_terms(states, omega, k_perp, c, polarization):
    k0sq = (omega / c) ** 2
    k2 = complex(k_perp) ** 2
    kappas = [_bound_sqrt(k2 - s.eps * s.mu * k0sq) for s in states]
    if Polarization(polarization) is Polarization.TM_ELECTRIC:
        weights = [kap / s.eps for kap, s in zip(kappas, states)]
    else:
        weights = [kap / s.mu for kap, s in zip(kappas, states)]
    return kappas, weights


def _real_if_exact(z):
    return z.real if z.imag == 0 else z


def multilayer_dispersion_residual(
    stack, omega, k_perp, c=C0, polarization=Polarization.TM_ELECTRIC, t=0.0
):
    """``exp(-2 kappa2 d) - F12 * F32`` for a three-region stack.

    ``F_i2 = (y2 + yi) / (y2 - yi)`` with ``y = kappa/eps`` (TM) or
    ``kappa/mu`` (TE); ``d`` is the physical middle-layer thickness.  The
    residual vanishes at a guided mode; it also vanishes trivially on the
    light line of the middle layer (``kappa2 = 0``), which is not a mode.
    Real in the bound-mode region, complex elsewhere.

    Raises
    ------
    PoleError
        When ``y2 == y1`` or ``y2 == y3``.
    """
    if len(stack.regions) != 3:
        raise DomainError("multilayer residual needs exactly three regions")
    kappas, (y1, y2, y3) = _layer_terms(stack.states(t), omega, k_perp, c, polarization)
    if y2 == y1 or y2 == y3:
        raise PoleError("residual pole: outer pair at single-interface resonance")
    lhs = cmath.exp(-2.0 * kappas[1] * stack.d)
    rhs = (y2 + y1) / (y2 - y1) * (y2 + y3) / (y2 - y3)
    return _real_if_exact(lhs - rhs)


def _cleared_residuals(stack, k_perp, c, polarization, t):
    # denominator-free forms for bracketing: no poles, same roots.  For a
    # symmetric stack the product factorises into one equation per parity,
    # which keeps the two nearly degenerate thick-layer roots apart.
    states = stack.states(t)
    d = stack.d

    def terms(w):
        kappas, (y1, y2, y3) = _layer_terms(states, w, k_perp, c, polarization)
        return cmath.exp(-kappas[1] * d), y1, y2, y3

    if states[0] == states[2]:

        def plus(w):
            e, y1, y2, _ = terms(w)
            return ((y2 + y1) - e * (y2 - y1)).real

        def minus(w):
            e, y1, y2, _ = terms(w)
            return ((y2 + y1) + e * (y2 - y1)).real

        plus.parity, minus.parity = "even", "odd"
        return [plus, minus]

    def product(w):
        e, y1, y2, y3 = terms(w)
        return (e * e * (y2 - y1) * (y2 - y3) - (y2 + y1) * (y2 + y3)).real

    return [product]


def _bound_limit(states, k_perp, c):
    dense = [(s.eps * s.mu).real for s in states if (s.eps * s.mu).real > 0]
    if not dense:
        return math.inf
    return float(k_perp) * c / math.sqrt(max(dense))


def _middle_profile_ratio(kappas, weights, d):
    # potential at the far interface when it is 1 at the near one
    y1, y2, _ = weights
    x = kappas[1] * d
    return cmath.cosh(x) * (1.0 + (y1 / y2) * cmath.tanh(x))


@dataclass(frozen=True)
class MultilayerModes:
    even: SurfaceMode = None
    odd: SurfaceMode = None
    all: tuple = ()


def solve_multilayer(
    stack,
    k_perp,
    c=C0,
    brackets=None,
    polarization=Polarization.TM_ELECTRIC,
    t=0.0,
    samples=4000,
    rel_tol=1e-14,
):
    """Guided modes ``omega(k_perp)`` of a three-region stack.

    Parameters
    ----------
    stack : RegionStack
        Three regions, middle thickness ``stack.d``.
    k_perp : float
        Real in-plane wavenumber.
    brackets : list of Bracket, optional
        Frequency brackets to search.  By default the bound-mode window
        ``(0, omega_light]`` below the densest light line is scanned on
        ``samples`` points.  Brackets without a sign change are skipped.

    Returns
    -------
    MultilayerModes
        ``even``/``odd`` are ``None`` when no such branch is found.
    """
    polarization = Polarization(polarization)
    if len(stack.regions) != 3:
        raise DomainError("multilayer solver needs exactly three regions")
    states = stack.states(t)
    k_perp = float(k_perp)
    funcs = _cleared_residuals(stack, k_perp, c, polarization, t)

    grid = None
    if brackets is None:
        top = _bound_limit(states, k_perp, c)
        if not math.isfinite(top):
            raise DomainError("no dielectric region: give explicit brackets")
        # the light line itself is never a root of the cleared forms
        grid = [top * (i + 0.5) / samples for i in range(samples)] + [top]

    modes = []
    for g in funcs:
        if grid is not None:
            found = scan_sign_changes(g, grid)
        else:
            found = [br for br in brackets if g(br.lo) * g(br.hi) <= 0]
        for br in found:
            w = find_root(g, br, tol=rel_tol * br.hi)
            kappas, weights = _layer_terms(states, w, k_perp, c, polarization)
            if any(kap.real <= 0 for kap in kappas):
                continue
            ratio = _middle_profile_ratio(kappas, weights, stack.d)
            parity = getattr(g, "parity", "even" if ratio.real > 0 else "odd")
            modes.append(
                SurfaceMode(
                    k_perp + 0j,
                    w,
                    kappas[0],
                    kappas[1],
                    polarization,
                    ratio,
                    kappa3=kappas[2],
                    parity=parity,
                )
            )
    modes.sort(key=lambda m: m.omega)
    even = next((m for m in modes if m.parity == "even"), None)
    odd = next((m for m in modes if m.parity == "odd"), None)
    return MultilayerModes(even, odd, tuple(modes))


__all__ = [
    "Bracket",
    "MultilayerModes",
    "PropagationQuantities",
    "SurfaceMode",
    "decay_constants",
    "electric_spp_kperp",
    "interface_residual",
    "magnetic_spp_kperp",
    "multilayer_dispersion_residual",
    "propagation_quantities",
    "single_interface_mode",
    "solve_multilayer",
    "spp_kperp",
    "spp_omega",
]
