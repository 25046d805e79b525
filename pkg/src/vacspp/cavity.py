"""TM photon modes of a cylindrical cavity holding a dielectric slab.

Region 1 (``0 < z < a``, permittivity ``eps1``) is the slab, region 2
(``a < z < L``, ``eps2``) the rest of the cavity.  The Hertz potential of a
mode is ``phi(r) = Z(z) r_np(rho, theta)`` with

    Z = A1 cos(k1 z)            in region 1
    Z = A2 cos(k2 (L - z))      in region 2

and ``k_i^2 + (x_np/R)^2 = eps_i mu (omega/c)^2``.  Continuity of ``Z``
(normal ``D``) and of ``Z'/eps`` (tangential ``E``) gives the eigenvalue
equation ``k1 tan(k1 a)/eps1 = k2 tan(k2 (a - L))/eps2``.  Any ``k_i^2 < 0``
is handled by continuing ``cos``/``tan`` to ``cosh``/``tanh``.

In ``z`` this is a Sturm-Liouville problem with coefficient ``1/eps`` and
unit weight, so the profiles are normalised with ``int Z_m Z_n dz = delta``.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleError, TrackingError
from .media import C0
from .numerics import Bracket, bessel_j, bessel_j_prime, bessel_zero, find_root, quadrature
from .numerics.roots import scan_sign_changes


@dataclass(frozen=True)
class Geometry:
    """Cavity radius ``R``, length ``L`` and slab thickness ``a`` (metres)."""

    R: float
    L: float
    a: float

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError("R: cavity radius must be > 0")
        if not self.L > 0:
            raise DomainError("L: cavity length must be > 0")
        if not 0 < self.a <= self.L:
            raise DomainError("a: slab thickness must satisfy 0 < a <= L")


def _cos_c(s, x):
    # cos(sqrt(s) x) continued to s < 0
    if s > 0:
        return math.cos(math.sqrt(s) * x)
    if s < 0:
        return math.cosh(math.sqrt(-s) * x)
    return 1.0


def _ksin_c(s, x):
    # sqrt(s) sin(sqrt(s) x) continued to s < 0
    if s > 0:
        k = math.sqrt(s)
        return k * math.sin(k * x)
    if s < 0:
        kap = math.sqrt(-s)
        return -kap * math.sinh(kap * x)
    return 0.0


def _pair_scaled(s, x):
    # (k sin(kx), cos(kx)) divided by cosh(kappa x) > 0 on the evanescent branch
    if s < 0:
        kap = math.sqrt(-s)
        return -kap * math.tanh(kap * x), 1.0
    return _ksin_c(s, x), _cos_c(s, x)


def _s_values(w, eps1, eps2, q, mu):
    return eps1 * mu * w * w - q * q, eps2 * mu * w * w - q * q


def _determinant(w, geometry, eps1, eps2, q, mu):
    """Pole-free eigenvalue function of ``w = omega/c``.

    ``k1 sin(k1 a) cos(k2(a-L))/eps1 - k2 sin(k2(a-L)) cos(k1 a)/eps2``,
    rescaled by positive factors on evanescent branches.
    """
    s1, s2 = _s_values(w, eps1, eps2, q, mu)
    d1, c1 = _pair_scaled(s1, geometry.a)
    d2, c2 = _pair_scaled(s2, geometry.a - geometry.L)
    return d1 * c2 / eps1 - d2 * c1 / eps2


def _k_from_s(s):
    return complex(math.sqrt(s), 0.0) if s >= 0 else complex(0.0, math.sqrt(-s))


@dataclass(frozen=True)
class CavityMode:
    """One TM eigenmode ``(n, p, m)``.

    ``k1``/``k2`` are real or pure imaginary.  ``norm1``/``norm2`` are the
    profile amplitudes ``A1``/``A2`` under unit-weight normalisation.
    """

    n: int
    p: int
    m: int
    k1: complex
    k2: complex
    omega: float
    x_np: float
    norm1: float
    norm2: float
    geometry: Geometry
    eps1: float
    eps2: float
    mu: float = 1.0
    c: float = C0

    @property
    def q(self):
        return self.x_np / self.geometry.R

    @property
    def s1(self):
        return (self.k1 * self.k1).real

    @property
    def s2(self):
        return (self.k2 * self.k2).real

    def region(self, z, side=1):
        a = self.geometry.a
        if z < a or (z == a and side == 1):
            return 1
        return 2

    def profile(self, z, side=1):
        """``Z(z)``; at ``z == a`` the region is picked by ``side``."""
        if self.region(z, side) == 1:
            return self.norm1 * _cos_c(self.s1, z)
        return self.norm2 * _cos_c(self.s2, self.geometry.L - z)

    def dprofile(self, z, side=1):
        """``dZ/dz``."""
        if self.region(z, side) == 1:
            return -self.norm1 * _ksin_c(self.s1, z)
        return self.norm2 * _ksin_c(self.s2, self.geometry.L - z)

    def residuals(self):
        """``(transcendental, matching)`` residuals, both relative."""
        g = self.geometry
        d1, c1 = _pair_scaled(self.s1, g.a)
        d2, c2 = _pair_scaled(self.s2, g.a - g.L)
        t1 = d1 * c2 / self.eps1
        t2 = d2 * c1 / self.eps2
        # both terms can vanish together (uniform fill), so scale by the
        # size of each region's (flux, potential) pair instead
        kt = max(abs(self.k1), abs(self.k2), 1.0 / g.L)
        scale = (abs(d1) + kt * abs(c1)) * (abs(d2) + kt * abs(c2))
        scale /= kt * min(abs(self.eps1), abs(self.eps2))
        trans = abs(t1 - t2) / scale
        q2 = self.q**2
        lhs = (self.s1 + q2) / self.eps1
        rhs = (self.s2 + q2) / self.eps2
        match = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
        return trans, match


def transcendental_residual(k1, geometry, eps1, eps2, n, p, c=C0, mu=1.0, pole_tol=1e-12):
    """``k1 tan(k1 a)/eps1 - k2 tan(k2 (a - L))/eps2`` for real ``k1 > 0``.

    ``k2`` follows from the matching constraint
    ``(k1^2 + q^2)/eps1 = (k2^2 + q^2)/eps2`` and may be imaginary
    (``k tan(k x)`` then becomes ``-kappa tanh(kappa x)``).  ``c`` and ``mu``
    do not enter the residual.

    Raises
    ------
    PoleError
        When ``cos(k1 a)`` or ``cos(k2 (a - L))`` is within ``pole_tol`` of 0.
    """
    if not k1 > 0:
        raise DomainError("k1 must be > 0")
    if eps1 == 0 or eps2 == 0:
        raise DomainError("permittivities must be nonzero")
    q = bessel_zero(n, p) / geometry.R
    s1 = k1 * k1
    s2 = eps2 / eps1 * (s1 + q * q) - q * q
    c1 = math.cos(k1 * geometry.a)
    if abs(c1) < pole_tol:
        raise PoleError(f"tan pole in region 1 at k1={k1}")
    lhs = k1 * math.tan(k1 * geometry.a) / eps1
    x2 = geometry.a - geometry.L
    if s2 > 0:
        k2 = math.sqrt(s2)
        if abs(math.cos(k2 * x2)) < pole_tol:
            raise PoleError(f"tan pole in region 2 at k1={k1}")
        rhs = k2 * math.tan(k2 * x2) / eps2
    elif s2 < 0:
        kap = math.sqrt(-s2)
        rhs = -kap * math.tanh(kap * x2) / eps2
    else:
        rhs = 0.0
    return lhs - rhs


def _scan_grid(geometry, eps1, eps2, q, mu, w_lo, w_hi, density):
    pts = set()
    lengths = ((eps1, geometry.a), (eps2, geometry.L - geometry.a))
    opt = sum(math.sqrt(abs(e * mu)) * x for e, x in lengths)
    h = math.pi / (density * opt)
    count = int((w_hi - w_lo) / h) + 2
    pts.update(w_lo + i * (w_hi - w_lo) / count for i in range(count + 1))
    for e, x in lengths:
        em = e * mu
        if em <= 0 or x <= 0:
            continue
        cut = q / math.sqrt(em)
        if w_lo <= cut <= w_hi:
            pts.add(cut)
        # uniform in the region's own wavenumber so that fast phase growth
        # just above a cutoff is resolved
        k_top = math.sqrt(max(em * w_hi * w_hi - q * q, 0.0))
        dk = math.pi / (density * x)
        j = 1
        while j * dk < k_top:
            w = math.sqrt(((j * dk) ** 2 + q * q) / em)
            if w_lo <= w <= w_hi:
                pts.add(w)
            j += 1
    return sorted(pts)


def _normalise(s1, s2, geometry, eps1, eps2):
    a, L = geometry.a, geometry.L
    c1 = _cos_c(s1, a)
    c2 = _cos_c(s2, L - a)
    if max(abs(c1), abs(c2)) > 1e-3:
        amp1, amp2 = c2, c1
    else:
        # potential nearly vanishes at the interface: use the flux condition
        # -A1 k1 sin(k1 a)/eps1 = A2 k2 sin(k2 (L-a))/eps2
        d1 = _ksin_c(s1, a) / eps1
        d2 = _ksin_c(s2, L - a) / eps2
        amp1, amp2 = d2, -d1
    i1 = _cos_sq_integral(s1, a)
    i2 = _cos_sq_integral(s2, L - a)
    norm = math.sqrt(amp1 * amp1 * i1 + amp2 * amp2 * i2)
    amp1, amp2 = amp1 / norm, amp2 / norm
    if amp1 < 0 or (amp1 == 0 and amp2 < 0):
        amp1, amp2 = -amp1, -amp2
    return amp1, amp2


def _cos_sq_integral(s, x):
    # int_0^x cos^2(sqrt(s) z) dz, continued
    if s > 0:
        k = math.sqrt(s)
        return 0.5 * x + math.sin(2 * k * x) / (4 * k)
    if s < 0:
        kap = math.sqrt(-s)
        return 0.5 * x + math.sinh(2 * kap * x) / (4 * kap)
    return x


def solve_cavity_modes(
    geometry, eps1, eps2, n, p, count, c=C0, mu=1.0, include_zero=False, density=24
):
    """Lowest TM eigenmodes ``(n, p, m)`` ordered by frequency.

    The pole-free determinant is scanned in ``w = omega/c`` and every sign
    change polished with :func:`find_root`.  Modes are indexed from 0 in
    order of frequency (``m`` equals the number of nodes of ``Z`` for
    positive permittivities); the ``m = 0`` mode, which has no ``z``
    variation in a uniform cavity, is skipped unless ``include_zero``.

    Parameters
    ----------
    geometry : Geometry
    eps1, eps2 : float
        Real, nonzero permittivities of slab and remainder.
    n, p : int
        Azimuthal order and radial root index.
    count : int
        Number of modes with ``m >= 1`` to return.
    c, mu : float
        Speed of light and (uniform) permeability.

    Returns
    -------
    list of CavityMode
        Possibly shorter than ``count`` (with a warning) if the scan
        window cannot be widened far enough.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    eps1, eps2 = float(eps1), float(eps2)
    if eps1 == 0 or eps2 == 0:
        raise DomainError("permittivities must be nonzero")
    x_np = bessel_zero(n, p)
    q = x_np / geometry.R
    needed = count + 1
    positive = [e * mu for e in (eps1, eps2) if e * mu > 0]
    if not positive:
        raise DomainError("at least one region needs eps * mu > 0")
    # below q/sqrt(max eps) both regions are evanescent and, for positive
    # permittivities, the determinant has a fixed sign
    if eps1 > 0 and eps2 > 0:
        w_lo = 0.999 * q / math.sqrt(max(positive))
    else:
        w_lo = 1e-6 * q if q > 0 else 1e-9 / geometry.L
    w_hi = math.sqrt(q * q + ((needed + 1) * math.pi / geometry.L) ** 2) / math.sqrt(
        min(positive)
    )

    def det(w):
        return _determinant(w, geometry, eps1, eps2, q, mu)

    roots = []
    for _ in range(12):
        grid = _scan_grid(geometry, eps1, eps2, q, mu, w_lo, w_hi, density)
        roots = [find_root(det, br, tol=1e-15 * br.hi) for br in scan_sign_changes(det, grid)]
        if len(roots) >= needed:
            break
        w_hi *= 2.0
    if len(roots) < needed:
        warnings.warn(
            f"only {len(roots)} cavity roots found for (n,p)=({n},{p})", RuntimeWarning
        )
    modes = []
    for m, w in enumerate(roots):
        if m == 0 and not include_zero:
            continue
        s1, s2 = _s_values(w, eps1, eps2, q, mu)
        a1, a2 = _normalise(s1, s2, geometry, eps1, eps2)
        modes.append(
            CavityMode(
                n, p, m, _k_from_s(s1), _k_from_s(s2), c * w, x_np, a1, a2,
                geometry, eps1, eps2, mu, c,
            )
        )
        if len(modes) == count + (1 if include_zero else 0):
            break
    return modes


def uniform_frequency(geometry, eps, n, p, m, c=C0, mu=1.0):
    """Closed form ``c sqrt((x_np/R)^2 + (m pi/L)^2) / sqrt(eps mu)``."""
    q = bessel_zero(n, p) / geometry.R
    return c * math.sqrt(q * q + (m * math.pi / geometry.L) ** 2) / math.sqrt(eps * mu)


def thin_slab_shift(geometry, eps1, eps2, n, p, c=C0):
    """First-order shift of ``omega^2`` from a thin slab at ``z = 0``.

    ``(2 x_np^2 c^2 / (R^2 eps2)) (a/L) (eps2/eps1 - 1)``, valid for
    ``a/L << 1`` and modes with ``m >= 1``.
    """
    x_np = bessel_zero(n, p)
    if geometry.a / geometry.L >= 0.01:
        warnings.warn("thin_slab_shift used outside a/L < 0.01", RuntimeWarning)
    return (
        2.0 * x_np**2 * c**2 / (geometry.R**2 * eps2) * (geometry.a / geometry.L)
        * (eps2 / eps1 - 1.0)
    )


def overlap(mode_a, mode_b, weighted=False, tol=1e-13):
    """``int_0^L w Z_a Z_b dz`` with ``w = 1`` or ``w = eps`` (``weighted``)."""
    g = mode_a.geometry

    def f(z):
        val = mode_a.profile(z) * mode_b.profile(z)
        if weighted:
            val *= mode_a.eps1 if z <= g.a else mode_a.eps2
        return val

    return quadrature(f, 0.0, g.L, tol=tol, breakpoints=(g.a,))


# -- intermode coupling -----------------------------------------------------


def _track(reference, candidates, max_jump=0.1):
    out = []
    used = set()
    for mode in reference:
        best = min(
            (i for i in range(len(candidates)) if i not in used),
            key=lambda i: abs(candidates[i].omega - mode.omega),
            default=None,
        )
        if best is None:
            raise TrackingError("not enough modes to continue every branch")
        cand = candidates[best]
        if abs(cand.omega - mode.omega) > max_jump * mode.omega:
            raise TrackingError(
                f"mode m={mode.m} jumped from {mode.omega:.6g} to {cand.omega:.6g}"
            )
        used.add(best)
        out.append(cand)
    return out


def _signed_profile(mode, reference):
    # align the arbitrary overall sign with the reference mode
    s = overlap(mode, reference)
    return (lambda z: mode.profile(z)) if s >= 0 else (lambda z: -mode.profile(z))


def _coupling_at(geometry, eps1_of_t, eps2, n, p, count, t, delta, c, mu, include_zero):
    kw = dict(c=c, mu=mu, include_zero=include_zero)
    here = solve_cavity_modes(geometry, eps1_of_t(t), eps2, n, p, count + 1, **kw)
    before = solve_cavity_modes(geometry, eps1_of_t(t - delta), eps2, n, p, count + 2, **kw)
    after = solve_cavity_modes(geometry, eps1_of_t(t + delta), eps2, n, p, count + 2, **kw)
    here = here[:count]
    before = _track(here, before)
    after = _track(here, after)
    size = len(here)
    mat = np.zeros((size, size))
    for j in range(size):
        fp = _signed_profile(after[j], here[j])
        fm = _signed_profile(before[j], here[j])

        def dphi(z, fp=fp, fm=fm):
            return (fp(z) - fm(z)) / (2.0 * delta)

        for i in range(size):
            mi = here[i]
            mat[i, j] = quadrature(
                lambda z: mi.profile(z) * dphi(z), 0.0, geometry.L, tol=1e-13,
                breakpoints=(geometry.a,),
            )
    return mat


def coupling_matrix(
    geometry, eps1_of_t, eps2, n, p, count, t, delta, c=C0, mu=1.0,
    include_zero=False, return_error=False,
):
    """Intermode coupling ``M_mn = int_0^L Z_m dZ_n/dt dz`` at time ``t``.

    Modes are re-solved at ``t`` and ``t +- delta``, continued by nearest
    frequency (a relative jump above 10 % raises :class:`TrackingError`),
    sign-aligned, and differenced centrally.  The estimate is repeated at
    ``delta/2`` and Richardson-extrapolated.

    Returns
    -------
    numpy.ndarray
        ``count x count`` matrix; with ``return_error`` also the
        difference between the two step sizes as an error estimate.
    """
    args = (geometry, eps1_of_t, eps2, n, p, count)
    coarse = _coupling_at(*args, t, delta, c, mu, include_zero)
    fine = _coupling_at(*args, t, 0.5 * delta, c, mu, include_zero)
    mat = (4.0 * fine - coarse) / 3.0
    if return_error:
        return mat, float(np.max(np.abs(fine - coarse)))
    return mat


def spp_profile(kappa1, kappa2, a):
    """Unit-norm surface-mode profile ``A exp(kappa1 (z-a))`` / ``A exp(-kappa2 (z-a))``."""
    amp = 1.0 / math.sqrt(0.5 / kappa1 + 0.5 / kappa2)

    def f(z):
        if z <= a:
            return amp * math.exp(kappa1 * (z - a))
        return amp * math.exp(-kappa2 * (z - a))

    return f


def spp_coupling(k_perp, eps1_of_t, eps2, t, delta, a=0.0, c=C0):
    """Diagonal coupling ``int Z dZ/dt dz`` of a lossless surface mode at fixed ``k_perp``.

    Surface modes with different ``k_perp`` are orthogonal through their
    transverse factors, so this 1x1 entry is the whole matrix.
    """
    from .dispersion import decay_constants, spp_omega
    from .media import MediumState

    def kappas(tt):
        m1, m2 = MediumState(eps1_of_t(tt)), MediumState(eps2)
        w = spp_omega(k_perp, m1, m2, c)
        k1, k2 = decay_constants(w, k_perp, m1, m2, c)
        return k1.real, k2.real

    k0 = kappas(t)
    here = spp_profile(*k0, a)
    span = 60.0 / min(k0)

    def estimate(dt):
        plus = spp_profile(*kappas(t + dt), a)
        minus = spp_profile(*kappas(t - dt), a)
        return quadrature(
            lambda z: here(z) * (plus(z) - minus(z)) / (2 * dt),
            a - span, a + span, tol=1e-14, breakpoints=(a,),
        )

    coarse, fine = estimate(delta), estimate(0.5 * delta)
    return np.array([[(4.0 * fine - coarse) / 3.0]])


# -- field reconstruction ---------------------------------------------------


@dataclass(frozen=True)
class FieldSample:
    """Fields at ``position = (rho, theta, z)``; vectors are (rho, theta, z) components."""

    position: tuple
    E: tuple
    B: tuple


def field_map(mode, Q, Qdot, grid, eps1=None, eps2=None, mu=None, interface_side=1):
    """TM fields of ``Phi = Q * phi_mode`` on a grid of cylindrical positions.

    ``E = (1/eps) curl curl (Phi z)`` including the longitudinal part
    ``E_z = (q^2/eps) Phi``, and ``B = mu curl (dPhi/dt z)``, so ``B_z = 0``.

    Raises
    ------
    DomainError
        For a position outside ``0 <= rho <= R``, ``0 <= z <= L``.
    """
    g = mode.geometry
    eps1 = mode.eps1 if eps1 is None else eps1
    eps2 = mode.eps2 if eps2 is None else eps2
    mu = mode.mu if mu is None else mu
    n, q = mode.n, mode.q
    t_norm = 1.0 / (math.sqrt(math.pi) * g.R * bessel_j(n + 1, mode.x_np))
    out = []
    for pos in grid:
        rho, theta, z = (float(v) for v in pos)
        if not (0.0 <= rho <= g.R * (1 + 1e-12) and 0.0 <= z <= g.L):
            raise DomainError(f"position {pos} outside the cavity")
        rho = min(rho, g.R)
        arg = min(q * rho, mode.x_np)
        phase = complex(math.cos(n * theta), math.sin(n * theta))
        jn = bessel_j(n, arg)
        jnp = bessel_j_prime(n, arg)
        if rho > 0:
            j_over_rho = jn / rho
        else:
            j_over_rho = 0.5 * q if n == 1 else 0.0
        side = 1 if mode.region(z, interface_side) == 1 else 2
        eps = eps1 if side == 1 else eps2
        zf = mode.profile(z, interface_side)
        dz = mode.dprofile(z, interface_side)
        radial = t_norm * phase
        e_rho = Q * dz * radial * q * jnp / eps
        e_theta = Q * dz * radial * 1j * n * j_over_rho / eps
        e_z = Q * zf * radial * jn * q * q / eps
        b_rho = mu * Qdot * zf * radial * 1j * n * j_over_rho
        b_theta = -mu * Qdot * zf * radial * q * jnp
        out.append(FieldSample((rho, theta, z), (e_rho, e_theta, e_z), (b_rho, b_theta, 0j)))
    return out
