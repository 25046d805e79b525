import math
import warnings

import pytest

from vacspp.cavity import (
    Geometry,
    coupling_matrix,
    field_map,
    overlap,
    solve_cavity_modes,
    spp_coupling,
    thin_slab_shift,
    transcendental_residual,
    uniform_frequency,
)
from vacspp.errors import DomainError, PoleError
from vacspp.numerics import bessel_zero, find_root
from vacspp.numerics.roots import scan_sign_changes

C = 299792458.0


def test_geometry_validation():
    with pytest.raises(DomainError, match="a"):
        Geometry(0.025, 0.1, -1e-3)
    with pytest.raises(DomainError):
        Geometry(0.025, 0.1, 0.2)
    with pytest.raises(DomainError):
        Geometry(0.0, 0.1, 0.01)


# -- transcendental residual ------------------------------------------------


def test_uniform_residual_zero_at_m_pi_over_L():
    g = Geometry(1.0, 1.0, 0.37)
    for m in (1, 2, 5):
        k = m * math.pi
        assert abs(transcendental_residual(k, g, 1.0, 1.0, 0, 1)) < 1e-12
    assert abs(transcendental_residual(1.3 * math.pi, g, 1.0, 1.0, 0, 1)) > 1e-3


def test_residual_pole_flag():
    g = Geometry(1.0, 1.0, 0.5)
    with pytest.raises(PoleError):
        transcendental_residual(math.pi, g, 4.0, 1.0, 0, 1)  # cos(k1 a) = 0
    with pytest.raises(DomainError):
        transcendental_residual(-1.0, g, 4.0, 1.0, 0, 1)


def test_residual_continuous_through_k2_zero():
    # eps1=4, eps2=1: k2^2 = (k1^2 + q^2)/4 - q^2 crosses zero at k1 = sqrt(3) q
    g = Geometry(1.0, 1.0, 0.5)
    q = bessel_zero(0, 1)
    k0 = math.sqrt(3.0) * q
    mid = transcendental_residual(k0, g, 4.0, 1.0, 0, 1)
    for h in (1e-6, 1e-8):
        lo = transcendental_residual(k0 - h, g, 4.0, 1.0, 0, 1)
        hi = transcendental_residual(k0 + h, g, 4.0, 1.0, 0, 1)
        assert abs(lo - mid) < 1e3 * h and abs(hi - mid) < 1e3 * h


# -- eigenmodes -------------------------------------------------------------


@pytest.mark.parametrize("n,p", [(0, 1), (1, 2), (3, 1)])
def test_uniform_limit_exact(n, p):
    g = Geometry(0.025, 0.1, 0.03)
    modes = solve_cavity_modes(g, 1.0, 1.0, n, p, 10, c=C)
    assert [m.m for m in modes] == list(range(1, 11))
    for mode in modes:
        assert mode.k1.real * g.L / math.pi == pytest.approx(mode.m, rel=1e-10)
        assert mode.omega == pytest.approx(uniform_frequency(g, 1.0, n, p, mode.m, C), rel=1e-10)


def _oracle_roots(g, eps1, eps2, n, p, k_max):
    """Dense sign-change scan of the tan-form residual, poles excluded."""

    def f(k):
        try:
            return transcendental_residual(k, g, eps1, eps2, n, p, pole_tol=1e-9)
        except PoleError:
            return math.nan

    grid = [k_max * i / 40000 for i in range(1, 40001)]
    roots = []
    for br in scan_sign_changes(f, grid):
        k = find_root(f, br, tol=1e-14 * br.hi)
        # a pole also flips the sign; a real root has a small residual there
        scale = abs(f(br.lo)) + abs(f(br.hi))
        if abs(f(k)) < 1e-6 * max(scale, 1.0):
            roots.append(k)
    return roots


@pytest.mark.parametrize("eps1", [2.0, 4.0, 12.0])
@pytest.mark.parametrize("frac", [0.1, 0.5])
def test_modes_match_dense_scan_oracle(eps1, frac):
    g = Geometry(1.0, 1.0, frac)
    k_max = 40.0 / g.L
    oracle = _oracle_roots(g, eps1, 1.0, 0, 1, k_max)
    modes = solve_cavity_modes(g, eps1, 1.0, 0, 1, len(oracle) + 2, c=1.0, include_zero=True)
    ours = [m.k1.real for m in modes if m.k1.imag == 0 and 0 < m.k1.real < k_max]
    assert len(ours) == len(oracle) >= 5
    for a, b in zip(ours, oracle):
        assert a == pytest.approx(b, rel=1e-9)
    for mode in modes:
        trans, match = mode.residuals()
        assert trans < 1e-10 and match < 1e-10


def test_near_uniform_continuity():
    g = Geometry(0.025, 0.1, 0.04)
    modes = solve_cavity_modes(g, 1.0 + 1e-6, 1.0, 0, 1, 5, c=C)
    for mode in modes:
        ref = uniform_frequency(g, 1.0, 0, 1, mode.m, C)
        assert mode.omega == pytest.approx(ref, rel=1e-5)


def test_lowest_tm_mode_closed_form():
    g = Geometry(0.025, 0.1, 0.1)
    mode = solve_cavity_modes(g, 1.0, 1.0, 0, 1, 1, c=C)[0]
    assert (mode.n, mode.p, mode.m) == (0, 1, 1)
    expected = C * math.sqrt((2.404825557695773 / 0.025) ** 2 + (math.pi / 0.1) ** 2)
    assert mode.omega == pytest.approx(expected, rel=1e-12)


def test_evanescent_slab_branch():
    # a high-index slab: low modes have k2 imaginary (evanescent in vacuum)
    g = Geometry(1.0, 1.0, 0.5)
    modes = solve_cavity_modes(g, 12.0, 1.0, 0, 1, 4, c=1.0)
    assert any(m.k2.real == 0 and m.k2.imag > 0 for m in modes)
    for mode in modes:
        assert max(mode.residuals()) < 1e-10


def test_monotone_in_eps1():
    g = Geometry(1.0, 1.0, 0.3)
    prev = None
    for eps1 in (1.0, 1.5, 2.0, 3.0, 5.0, 8.0):
        ws = [m.omega for m in solve_cavity_modes(g, eps1, 1.0, 0, 1, 6, c=1.0, include_zero=True)]
        if prev is not None:
            assert all(w <= v * (1 + 1e-12) for w, v in zip(ws, prev))
        prev = ws


def test_orthonormality():
    g = Geometry(1.0, 1.0, 0.37)
    modes = solve_cavity_modes(g, 4.0, 1.0, 0, 1, 5, c=1.0)
    for i, a in enumerate(modes):
        for j, b in enumerate(modes):
            assert overlap(a, b) == pytest.approx(1.0 if i == j else 0.0, abs=1e-10)


def test_partial_result_warns():
    g = Geometry(1.0, 1.0, 0.5)
    with pytest.raises(DomainError):
        solve_cavity_modes(g, 4.0, 1.0, 0, 1, 0)
    with pytest.raises(DomainError):
        solve_cavity_modes(g, -4.0, -1.0, 0, 1, 2)


# -- thin-slab shift ----------------------------------------------------------


def _shift_ratio(frac, eps1, eps2=1.0):
    g = Geometry(0.025, 0.1, 0.1 * frac)
    w_slab = solve_cavity_modes(g, eps1, eps2, 0, 1, 1, c=C)[0].omega
    w_bare = solve_cavity_modes(g, eps2, eps2, 0, 1, 1, c=C)[0].omega
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        formula = thin_slab_shift(g, eps1, eps2, 0, 1, c=C)
    return (w_slab**2 - w_bare**2) / formula


@pytest.mark.parametrize("eps1", [0.5, 2.0])
def test_thin_slab_convergence(eps1):
    errs = [abs(_shift_ratio(f, eps1) - 1) for f in (1e-2, 1e-3, 1e-4)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[1] < 0.05 and errs[2] < 0.01


def test_thin_slab_examples():
    g = Geometry(0.025, 0.1, 1e-5)
    assert thin_slab_shift(g, 1.0, 1.0, 0, 1, c=C) == 0.0
    x = bessel_zero(0, 1)
    expected = 2 * x**2 * C**2 / 0.025**2 * 1e-4 * (2 - 1)
    assert thin_slab_shift(g, 0.5, 1.0, 0, 1, c=C) == pytest.approx(expected, rel=1e-14)
    assert thin_slab_shift(g, 2.0, 1.0, 0, 1, c=C) < 0
    with pytest.warns(RuntimeWarning):
        thin_slab_shift(Geometry(0.025, 0.1, 0.01), 2.0, 1.0, 0, 1, c=C)


# -- coupling ---------------------------------------------------------------


def test_uniform_fill_has_no_coupling():
    g = Geometry(1.0, 1.0, 1.0)
    mat = coupling_matrix(g, lambda t: 2.0 + 0.3 * math.sin(t), 1.0, 0, 1, 3, 0.4, 1e-3, c=1.0)
    assert abs(mat).max() < 1e-8


def test_spp_has_no_coupling():
    mat = spp_coupling(1.0, lambda t: -4.0 - 0.5 * math.sin(t), 2.0, 0.3, 1e-3, c=1.0)
    assert abs(mat).max() < 1e-8


def test_half_slab_couples():
    g = Geometry(1.0, 1.0, 0.5)
    eps = lambda t: 4.0 + 0.5 * math.sin(t)  # noqa: E731
    mat, err = coupling_matrix(g, eps, 1.0, 0, 1, 3, 0.4, 1e-3, c=1.0, return_error=True)
    assert abs(mat[0, 1]) > 1e-4
    assert err < 1e-6
    # unit-weight normalisation makes the matrix antisymmetric
    assert mat[0, 1] == pytest.approx(-mat[1, 0], abs=1e-8)


# -- fields -------------------------------------------------------------------


def _modes_for_fields():
    g = Geometry(1.0, 1.2, 0.45)
    return g, solve_cavity_modes(g, 4.0, 1.0, 1, 1, 5, c=1.0)


def test_field_wall_and_tm():
    g, modes = _modes_for_fields()
    for mode in modes:
        pts = [(g.R, th, z) for th in (0.3, 1.9) for z in (0.1, 0.7, 1.1)]
        pts += [(0.4, 0.5, 0.2), (0.0, 0.0, 0.9)]
        for s in field_map(mode, 0.7 + 0.2j, -0.3j, pts):
            assert s.B[2] == 0
        for s in field_map(mode, 0.7 + 0.2j, -0.3j, pts[:6]):
            # tangential on the wall: E_theta and E_z
            assert abs(s.E[1]) < 1e-12 and abs(s.E[2]) < 1e-12


def test_interface_continuity():
    g, modes = _modes_for_fields()
    assert len(modes) == 5
    pts = [(r, th, g.a) for r in (0.2, 0.55) for th in (0.0, 1.1)]
    for mode in modes:
        below = field_map(mode, 1.0, 0.5j, pts, interface_side=1)
        above = field_map(mode, 1.0, 0.5j, pts, interface_side=2)
        for lo, hi in zip(below, above):
            scale = max(abs(v) for v in lo.E + hi.E) + 1e-300
            dz_lo, dz_hi = mode.eps1 * lo.E[2], mode.eps2 * hi.E[2]
            assert abs(dz_lo - dz_hi) < 1e-10 * max(abs(dz_lo), 1e-300) + 1e-14
            for k in (0, 1):
                assert abs(lo.E[k] - hi.E[k]) < 1e-10 * scale
            for k in (0, 1):
                assert abs(lo.B[k] - hi.B[k]) < 1e-10 * (max(abs(v) for v in lo.B) + 1e-300)


def test_field_outside_cavity():
    g, modes = _modes_for_fields()
    with pytest.raises(DomainError):
        field_map(modes[0], 1.0, 0.0, [(g.R * 1.1, 0.0, 0.2)])
    with pytest.raises(DomainError):
        field_map(modes[0], 1.0, 0.0, [(0.1, 0.0, -0.01)])
