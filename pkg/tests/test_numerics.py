import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from vacspp.errors import BracketError, ConvergenceError, DomainError
from vacspp.numerics import (
    Bracket,
    IntegratorConfig,
    bessel_j,
    bessel_j_prime,
    bessel_zero,
    find_root,
    integrate_oscillator,
    quadrature,
    scan_sign_changes,
)
from vacspp.numerics.bessel import mcmahon_zero


# -- Bessel ---------------------------------------------------------------


def test_bessel_at_origin():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0
    assert bessel_j(7, 0.0) == 0.0


def test_bessel_first_zero_value():
    assert abs(bessel_j(0, 2.4048)) < 5e-5


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 50), st.floats(0.0, 200.0))
def test_bessel_matches_scipy(n, x):
    assert bessel_j(n, x) == pytest.approx(special.jv(n, x), abs=5e-14)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 30), st.floats(0.01, 80.0))
def test_bessel_derivative_matches_scipy(n, x):
    assert bessel_j_prime(n, x) == pytest.approx(special.jvp(n, x), abs=5e-14)


def test_bessel_domain():
    with pytest.raises(DomainError):
        bessel_j(-1, 1.0)
    with pytest.raises(DomainError):
        bessel_j(51, 1.0)
    with pytest.raises(DomainError):
        bessel_j(0, math.nan)
    with pytest.raises(DomainError):
        bessel_j(0, -3.3)


def test_bessel_zero_four_digit_value():
    x = bessel_zero(0, 1)
    assert abs(x - 2.4048) < 5e-4
    assert abs(bessel_j(0, x)) < 1e-12


def test_bessel_zero_examples():
    v = bessel_zero(0, 2)
    assert 2.4048 < v < 8 and abs(bessel_j(0, v)) < 1e-12
    v = bessel_zero(1, 1)
    assert 2.4048 < v < 5 and abs(bessel_j(1, v)) < 1e-12


@pytest.mark.parametrize("n", [0, 1, 2, 3, 7, 20, 50])
def test_bessel_zeros_match_scipy(n):
    ours = [bessel_zero(n, p) for p in range(1, 101)]
    ref = special.jn_zeros(n, 100)
    for a, b in zip(ours, ref):
        assert a == pytest.approx(b, rel=1e-13)


def test_bessel_zeros_interlace():
    # J_n and J_{n+1} zeros interlace
    for n in range(4):
        for p in range(1, 10):
            assert bessel_zero(n, p) < bessel_zero(n + 1, p) < bessel_zero(n, p + 1)


def test_mcmahon_is_close_for_large_p():
    assert mcmahon_zero(0, 50) == pytest.approx(bessel_zero(0, 50), abs=1e-6)


def test_bessel_zero_domain():
    with pytest.raises(DomainError):
        bessel_zero(0, 0)


# -- roots ----------------------------------------------------------------


def test_find_root_sqrt2():
    r = find_root(lambda x: x * x - 2, Bracket(1, 2), tol=1e-12)
    assert r == pytest.approx(math.sqrt(2), abs=1e-12)


def test_find_root_cos():
    assert find_root(math.cos, Bracket(1, 2)) == pytest.approx(math.pi / 2, abs=1e-12)


def test_find_root_endpoint_root():
    assert find_root(lambda x: x - 1.0, Bracket(1.0, 3.0)) == 1.0


def test_find_root_bracket_errors():
    with pytest.raises(BracketError):
        find_root(lambda x: x * x + 1, Bracket(-1, 1))
    with pytest.raises(DomainError):
        Bracket(2, 1)


def test_find_root_budget():
    with pytest.raises(ConvergenceError):
        find_root(lambda x: math.exp(x) - 1.3, Bracket(0, 1), tol=1e-300, max_iter=2)


@settings(max_examples=200, deadline=None)
@given(st.floats(-50, 50), st.floats(0.1, 10), st.floats(0.1, 10))
def test_find_root_cubic_property(root, left, right):
    f = lambda x: (x - root) ** 3 + (x - root)  # noqa: E731
    r = find_root(f, Bracket(root - left, root + right), tol=1e-13)
    assert abs(r - root) < 1e-10


def test_scan_sign_changes_counts_sine_roots():
    grid = [i * 0.01 for i in range(1, 1001)]
    brs = scan_sign_changes(math.sin, grid)
    roots = [find_root(math.sin, b) for b in brs]
    assert roots == pytest.approx([math.pi, 2 * math.pi, 3 * math.pi], abs=1e-12)


def test_scan_skips_nonfinite():
    grid = [-2, -1, 0, 1, 2]
    f = lambda x: math.nan if x == 0 else x  # noqa: E731
    assert scan_sign_changes(f, grid) == []


# -- quadrature -----------------------------------------------------------


def test_quadrature_examples():
    assert quadrature(math.sin, 0, math.pi) == pytest.approx(2.0, abs=1e-13)
    assert quadrature(lambda x: x * x, 0, 1) == pytest.approx(1 / 3, abs=1e-14)


def test_quadrature_piecewise_breakpoint():
    L, a, k, e1, e2 = 1.0, 0.37, 7.3, 4.0, 1.5

    def f(z):
        return (e1 if z < a else e2) * math.cos(k * z) ** 2

    def prim(z):
        return 0.5 * z + math.sin(2 * k * z) / (4 * k)

    exact = e1 * (prim(a) - prim(0)) + e2 * (prim(L) - prim(a))
    assert quadrature(f, 0, L, breakpoints=(a,)) == pytest.approx(exact, abs=1e-10)


def test_quadrature_reversed_and_empty():
    assert quadrature(math.exp, 1, 0) == pytest.approx(-(math.e - 1), abs=1e-13)
    assert quadrature(math.exp, 2, 2) == 0.0


# -- oscillator integration -------------------------------------------------


def _canonical(w):
    return 1 / math.sqrt(2 * w), -1j * math.sqrt(w / 2)


def test_stationary_period():
    w = 1.7
    q0, v0 = _canonical(w)
    out = integrate_oscillator(lambda t: w * w, q0, v0, (0, 2 * math.pi / w))
    assert abs(out[-1].Q - q0) < 1e-8
    assert abs(out[-1].Qdot - v0) < 1e-8


def test_zero_depth_matches_constant():
    q0, v0 = _canonical(1.0)
    a = integrate_oscillator(lambda t: 1.0, q0, v0, (0, 50))
    b = integrate_oscillator(lambda t: 1.0 * (1 + 0.0 * math.sin(2 * t)), q0, v0, (0, 50))
    assert a[-1].Q == b[-1].Q


def test_dual_integrator_agreement_growth():
    q0, v0 = _canonical(1.0)
    ws = lambda t: 1 + 0.01 * math.sin(2 * t)  # noqa: E731
    rk = integrate_oscillator(ws, q0, v0, (0, 400), IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14))
    errs = []
    for steps in (200, 400):
        cfg = IntegratorConfig(method="symplectic", max_step=2 * math.pi / steps)
        sy = integrate_oscillator(ws, q0, v0, (0, 400), cfg)
        errs.append(abs(rk[-1].Q - sy[-1].Q) / abs(rk[-1].Q))
    assert abs(rk[-1].Q) > 1.3 * abs(q0)
    assert errs[1] < 5e-6
    # fourth order: halving the step cuts the error ~16x
    assert 10 < errs[0] / errs[1] < 25


def test_t_eval_outputs():
    q0, v0 = _canonical(1.0)
    out = integrate_oscillator(lambda t: 1.0, q0, v0, (0, 10), t_eval=[1, 2.5, 7])
    assert [s.t for s in out] == [0, 1, 2.5, 7, 10]
    for s in out:
        assert s.Q == pytest.approx(cmath.exp(-1j * s.t) * q0, abs=1e-8)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(0.0, 0.2), st.floats(0.5, 3.0))
def test_wronskian_conserved_dopri5(w, kappa, nu):
    q0, v0 = _canonical(w)
    out = integrate_oscillator(
        lambda t: w * w * (1 + kappa * math.sin(nu * t)),
        q0,
        v0,
        (0, 60),
        IntegratorConfig(rel_tol=1e-12, abs_tol=1e-15),
    )
    assert out[0].wronskian() == pytest.approx(1.0, abs=1e-15)
    assert out[-1].wronskian() == pytest.approx(1.0, abs=1e-8)


def test_wronskian_exact_symplectic_large_growth():
    q0, v0 = _canonical(1.0)
    out = integrate_oscillator(
        lambda t: 1 + 0.05 * math.sin(2 * t),
        q0,
        v0,
        (0, 2000),
        IntegratorConfig(method="symplectic", max_step=2 * math.pi / 32, digits=80),
    )
    assert abs(out[-1].Q) > 1e8
    assert out[-1].wronskian() == pytest.approx(1.0, abs=1e-12)


def test_damping_matches_closed_form():
    g = 0.1
    q0, v0 = _canonical(1.0)
    out = integrate_oscillator(lambda t: 1.0, q0, v0, (0, 20), damping=lambda t: g)
    wd = math.sqrt(1 - g * g / 4)
    t = 20.0
    exact = math.exp(-g * t / 2) * (q0 * math.cos(wd * t) + (v0 + g * q0 / 2) / wd * math.sin(wd * t))
    assert abs(out[-1].Q - exact) < 1e-8


def test_integrator_config_validation():
    with pytest.raises(DomainError):
        IntegratorConfig(rel_tol=0)
    with pytest.raises(DomainError):
        IntegratorConfig(method="symplectic")
    with pytest.raises(DomainError):
        IntegratorConfig(method="euler")
    with pytest.raises(DomainError):
        integrate_oscillator(lambda t: 1.0, 1, 0, (1, 0))


def test_step_budget():
    with pytest.raises(ConvergenceError):
        integrate_oscillator(lambda t: 1.0, 1, 0, (0, 100), IntegratorConfig(max_steps=5))
