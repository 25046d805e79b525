import math
import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vacspp.errors import DomainError, SingularMediumError
from vacspp.media import (
    MediumState,
    ModulationProfile,
    Polarization,
    Region,
    RegionStack,
    Target,
    eval_medium,
    spp_exists,
)


def _profile(**kw):
    base = dict(
        base=MediumState(-2.0),
        partner=MediumState(1.0),
        kappa=0.01,
        omega0=1.0,
        chi=-1.0,
        t_start=0.0,
        t_end=100.0,
    )
    base.update(kw)
    return ModulationProfile(**base)


def test_zero_depth_returns_base():
    p = _profile(kappa=0.0)
    for t in (0.0, 3.3, 50.0):
        assert eval_medium(p, t) == p.base


def test_outside_window_returns_base():
    p = _profile()
    assert eval_medium(p, -1.0) == p.base
    assert eval_medium(p, 101.0) == p.base


def test_chi_minus_one_example():
    # 1 + r(t) = (1 + chi) - kappa sin(w0 t) = -0.01 at w0 t = pi/2
    p = _profile()
    m = eval_medium(p, math.pi / 2)
    assert 1.0 + (p.partner.eps / m.eps).real == pytest.approx(-0.01, abs=1e-15)


def test_back_solved_ratio():
    p = _profile(chi=-0.5, kappa=0.2)
    for t in (0.3, 1.1, 7.0):
        m = eval_medium(p, t)
        assert (p.partner.eps / m.eps).real == pytest.approx(p.ratio(t), rel=1e-14)


def test_singular_instants():
    with pytest.raises(SingularMediumError):
        eval_medium(_profile(chi=0.0, kappa=0.5), 0.0)
    p = _profile(chi=-1.0, kappa=0.01)
    with pytest.raises(SingularMediumError):
        eval_medium(p, 0.0)


def test_profile_validation():
    with pytest.raises(DomainError):
        _profile(kappa=1.0)
    with pytest.raises(DomainError):
        _profile(t_start=5.0, t_end=5.0)


def test_nu_defaults_to_omega0():
    assert _profile(omega0=3.0).drive_frequency == 3.0
    assert _profile(omega0=3.0, nu=6.0).drive_frequency == 6.0


def test_permeability_target():
    p = _profile(target=Target.PERMEABILITY, base=MediumState(1.0, -2.0), partner=MediumState(1.0, 1.0))
    m = eval_medium(p, 0.7)
    assert m.eps == 1.0
    assert (1.0 / m.mu).real == pytest.approx(p.ratio(0.7), rel=1e-14)


def test_mirrored_profile_swaps_roles():
    p = _profile(chi=-0.5)
    q = p.mirrored()
    assert q.target is Target.PERMEABILITY
    for t in (0.2, 1.7):
        a, b = eval_medium(p, t), eval_medium(q, t)
        assert a.eps == b.mu and a.mu == b.eps


def test_gain_medium_warns():
    with pytest.warns(RuntimeWarning):
        MediumState(-2 - 0.1j)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        MediumState(-2 + 0.1j)


def test_spp_exists_examples():
    tm = Polarization.TM_ELECTRIC
    assert spp_exists(MediumState(-2), MediumState(1), tm)
    assert not spp_exists(MediumState(-0.5), MediumState(1), tm)
    assert not spp_exists(MediumState(2), MediumState(1), tm)
    te = Polarization.TE_MAGNETIC
    assert spp_exists(MediumState(1, -2), MediumState(1, 1), te)
    assert not spp_exists(MediumState(-2), MediumState(1), te)


_eps = st.floats(-50, 50).filter(lambda x: abs(x) > 1e-3)


@given(_eps, _eps)
def test_spp_exists_matches_real_decay_solution(e1, e2):
    # a bound TM mode needs real positive kappa_i with kappa1/e1 + kappa2/e2 = 0,
    # i.e. k^2/k0^2 = e1 e2/(e1+e2) must exceed both e1 and e2 (mu = 1)
    if abs(e1 + e2) < 1e-9:
        return
    ratio = e1 * e2 / (e1 + e2)
    bound = e1 * e2 < 0 and ratio > max(e1, e2)
    assert spp_exists(MediumState(e1), MediumState(e2)) == bound


def test_region_stack_validation():
    with pytest.raises(DomainError):
        RegionStack((MediumState(1.0),))
    with pytest.raises(DomainError):
        RegionStack((MediumState(1.0), MediumState(-2.0), MediumState(1.0)))
    st3 = RegionStack((MediumState(1.0), MediumState(-2.0), MediumState(1.0)), d=0.5)
    assert [r.label for r in st3.regions] == ["1", "2", "3"]
    assert st3.swapped().states()[1] == MediumState(1.0, -2.0)


def test_region_with_profile():
    r = Region("slab", _profile(chi=-0.5))
    assert r.state(0.0).eps == pytest.approx(1.0 / -0.5)
