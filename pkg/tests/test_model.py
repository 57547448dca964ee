import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k0well.model import (Coupling, PhysicalParams, coupling_from_physical,
                          energy_scale, kato_constants, optimal_lambda,
                          spectral_constants, v_eff)

UNIT = PhysicalParams(hbar=1.0, mu=1.0, alpha=1.0, beta=1.0)


def test_coupling_from_physical():
    assert coupling_from_physical(UNIT).C == 2.0
    assert coupling_from_physical(
        PhysicalParams(1.0, 1.0, 1.0, 2.0)).C == 0.5
    assert coupling_from_physical(
        PhysicalParams(2.0, 1.0, 1.0, 0.5)).C == 2.0


def test_energy_scale():
    assert energy_scale(UNIT) == 0.5
    assert energy_scale(PhysicalParams(1.0, 1.0, 1.0, 2.0)) == 2.0


def test_params_validation():
    for bad in ({"hbar": 0.0}, {"mu": -1.0}, {"beta": 0.0},
                {"alpha": -0.5}, {"mu": math.inf}):
        kw = dict(hbar=1.0, mu=1.0, alpha=1.0, beta=1.0)
        kw.update(bad)
        with pytest.raises(ValueError):
            PhysicalParams(**kw)
    PhysicalParams(1.0, 1.0, 0.0, 1.0)  # free Hamiltonian is fine


def test_coupling_validation():
    with pytest.raises(ValueError):
        Coupling(-0.1)
    with pytest.raises(ValueError):
        Coupling(math.nan)
    assert Coupling(0.0).C == 0.0


def test_v_eff_values():
    assert v_eff(1.0, 0, Coupling(1.0)) == pytest.approx(
        -0.6710244382407083, rel=1e-14)
    # s-wave: purely attractive for every C > 0
    s = np.geomspace(1e-4, 30.0, 200)
    assert np.all(v_eff(s, 0, Coupling(0.7)) < 0.0)
    # centrifugal only: positive everywhere
    assert np.all(v_eff(s, 1, Coupling(0.0)) > 0.0)
    # m = 1 with strong coupling: negative well at finite s, positive core
    v = v_eff(s, 1, Coupling(10.0))
    assert v[0] > 0.0 and v.min() < 0.0


def test_v_eff_validation():
    with pytest.raises(ValueError):
        v_eff(0.0, 0, Coupling(1.0))
    with pytest.raises(ValueError):
        v_eff(-1.0, 0, Coupling(1.0))
    with pytest.raises(ValueError):
        v_eff(np.array([1.0, np.inf]), 0, Coupling(1.0))


def test_kato_constants_at_half():
    rep = kato_constants(UNIT, 0.5)
    assert rep.a == pytest.approx(0.5, rel=1e-15)
    assert rep.b == pytest.approx(0.125, rel=1e-15)
    assert rep.A == pytest.approx(0.25, rel=1e-15)
    assert rep.f == pytest.approx(0.25, rel=1e-15)
    assert rep.valid


def test_kato_constants_invalid_region():
    rep = kato_constants(UNIT, 0.25)  # lam = A: a = 1, no relative bound
    assert rep.a == pytest.approx(1.0, rel=1e-15)
    assert rep.f is None
    assert not rep.valid
    with pytest.raises(ValueError):
        kato_constants(UNIT, 0.0)
    with pytest.raises(ValueError):
        kato_constants(UNIT, -1.0)


def test_optimal_lambda_minimizes_f():
    lam0 = optimal_lambda(UNIT)
    assert lam0 == pytest.approx(0.5, rel=1e-15)
    f0 = kato_constants(UNIT, lam0).f
    for lam in (0.3, 0.4, 0.6, 0.9, 2.0):
        f = kato_constants(UNIT, lam).f
        assert f is None or f >= f0 - 1e-15


def test_spectral_constants():
    lb_phys, lb_dimless, gap = spectral_constants(UNIT)
    assert lb_phys == pytest.approx(-0.25, rel=1e-15)
    assert lb_dimless == pytest.approx(-0.5, rel=1e-15)
    assert gap == pytest.approx(0.25, rel=1e-15)


@settings(max_examples=60, deadline=None)
@given(hbar=st.floats(0.1, 10.0), mu=st.floats(0.1, 10.0),
       alpha=st.floats(0.01, 10.0), beta=st.floats(0.1, 10.0),
       t=st.floats(0.2, 5.0))
def test_scaling_closure(hbar, mu, alpha, beta, t):
    # C and the physical lower bound are invariant under hbar -> t*hbar,
    # beta -> beta/t; and the dimensionless/physical forms stay consistent
    p = PhysicalParams(hbar, mu, alpha, beta)
    q = PhysicalParams(t * hbar, mu, alpha, beta / t)
    assert coupling_from_physical(q).C == pytest.approx(
        coupling_from_physical(p).C, rel=1e-12)
    lb_phys, lb_dimless, gap = spectral_constants(p)
    assert lb_phys == pytest.approx(lb_dimless * energy_scale(p), rel=1e-12)
    assert gap == pytest.approx(-lb_phys, rel=1e-15)
