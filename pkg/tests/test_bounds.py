import math

import numpy as np
import pytest

from k0well import bounds
from k0well.bounds import (check_count, integral_identity_suite,
                           kato_inequality_sample, seto_0_closed,
                           seto_0_numeric, seto_m)
from k0well.model import Coupling, PhysicalParams
from k0well.specfun import EULER_GAMMA, bessel_k0

UNIT = PhysicalParams(hbar=1.0, mu=1.0, alpha=1.0, beta=1.0)


def test_seto_m_values():
    b = seto_m(Coupling(1.0), 1)
    assert b.closed_form == pytest.approx(0.5, rel=1e-15)
    assert b.numeric == pytest.approx(0.5, abs=1e-10)
    assert b.applicable
    assert seto_m(4.0, 2).closed_form == pytest.approx(1.0, rel=1e-15)
    assert seto_m(10.0, 1).closed_form == pytest.approx(5.0, rel=1e-15)


def test_seto_m_validation():
    with pytest.raises(ValueError):
        seto_m(1.0, 0)
    with pytest.raises(ValueError):
        seto_m(0.0, 1)
    with pytest.raises(ValueError):
        seto_m(-1.0, 1)


def test_seto_0_closed():
    b = seto_0_closed(1.9)
    assert b.closed_form == pytest.approx(1.95, rel=1e-15)
    assert b.numeric is None
    assert b.m == 0


def test_seto_0_numeric_is_one_plus_C():
    # the double integral evaluates to 1 + C, not the closed form's 1 + C/2
    b = seto_0_numeric(1.9)
    assert b.closed_form == pytest.approx(1.95, rel=1e-15)
    assert b.numeric == pytest.approx(2.9, abs=1e-9)
    assert seto_0_numeric(0.5).numeric == pytest.approx(1.5, abs=1e-9)


def test_seto_0_inner_samples():
    # recorded |ln|-only inner integrals against the differentiated form
    b = seto_0_numeric(1.0)
    assert len(b.inner_samples) == 3
    for r, val in b.inner_samples:
        want = EULER_GAMMA + 2.0 * bessel_k0(r) + math.log(0.5 * r)
        assert val == pytest.approx(want, abs=1e-9)


def test_check_count():
    assert check_count(0, seto_m(1.0, 1))            # 0 < 0.5
    assert check_count(1, seto_0_closed(1.9))        # 1 < 1.95
    assert not check_count(1, seto_m(4.0, 2))        # 1 < 1.0 fails
    assert check_count(2, seto_0_numeric(1.9))       # 2 < 2.9 via numeric
    assert not check_count(3, seto_0_numeric(1.9))
    with pytest.raises(ValueError):
        check_count(-1, seto_m(1.0, 1))


# measured (lhs, rhs) on the sigma x lambda sample grid at unit
# parameters; lhs is mpmath-confirmed to 16 digits at sigma = 1
KATO_GRID = (
    (0.1, 0.55, True),
    (0.1, 1.0, True),
    (0.1, 5.0, True),
    (1.0, 0.55, False),   # 0.8313243775042797 > 0.45891217326661254
    (1.0, 1.0, False),    # 0.8313243775042797 > 0.42677669529663687
    (1.0, 5.0, True),
    (10.0, 0.55, True),
    (10.0, 1.0, True),
    (10.0, 5.0, True),
)


@pytest.mark.parametrize("sigma,lam,want", KATO_GRID)
def test_kato_inequality_sample_grid(sigma, lam, want):
    chk = kato_inequality_sample(UNIT, lam, sigma)
    assert chk.satisfied is want
    assert chk.lhs > 0.0 and chk.rhs > 0.0


def test_kato_sample_unit_gaussian_values():
    chk = kato_inequality_sample(UNIT, 1.0, 1.0)
    assert chk.lhs == pytest.approx(0.8313243775042797, rel=1e-12)
    assert chk.rhs == pytest.approx(0.42677669529663687, rel=1e-12)


def test_kato_sample_free_potential():
    chk = kato_inequality_sample(
        PhysicalParams(1.0, 1.0, 0.0, 1.0), 1.0, 1.0)
    assert chk.lhs == 0.0
    assert chk.satisfied


def test_kato_sample_validation():
    with pytest.raises(ValueError):
        kato_inequality_sample(UNIT, 0.25, 1.0)   # lam = A: a >= 1
    with pytest.raises(ValueError):
        kato_inequality_sample(UNIT, 1.0, 0.0)
    with pytest.raises(ValueError):
        kato_inequality_sample(UNIT, 1.0, -2.0)


def test_identity_suite_passes():
    rep = integral_identity_suite()
    assert rep.all_passed
    assert len(rep.checks) == 7
    by_name = {c.name: c for c in rep.checks}
    sq = by_name["int s K0^2"]
    assert sq.value == pytest.approx(0.5, abs=1e-10)
    assert "pi/2" in sq.note          # records the conflicting stated value
    assert sq.passed


def test_identity_suite_catches_broken_k0(monkeypatch):
    monkeypatch.setattr(bounds.specfun, "bessel_k0",
                        lambda x: 0.9 * np.exp(-np.asarray(x)))
    rep = integral_identity_suite()
    assert not rep.all_passed
