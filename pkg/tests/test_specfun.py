import math

import numpy as np
import pytest

from k0well import specfun
from k0well.quadrature import integrate_semi_infinite

# 50-digit arithmetic, rounded to nearest double.
K0_GOLDEN = (
    (1e-8, 18.536612259610778),
    (1e-6, 13.931442073626419),
    (1e-4, 9.3262719134502749),
    (0.01, 4.721244730161095),
    (0.1, 2.4270690247020166),
    (0.5, 0.92441907122766586),
    (1.0, 0.42102443824070833),
    (1.5, 0.21380556264752574),
    (2.0, 0.11389387274953344),
    (2.5, 0.062347553200366186),
    (3.0, 0.034739504386279248),
    (5.0, 0.0036910983340425943),
    (10.0, 1.7780062316167652e-5),
    (20.0, 5.7412378153365243e-10),
    (50.0, 3.4101677497894955e-23),
    (100.0, 4.656628229175902e-45),
    (300.0, 3.7236948548891433e-132),
    (700.0, 4.6697764316853769e-306),
)

K1_GOLDEN = (
    (1e-8, 99999999.999999905),
    (1e-6, 999999.99999278428),
    (1e-4, 9999.999508686405),
    (0.01, 99.973894118296248),
    (0.1, 9.8538447808706061),
    (0.5, 1.6564411200033009),
    (1.0, 0.60190723019723457),
    (1.5, 0.27738780045684382),
    (2.0, 0.13986588181652243),
    (2.5, 0.073890816347747064),
    (3.0, 0.040156431128194184),
    (5.0, 0.0040446134454521642),
    (10.0, 1.8648773453825585e-5),
    (20.0, 5.8830579695570382e-10),
    (50.0, 3.4441022267175556e-23),
    (100.0, 4.6798537356369093e-45),
    (300.0, 3.7298958583323727e-132),
    (700.0, 4.6731107967079661e-306),
)


@pytest.mark.parametrize("x,want", K0_GOLDEN)
def test_k0_golden(x, want):
    assert specfun.bessel_k0(x) == pytest.approx(want, rel=5e-14)


@pytest.mark.parametrize("x,want", K1_GOLDEN)
def test_k1_golden(x, want):
    assert specfun.bessel_k1(x) == pytest.approx(want, rel=5e-14)


def test_integral_representation_spot():
    # e^x K_nu(x) = int_0^inf e^{-x(cosh t - 1)} cosh(nu t) dt: evaluates
    # the functions through a route that shares none of the series/CF code.
    # t is clamped where the integrand is already exactly 0, before cosh
    # can overflow at the quadrature's far probe nodes.
    for x in (0.03, 0.7, 2.0, 6.5, 40.0):
        def k0_rep(t, x=x):
            c = np.cosh(np.minimum(t, 50.0))
            return np.exp(-x * (c - 1.0))

        def k1_rep(t, x=x):
            c = np.cosh(np.minimum(t, 50.0))
            return np.exp(-x * (c - 1.0)) * c

        r0 = integrate_semi_infinite(k0_rep, abs_tol=1e-13)
        r1 = integrate_semi_infinite(
            k1_rep, abs_tol=1e-13 * max(1.0, 1.0 / x))
        assert specfun.bessel_k0(x) * math.exp(x) == \
            pytest.approx(r0.value, rel=1e-12)
        assert specfun.bessel_k1(x) * math.exp(x) == \
            pytest.approx(r1.value, rel=1e-12)


def test_small_x_leading_log():
    # K0 -> -ln(x/2) - gamma as x -> 0; remainder is O(x^2 ln x)
    for x in (1e-8, 1e-6, 1e-4):
        lead = specfun.k0_leading(x)
        assert abs(specfun.bessel_k0(x) - lead) < 2.0 * x * x * abs(
            math.log(x))
    assert specfun.k0_leading(1e-4) == pytest.approx(
        -math.log(0.5e-4) - specfun.EULER_GAMMA, rel=1e-15)


def test_series_cf_seam():
    # the x = 2 evaluation-scheme boundary must be invisible
    below = specfun.bessel_k0(2.0)
    above = specfun.bessel_k0(2.0 + 1e-12)
    assert above == pytest.approx(below, rel=5e-13)
    assert specfun.bessel_k1(2.0 + 1e-12) == \
        pytest.approx(specfun.bessel_k1(2.0), rel=5e-13)


def test_derivative_relation():
    # d/dx K0 = -K1, central differences
    for x in (0.7, 1.9, 2.1, 7.0):
        h = 1e-5 * x
        fd = (specfun.bessel_k0(x + h) - specfun.bessel_k0(x - h)) / (2 * h)
        assert fd == pytest.approx(-specfun.bessel_k1(x), rel=1e-8)


def test_vectorized_matches_scalar():
    xs = np.geomspace(1e-6, 500.0, 40)
    v0 = specfun.bessel_k0(xs)
    v1 = specfun.bessel_k1(xs)
    assert isinstance(v0, np.ndarray) and v0.shape == xs.shape
    for i, x in enumerate(xs):
        assert v0[i] == specfun.bessel_k0(float(x))
        assert v1[i] == specfun.bessel_k1(float(x))
    assert isinstance(specfun.bessel_k0(1.0), float)


def test_huge_arguments_stay_finite():
    # far past the underflow point the value is exactly 0.0, never NaN
    xs = np.geomspace(1e-8, 5e30, 60)
    v = specfun.bessel_k0(xs)
    assert np.all(np.isfinite(v))
    assert np.all(np.diff(v) <= 0.0)
    assert specfun.bessel_k0(800.0) == 0.0
    assert specfun.bessel_k1(800.0) == 0.0
    assert specfun.bessel_k0(1e6) == 0.0


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan")])
def test_domain_errors(bad):
    with pytest.raises(ValueError):
        specfun.bessel_k0(bad)
    with pytest.raises(ValueError):
        specfun.bessel_k1(bad)
    with pytest.raises(ValueError):
        specfun.k0_leading(bad)
