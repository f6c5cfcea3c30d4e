import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmoments.special import (
    DEFAULT_PROFILE,
    PrecisionProfile,
    bernoulli_numbers,
    digamma,
    gamma,
    hurwitz_zeta,
    log_gamma,
    riemann_zeta,
)


def test_profile_validation():
    with pytest.raises(ValueError):
        PrecisionProfile(zeta_series_terms=5)
    with pytest.raises(ValueError):
        PrecisionProfile(euler_maclaurin_correction_order=3)


@pytest.mark.parametrize("z, expected", [
    (1.0, 0.0),
    (0.5, 0.5723649429247001),
    (0.25, math.log(3.6256099082219083)),
])
def test_log_gamma_reference(z, expected):
    assert abs(log_gamma(z) - expected) < 1e-12


def test_log_gamma_pole():
    with pytest.raises(ValueError):
        log_gamma(-3.0)
    with pytest.raises(ValueError):
        log_gamma(0.0)


def test_log_gamma_against_mpmath():
    rng = np.random.default_rng(1)
    z = rng.uniform(-20, 60, 200) + 1j * rng.uniform(-60, 60, 200)
    ours = np.exp(log_gamma(z))
    ref = np.array([complex(mpmath.gamma(complex(v))) for v in z])
    assert np.max(np.abs(ours / ref - 1)) < 1e-12


def _strip_grid():
    rng = np.random.default_rng(7)
    z = rng.uniform(-5, 5, 100) + 1j * rng.uniform(-20, 20, 100)
    return z[np.abs(z.real - np.round(z.real)) > 1e-3]


def test_gamma_reflection():
    z = _strip_grid()
    prod = gamma(z) * gamma(1 - z) * np.sin(np.pi * z) / np.pi
    assert np.max(np.abs(prod - 1)) < 1e-10


def test_gamma_recurrence():
    z = _strip_grid()
    assert np.max(np.abs(gamma(z + 1) / (z * gamma(z)) - 1)) < 1e-11


def test_bernoulli():
    b = bernoulli_numbers(6)
    assert [str(x) for x in b[:7]] == ["1", "-1/2", "1/6", "0", "-1/30", "0", "1/42"]


@pytest.mark.parametrize("s, expected", [
    (2.0, math.pi ** 2 / 6),
    (0.0, -0.5),
    (-1.0, -1 / 12),
])
def test_riemann_zeta_reference(s, expected):
    assert abs(riemann_zeta(s) - expected) < 1e-10


def test_riemann_zeta_pole():
    with pytest.raises(ValueError):
        riemann_zeta(1.0)


def test_riemann_zeta_against_mpmath():
    pts = [0.5 + 14.134725j, 0.5 + 99j, -3.5 + 20j, 1.01, 0.9 - 50j, 3 + 100j, -10.5]
    for s in pts:
        assert abs(riemann_zeta(s) - complex(mpmath.zeta(s))) < 1e-10


def test_hurwitz_reference():
    assert abs(hurwitz_zeta(2.0, 0.5) - math.pi ** 2 / 2) < 1e-10
    for s in (2.0, 0.5 + 3j, -1.5):
        assert abs(hurwitz_zeta(s, 1.0) - riemann_zeta(s)) < 1e-12


def test_hurwitz_domain():
    with pytest.raises(ValueError):
        hurwitz_zeta(1.0, 0.5)
    with pytest.raises(ValueError):
        hurwitz_zeta(2.0, 0.0)


def test_hurwitz_against_mpmath():
    rng = np.random.default_rng(3)
    for _ in range(40):
        s = complex(rng.uniform(-3, 4), rng.uniform(-100, 100))
        a = rng.uniform(0.01, 1.0)
        ref = complex(mpmath.zeta(s, a))
        # absolute for O(1) values; near a -> 0 the value itself reaches 1e6
        assert abs(hurwitz_zeta(s, a) - ref) < 1e-10 * max(1.0, abs(ref))


def test_hurwitz_vectorised_matches_scalar():
    a = np.linspace(0.05, 1.0, 20)
    vec = hurwitz_zeta(0.5 + 2j, a)
    assert np.allclose(vec, [hurwitz_zeta(0.5 + 2j, float(x)) for x in a], rtol=0, atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 4), st.floats(-100, 100), st.floats(0.01, 1.0))
def test_hurwitz_shift(sr, si, a):
    s = complex(sr, si)
    if abs(s - 1) < 1e-3:
        return
    z0, z1 = hurwitz_zeta(s, a), hurwitz_zeta(s, a + 1.0)
    scale = max(1.0, abs(z0), abs(z1))
    assert abs(z0 - z1 - cmath.exp(-s * math.log(a))) < 1e-10 * scale


@pytest.mark.parametrize("m", [2, 3, 5])
@pytest.mark.parametrize("s", [2.0, 0.5 + 7j, -1.5 + 1j])
def test_hurwitz_multiplication(m, s):
    total = sum(hurwitz_zeta(s, j / m) for j in range(1, m + 1)) * m ** (-s)
    assert abs(total - riemann_zeta(s)) < 1e-9


def test_digamma_against_mpmath():
    x = np.linspace(0.01, 1.0, 60)
    ref = np.array([float(mpmath.digamma(v)) for v in x])
    assert np.max(np.abs(digamma(x) - ref)) < 1e-12


def test_tighter_profile_does_not_move_values():
    tight = PrecisionProfile(80, 30, 1e-13)
    for s in (0.5 + 40j, 2.5):
        assert abs(riemann_zeta(s, tight) - riemann_zeta(s, DEFAULT_PROFILE)) < 1e-11
