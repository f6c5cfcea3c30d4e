import cmath
import math

import mpmath
import numpy as np
import pytest

from lmoments.characters import build_group, character_table, enumerate_characters, root_number
from lmoments.lfunction import (
    ShiftPair,
    completed_lambda,
    completed_lambdas,
    functional_equation_residual,
    gamma_factor,
    hurwitz_table,
    l_value,
    l_values,
)
from lmoments.special import log_gamma

CATALAN = 0.915965594177219015


def _even_primitive(q):
    return enumerate_characters(build_group(q), even_only=True, primitive_only=True)


def test_shift_pair_validation():
    with pytest.raises(ValueError):
        ShiftPair(0.0, 0.1)
    with pytest.raises(ValueError):
        ShiftPair(0.1, 0.1)
    with pytest.raises(ValueError):
        ShiftPair(0.1, -0.1)
    with pytest.raises(ValueError):
        ShiftPair(0.6, 0.1)
    sp = ShiftPair(0.02, 0.01 + 0.03j)
    assert sp.mirror() == ShiftPair(-0.01 - 0.03j, -0.02)
    assert sp.swap() == ShiftPair(0.01 + 0.03j, 0.02)
    auto = ShiftPair.auto(50)
    assert abs(auto.alpha - 0.9 / math.log(50)) < 1e-15 and abs(auto.beta - 0.4 / math.log(50)) < 1e-15


def test_l_value_examples():
    triv = enumerate_characters(build_group(1))[0]
    assert abs(l_value(2, triv) - math.pi ** 2 / 6) < 1e-10
    odd4 = enumerate_characters(build_group(4), primitive_only=True)[0]
    assert abs(l_value(2, odd4) - CATALAN) < 1e-10
    chi3 = enumerate_characters(build_group(3), primitive_only=True)[0]
    assert abs(l_value(1, chi3) - math.pi / (3 * math.sqrt(3))) < 1e-10
    with pytest.raises(ValueError):
        l_value(1, triv)


@pytest.mark.parametrize("q", [5, 7, 8, 12, 13, 24])
def test_l_value_against_mpmath(q):
    for chi in enumerate_characters(build_group(q)):
        coeffs = [complex(chi(a)) for a in range(q)]
        for s in (0.5, 0.52 + 0.3j, 2.0):
            assert abs(l_value(s, chi) - complex(mpmath.dirichlet(s, coeffs))) < q * 1e-10


@pytest.mark.parametrize("q", [3, 5, 8, 11, 20, 37, 50])
def test_hurwitz_route_matches_direct_series(q):
    n = np.arange(1, 100001)
    for chi in enumerate_characters(build_group(q)):
        tab = chi.table
        direct = np.sum(tab[n % q] * n.astype(float) ** -3.0)
        assert abs(l_value(3.0, chi) - direct) < 1e-9


def test_conjugation_symmetry():
    for chi in enumerate_characters(build_group(15)):
        for s in (0.5 + 2j, 0.7 - 1j):
            assert abs(l_value(s.conjugate(), chi.conj()) - l_value(s, chi).conjugate()) < 1e-10


def test_l_values_matches_scalar():
    g = build_group(40)
    chars = _even_primitive(40)
    tab = character_table(g, chars)
    vec = l_values(0.52, 40, tab)
    assert np.allclose(vec, [l_value(0.52, c) for c in chars], atol=1e-14, rtol=0)
    assert l_values(0.5, 3, tab[:0]).size == 0


def test_hurwitz_table_is_read_only():
    t = hurwitz_table(7, 0.5)
    with pytest.raises(ValueError):
        t[0] = 0


def test_completed_lambda_composition():
    chi = _even_primitive(5)[0]
    alpha = 0.02
    expected = (5 / math.pi) ** 0.01 * cmath.exp(log_gamma(0.26)) * l_value(0.52, chi)
    assert abs(completed_lambda(alpha, chi) - expected) < 1e-14
    assert abs(gamma_factor(5, alpha) - (5 / math.pi) ** 0.01 * math.gamma(0.26)) < 1e-13


def test_completed_lambda_rejects_odd():
    odd = enumerate_characters(build_group(7), primitive_only=True)[0]
    assert not odd.is_even
    with pytest.raises(ValueError):
        completed_lambda(0.1, odd)


def test_completed_lambdas_vector():
    g = build_group(13)
    chars = _even_primitive(13)
    vec = completed_lambdas(0.05 + 0.1j, 13, character_table(g, chars))
    assert np.allclose(vec, [completed_lambda(0.05 + 0.1j, c) for c in chars], atol=1e-14, rtol=0)


def test_functional_equation_examples():
    chi5 = _even_primitive(5)[0]
    assert functional_equation_residual(0.1 + 0.3j, chi5) < 1e-8
    assert functional_equation_residual(0.0, chi5) < 1e-10
    chi8 = _even_primitive(8)[0]
    assert functional_equation_residual(0.25, chi8) < 1e-8


def test_self_dual_real_value():
    chi5 = _even_primitive(5)[0]
    for s in (0.0, 0.1, 0.3):
        assert abs(completed_lambda(s, chi5).imag) < 1e-10


def test_functional_equation_family():
    worst = 0.0
    for q in range(1, 101):
        for chi in _even_primitive(q):
            assert abs(abs(root_number(chi)) - 1) < 1e-10
            for s in (0.0, 0.05, 0.1 + 0.2j):
                worst = max(worst, functional_equation_residual(s, chi))
    assert worst < 1e-8
