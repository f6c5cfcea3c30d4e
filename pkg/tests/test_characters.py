import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmoments.arith import euler_phi, phi_star
from lmoments.characters import (
    build_group,
    char_value,
    character_table,
    enumerate_characters,
    even_primitive_count,
    gauss_sum,
    orthogonality_formula,
    orthogonality_sum,
    root_number,
)


def _brute_conductor(chi):
    """Smallest d | q such that chi is trivial on units congruent to 1 mod d."""
    q = chi.modulus
    for d in range(1, q + 1):
        if q % d:
            continue
        if all(abs(chi(n) - 1) < 1e-9 for n in range(1, q + 1, d) if math.gcd(n, q) == 1):
            return d
    return q


def test_group_examples():
    g1 = build_group(1)
    assert g1.order == 1
    g5 = build_group(5)
    assert list(g5.orders) == [4]
    g8 = build_group(8)
    assert sorted(g8.orders) == [2, 2]


@pytest.mark.parametrize("q", list(range(1, 130)))
def test_group_order_and_logs(q):
    g = build_group(q)
    assert g.order == euler_phi(q)
    assert math.prod(g.orders) == euler_phi(q)
    # each unit has a unique exponent vector
    units = [a for a in range(q) if math.gcd(a, q) == 1] if q > 1 else [0]
    vecs = {tuple(g.discrete_logs[:, a]) for a in units}
    assert len(vecs) == len(units)


def test_build_group_bound():
    with pytest.raises(ValueError):
        build_group(10**6 + 1)


@pytest.mark.parametrize("q", list(range(1, 121)))
def test_conductor_and_parity_brute_force(q):
    for chi in enumerate_characters(build_group(q)):
        assert chi.conductor.value == _brute_conductor(chi)
        assert chi.is_primitive == (chi.conductor.value == q)
        minus_one = chi(q - 1) if q > 1 else 1
        assert chi.is_even == (abs(minus_one - 1) < 1e-12)


@pytest.mark.parametrize("q, count", [(5, 1), (8, 1), (3, 0), (4, 0), (1, 1)])
def test_even_primitive_examples(q, count):
    assert len(enumerate_characters(build_group(q), even_only=True, primitive_only=True)) == count


def test_primitive_count_matches_phi_star():
    for q in range(1, 501):
        assert len(enumerate_characters(build_group(q), primitive_only=True)) == phi_star(q)


def test_even_primitive_count_matches_enumeration():
    for q in range(1, 200):
        n = len(enumerate_characters(build_group(q), even_only=True, primitive_only=True))
        assert even_primitive_count(q) == n


def test_char_value_examples():
    triv = enumerate_characters(build_group(1))[0]
    assert char_value(triv, 17) == 1
    quad5 = enumerate_characters(build_group(5), even_only=True, primitive_only=True)[0]
    assert char_value(quad5, 2) == -1
    for chi in enumerate_characters(build_group(12)):
        assert char_value(chi, 12) == 0
        assert char_value(chi, 6) == 0


def test_values_are_exact_on_small_roots():
    quad5 = enumerate_characters(build_group(5), even_only=True, primitive_only=True)[0]
    assert [quad5(n) for n in range(5)] == [0, 1, -1, -1, 1]


@pytest.mark.parametrize("q", [7, 8, 9, 12, 15, 16, 40, 63, 97, 100])
def test_multiplicativity(q):
    rng = np.random.default_rng(q)
    units = [a for a in range(1, q) if math.gcd(a, q) == 1]
    for chi in enumerate_characters(build_group(q)):
        for _ in range(100):
            m, n = rng.choice(units, 2)
            assert abs(chi(int(m * n)) - chi(int(m)) * chi(int(n))) < 1e-12


@pytest.mark.parametrize("q", [5, 8, 13, 20, 45, 64, 99])
def test_conjugate_closure(q):
    chars = enumerate_characters(build_group(q), even_only=True, primitive_only=True)
    assert set(chars) == {c.conj() for c in chars}


def test_character_table_rows_match_values():
    g = build_group(36)
    chars = enumerate_characters(g)
    tab = character_table(g, chars)
    for row, chi in zip(tab, chars):
        assert np.allclose(row, [chi(a) for a in range(36)], atol=1e-15)


def test_gauss_sum_examples():
    quad5 = enumerate_characters(build_group(5), even_only=True, primitive_only=True)[0]
    assert abs(gauss_sum(quad5) - math.sqrt(5)) < 1e-12
    triv = enumerate_characters(build_group(1))[0]
    assert abs(gauss_sum(triv) - 1) < 1e-15


def test_gauss_sum_matches_definition():
    for chi in enumerate_characters(build_group(21)):
        direct = sum(chi(a) * cmath.exp(2j * math.pi * a / 21) for a in range(21))
        assert abs(gauss_sum(chi) - direct) < 1e-12


def test_gauss_sum_modulus_primitive():
    for q in range(1, 201):
        for chi in enumerate_characters(build_group(q), primitive_only=True):
            assert abs(abs(gauss_sum(chi)) - math.sqrt(q)) < 1e-10


def test_root_number_examples():
    quad5 = enumerate_characters(build_group(5), even_only=True, primitive_only=True)[0]
    assert abs(root_number(quad5) - 1) < 1e-12
    chi8 = enumerate_characters(build_group(8), even_only=True, primitive_only=True)[0]
    assert abs(abs(root_number(chi8)) - 1) < 1e-12
    triv = enumerate_characters(build_group(1))[0]
    assert abs(root_number(triv) - 1) < 1e-15


def test_root_number_rejects():
    odd = enumerate_characters(build_group(3), primitive_only=True)[0]
    with pytest.raises(ValueError):
        root_number(odd)
    imprimitive = enumerate_characters(build_group(10), even_only=True)[0]
    with pytest.raises(ValueError):
        root_number(imprimitive)


@pytest.mark.parametrize("q, m, n, value", [(5, 1, 1, 1), (8, 3, 1, -1), (1, 1, 1, 1)])
def test_orthogonality_examples(q, m, n, value):
    assert orthogonality_formula(q, m, n) == value
    assert abs(orthogonality_sum(q, m, n) - value) < 1e-12


def test_orthogonality_gcd_violation():
    with pytest.raises(ValueError):
        orthogonality_sum(6, 2, 1)
    with pytest.raises(ValueError):
        orthogonality_formula(6, 1, 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 200), st.integers(1, 40), st.integers(1, 40))
def test_orthogonality_property(q, m, n):
    if math.gcd(m * n, q) != 1:
        return
    assert abs(orthogonality_sum(q, m, n) - float(orthogonality_formula(q, m, n))) < 1e-9
