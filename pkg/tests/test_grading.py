from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bordered_ks.grading import (
    AlexanderGrading,
    GradingError,
    GradingHom,
    RefinedGrading,
    alexander_swap_hom,
    apply_hom,
    crossing_alexander_shift,
    epsilon,
    epsilon_hom,
    eta,
    eta_hom,
    identity_hom,
    swap_hom,
)

HALF = Fraction(1, 2)


def half_vectors(m):
    return st.lists(st.integers(-8, 8), min_size=2 * m, max_size=2 * m).map(
        lambda xs: RefinedGrading.from_values([Fraction(x, 2) for x in xs])
    )


def test_eta_examples():
    m = 3
    assert eta(RefinedGrading.tau(m, 1, HALF)) == AlexanderGrading.e(m, 1, HALF)
    assert eta(RefinedGrading.zero(2 * m)) == AlexanderGrading.zero(m)
    u2 = RefinedGrading.tau(m, 2, HALF) + RefinedGrading.beta(m, 2, HALF)
    assert eta(u2) == AlexanderGrading.e(m, 2)


def test_epsilon_examples():
    m = 4
    assert epsilon(RefinedGrading.beta(m, 3, HALF)) == 1
    assert epsilon(RefinedGrading.tau(m, 3, HALF)) == 0
    assert epsilon(RefinedGrading.tau(m, 4, HALF) + RefinedGrading.beta(m, 4, HALF)) == 1


def test_epsilon_rejects_non_integral():
    with pytest.raises(GradingError):
        epsilon(RefinedGrading.beta(2, 1, Fraction(1, 4)))


def test_dimension_mismatch():
    with pytest.raises(GradingError):
        eta(RefinedGrading.zero(3))
    with pytest.raises(GradingError):
        RefinedGrading.zero(4) + RefinedGrading.zero(6)
    with pytest.raises(GradingError):
        apply_hom(swap_hom(3, 1), RefinedGrading.zero(4))


def test_swap_examples():
    m = 4
    s = swap_hom(m, 2)
    assert s(RefinedGrading.tau(m, 2)) == RefinedGrading.tau(m, 3)
    assert s(RefinedGrading.beta(m, 3)) == RefinedGrading.beta(m, 2)
    assert s(RefinedGrading.tau(m, 1)) == RefinedGrading.tau(m, 1)
    assert s(RefinedGrading.beta(m, 4)) == RefinedGrading.beta(m, 4)
    g = RefinedGrading.from_values([1, HALF, 0, 2, 0, 0, 3, -1])
    assert identity_hom(8)(g) == g


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_squares_commute_on_basis(m):
    basis = [RefinedGrading.tau(m, j) for j in range(1, m + 1)]
    basis += [RefinedGrading.beta(m, j) for j in range(1, m + 1)]
    for i in range(1, m):
        s, es = swap_hom(m, i), alexander_swap_hom(m, i)
        for v in basis:
            assert eta(s(v)) == es(eta(v))
            assert epsilon(s(v)) == epsilon(v)


def test_crossing_shift():
    m = 3
    q = Fraction(1, 4)
    pos = crossing_alexander_shift(m, 1, True)
    assert pos.values() == (-q, -q, 0)
    assert crossing_alexander_shift(m, 2, False).values() == (0, q, q)
    assert (pos + crossing_alexander_shift(m, 1, False)) == AlexanderGrading.zero(m)
    assert pos.denominator() == 4


@given(half_vectors(3), half_vectors(3))
def test_epsilon_additive(a, b):
    assert epsilon(a + b) == epsilon(a) + epsilon(b)


@given(half_vectors(3), half_vectors(3))
def test_homs_linear(a, b):
    for h in (eta_hom(3), swap_hom(3, 2), epsilon_hom(3)):
        assert h(a + b) == h(a) + h(b)


@given(half_vectors(4))
def test_composite_is_composition(g):
    s1, s2, e = swap_hom(4, 1), swap_hom(4, 3), eta_hom(4)
    assert s2.compose(s1)(g) == s2(s1(g))
    assert e.compose(s2).compose(s1)(g) == e(s2(s1(g)))


@given(half_vectors(3))
def test_swap_is_involution(g):
    s = swap_hom(3, 1)
    assert s(s(g)) == g
    assert s.compose(s) == GradingHom("swap1*swap1", identity_hom(6).matrix, 6)


def test_compose_dimension_check():
    with pytest.raises(GradingError):
        swap_hom(3, 1).compose(eta_hom(3))


@given(half_vectors(2))
def test_algebra_degrees_are_half_integral(g):
    assert g.denominator() in (1, 2)
