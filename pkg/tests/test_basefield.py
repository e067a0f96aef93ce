from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradval.errors import UsageError
from gradval.fields import PrimeField, SimpleExtension
from gradval.valuations import (
    INF,
    CompositeValuation,
    GaussValuation,
    PAdicValuation,
    PlaceValuation,
    ResidueElement,
    TrivialValuation,
    base_eval,
    base_extensions,
    base_residue,
    prime_valuation,
    residue_power_test,
    value_cmp,
    value_min,
)

v5 = PAdicValuation(5)


def test_padic_value():
    assert base_eval(v5, Fr(10)) == (1,)
    assert base_eval(v5, Fr(0)) is INF


def test_padic_residue():
    assert base_residue(v5, Fr(7, 3)).value == 4
    assert base_residue(v5, Fr(5)).value == 0


def test_gauss_value_and_residue(Qx):
    g = GaussValuation(Qx, v5)
    f = Qx.from_poly((Fr(0), Fr(1), Fr(-5)))
    assert base_eval(g, f) == (0,)
    r = base_residue(g, f)
    assert r.field.eq(r.value, r.field.gen())


def test_composite_values(Qx):
    g = GaussValuation(Qx, v5)
    c = CompositeValuation(g, PlaceValuation(g.residue_field, 0))
    assert base_eval(c, Qx.from_int(5)) == (1, 0)
    assert base_eval(c, Qx.gen()) == (0, 1)


def test_five_splits(K):
    ws = base_extensions(v5, K)
    assert len(ws) == 2
    two_plus_i = (Fr(2), Fr(1))
    vals = sorted(w.value(two_plus_i) for w in ws)
    assert vals == [(0,), (1,)]
    assert all((w.e, w.f) == (1, 1) for w in ws)


def test_three_inert(K):
    (w,) = base_extensions(PAdicValuation(3), K)
    assert (w.e, w.f) == (1, 2)


def test_two_ramified(K):
    (w,) = base_extensions(PAdicValuation(2), K)
    assert (w.e, w.f) == (2, 1)
    assert w.value((Fr(1), Fr(1))) == (Fr(1, 2),)


def test_trivial_extends_trivially(K, Q):
    (w,) = base_extensions(TrivialValuation(Q), K)
    assert w.is_trivial


@pytest.mark.parametrize("p", [5, 3, 2])
def test_degree_sum(K, p):
    assert sum(w.e * w.f for w in base_extensions(PAdicValuation(p), K)) == 2


def test_degree_sum_quartic():
    F = SimpleExtension.kummer(4, 2, "a")
    ws = base_extensions(PAdicValuation(7), F)
    assert sum(w.e * w.f for w in ws) == 4


def test_prime_from_generator(K):
    w = prime_valuation(K, (Fr(2), Fr(1)))
    assert w.value((Fr(2), Fr(1))) == (1,)
    assert w.value((Fr(2), Fr(-1))) == (0,)


def test_residue_power_gauss(Qx):
    F = GaussValuation(Qx, v5).residue_field
    x = F.gen()
    assert not residue_power_test(ResidueElement(F, x), 2)
    assert not residue_power_test(ResidueElement(F, x), 3)
    assert residue_power_test(ResidueElement(F, F.mul(x, x)), 2)


def test_residue_power_prime_field():
    assert residue_power_test(ResidueElement(PrimeField(5), 4), 2)
    assert not residue_power_test(ResidueElement(PrimeField(5), 2), 2)


def test_residue_power_frobenius(Qx):
    F = GaussValuation(Qx, v5).residue_field
    y = F.power(F.add(F.gen(), F.one), 5)
    assert residue_power_test(ResidueElement(F, y), 5)


def test_place_needs_field(Q):
    with pytest.raises(Exception):
        PlaceValuation(Q, 0)


gauss_int = st.tuples(st.integers(-30, 30), st.integers(-30, 30)).filter(lambda t: t != (0, 0))


def _k(t):
    return (Fr(t[0]), Fr(t[1]))


@given(gauss_int, gauss_int)
@settings(max_examples=80, deadline=None)
def test_kummer_valuations_multiplicative_and_ultrametric(K, a, b):
    a, b = _k(a), _k(b)
    for p in (5, 3, 2):
        for w in base_extensions(PAdicValuation(p), K):
            va, vb = w.value(a), w.value(b)
            assert w.value(K.mul(a, b)) == tuple(x + y for x, y in zip(va, vb))
            s = K.add(a, b)
            if not K.is_zero(s):
                assert value_cmp(w.value(s), value_min([va, vb])) >= 0


@given(st.integers(-200, 200), st.integers(1, 200))
@settings(max_examples=200, deadline=None)
def test_restriction_to_rationals(K, n, d):
    q = Fr(n, d)
    for w in base_extensions(v5, K):
        assert w.in_ring(K.from_fraction(q)) == v5.in_ring(q)


@given(gauss_int, gauss_int)
@settings(max_examples=60, deadline=None)
def test_residue_multiplicative(K, a, b):
    a, b = _k(a), _k(b)
    for w in base_extensions(v5, K):
        if w.in_ring(a) and w.in_ring(b):
            ra, rb = w.residue(a), w.residue(b)
            F = w.residue_field
            assert F.eq(w.residue(K.mul(a, b)), F.mul(ra, rb))
            assert F.eq(w.residue(K.add(a, b)), F.add(ra, rb))


@given(gauss_int)
@settings(max_examples=60, deadline=None)
def test_field_inverse(K, a):
    a = _k(a)
    assert K.eq(K.mul(a, K.inv(a)), K.one)


def test_bad_prime_rejected():
    with pytest.raises(UsageError):
        PrimeField(6)
