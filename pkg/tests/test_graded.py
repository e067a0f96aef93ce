import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradval.errors import NonHomogeneous, UsageError
from gradval.graded import (
    FieldExtension,
    GradedField,
    basis_product,
    check_basis_product,
    coordinates_over_small,
    efn,
    gf_arith,
    invert_homogeneous,
)
from gradval.grading import Lattice
from gradval.suites import random_split_extension


def test_laurent_product(QZ):
    u = QZ.t((1,))
    x = (u + QZ.const(Fr(2)) * u**2) * (QZ.const(Fr(3)) * u**-1)
    assert x == QZ.const(Fr(3)) + QZ.const(Fr(6)) * u
    assert str(x) == "3*u^(0) + 6*u^(1)"


def test_cancellation(QZ):
    u = QZ.t((1,))
    assert (u - u).is_zero
    assert gf_arith("ADD", u, -u) == QZ.zero


def test_gaussian_square(KB, K):
    iu = KB.monomial(K.gen(), (1,))
    assert gf_arith("MUL", iu, iu) == KB.monomial(K.from_int(-1), (2,))


def test_invert_homogeneous(QZ):
    assert invert_homogeneous(QZ.monomial(Fr(5), (3,))) == QZ.monomial(Fr(1, 5), (-3,))
    assert invert_homogeneous(QZ.one) == QZ.one
    with pytest.raises(NonHomogeneous):
        invert_homogeneous(QZ.one + QZ.t((1,)))


def test_degree_outside_lattice(Q):
    L = GradedField(Q, Lattice([(2,)]))
    with pytest.raises(UsageError):
        L.t((1,))


def test_canonical_print_order(QZ):
    u = QZ.t((1,))
    assert str(u**2 + QZ.one + u**-1) == "1*u^(-1) + 1*u^(0) + 1*u^(2)"


def test_efn_index_only(QZ, Q):
    assert efn(FieldExtension(QZ, GradedField(Q, Lattice([(2,)])))) == (2, 1, 2)


def test_efn_base_only(KB, QZ):
    assert efn(FieldExtension(KB, QZ)) == (1, 2, 2)


def test_efn_mixed(KB, Q):
    ext = FieldExtension(KB, GradedField(Q, Lattice([(4,)])))
    assert efn(ext) == (4, 2, 8)
    assert check_basis_product(ext)
    # the explicit basis {i^a u^b : a < 2, b < 4}
    degs = sorted({b.degree for b in basis_product(ext)})
    assert degs == [(Fr(k),) for k in range(4)]


def test_efn_multiplicative_in_tower(KB, QZ, Q):
    Q4 = GradedField(Q, Lattice([(4,)]))
    e1, f1, n1 = efn(FieldExtension(KB, QZ))
    e2, f2, n2 = efn(FieldExtension(QZ, Q4))
    assert efn(FieldExtension(KB, Q4)) == (e1 * e2, f1 * f2, n1 * n2)


def test_coordinates_reconstruct(KB, K, Q):
    ext = FieldExtension(KB, GradedField(Q, Lattice([(4,)])))
    y = KB.monomial(K.from_poly((Fr(3), Fr(5))), (5,)) + KB.t((-2,))
    coords = coordinates_over_small(ext, y)
    total = KB.zero
    for b, c in zip(basis_product(ext), coords):
        total = total + b * ext.embed(c)
    assert total == y


def test_random_extensions_efn():
    rng = random.Random(7)
    for _ in range(50):
        ext, e, f = random_split_extension(rng)
        assert efn(ext) == (e, f, e * f)
        assert check_basis_product(ext)


coef = st.integers(-5, 5)
deg = st.integers(-3, 3)


@st.composite
def laurent(draw):
    from gradval.fields import Rationals

    QZ = GradedField(Rationals(), Lattice.standard(1))
    terms = draw(st.dictionaries(deg, coef, max_size=4))
    return QZ.element({(k,): Fr(v) for k, v in terms.items()})


@given(laurent(), laurent(), laurent())
@settings(max_examples=80, deadline=None)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == a.parent.zero


@given(coef.filter(bool), deg, coef.filter(bool), deg)
@settings(max_examples=60, deadline=None)
def test_homogeneous_units(c1, d1, c2, d2):
    from gradval.fields import Rationals

    QZ = GradedField(Rationals(), Lattice.standard(1))
    x = QZ.monomial(Fr(c1), (d1,))
    y = QZ.monomial(Fr(c2), (d2,))
    assert x * invert_homogeneous(x) == QZ.one
    assert (x * y).degree == (Fr(d1 + d2),)
