from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradval.errors import InfiniteIndex, NotASublattice, UsageError
from gradval.grading import INFINITE, Lattice, LatticeHom, hom_extend, lattice_index

Z2 = Lattice.standard(2)


def test_index_of_even_integers():
    assert lattice_index(Lattice.standard(1), Lattice([(2,)])) == 2


def test_index_by_determinant():
    assert lattice_index(Z2, Lattice([(2, 0), (1, 3)])) == 6


def test_index_infinite_on_rank_drop():
    assert lattice_index(Z2, Lattice([(1, 0)], 2)) == INFINITE


def test_index_rejects_non_sublattice():
    with pytest.raises(NotASublattice):
        lattice_index(Lattice([(2,)]), Lattice.standard(1))


def test_dependent_basis_rejected():
    with pytest.raises(UsageError):
        Lattice([(1, 2), (2, 4)])


def test_from_generators_reduces():
    L = Lattice.from_generators([(2, 0), (0, 2), (1, 1)], 2)
    assert L.rank == 2
    assert lattice_index(Z2, L) == 2


def test_hom_extend_halves():
    psi = LatticeHom(Lattice([(2,)]), [[1]])
    ext = hom_extend(psi, Lattice.standard(1))
    assert ext((1,)) == (Fraction(1, 2),)


def test_hom_extend_identity():
    psi = LatticeHom(Z2, [[1, 0], [0, 1]])
    assert hom_extend(psi, Z2) == psi


def test_hom_extend_index_three_denominator():
    sub = Lattice([(3, 0), (1, 1)])
    psi = LatticeHom(sub, [[1, 2], [0, 5]])
    ext = hom_extend(psi, Z2)
    assert ext.restrict(sub) == psi
    assert all(3 % x.denominator == 0 for r in ext.matrix for x in r)


def test_hom_extend_needs_finite_index():
    with pytest.raises(InfiniteIndex):
        hom_extend(LatticeHom(Lattice([(1, 0)], 2), [[1]]), Z2)


def test_preimage():
    psi = LatticeHom(Lattice.standard(1), [[Fraction(1, 2)]])
    assert psi.preimage(Lattice.standard(1)) == Lattice([(2,)])


small = st.integers(-4, 4)
nonzero = st.integers(1, 4)


@st.composite
def sublattice_chain(draw):
    a = [[draw(nonzero), draw(small)], [0, draw(nonzero)]]
    b = [[draw(nonzero), draw(small)], [0, draw(nonzero)]]
    mid = Lattice(a)
    low_rows = [[sum(b[i][k] * a[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    return mid, Lattice(low_rows)


@given(sublattice_chain())
@settings(max_examples=60, deadline=None)
def test_index_multiplicative_in_chains(chain):
    mid, low = chain
    assert lattice_index(Z2, low) == lattice_index(Z2, mid) * lattice_index(mid, low)


@given(sublattice_chain(), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
@settings(max_examples=40, deadline=None)
def test_hom_extend_through_chain(chain, m):
    mid, low = chain
    psi = LatticeHom(low, [m[:2], m[2:]])
    one_step = hom_extend(psi, Z2)
    two_step = hom_extend(hom_extend(psi, mid), Z2)
    assert one_step == two_step


@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4), st.integers(-6, 6), st.integers(-6, 6))
@settings(max_examples=80, deadline=None)
def test_membership_matches_enumeration(m, x, y):
    if m[0] * m[3] - m[1] * m[2] == 0:
        return
    L = Lattice([m[:2], m[2:]])
    enum = {
        (a * m[0] + b * m[2], a * m[1] + b * m[3]) for a in range(-40, 41) for b in range(-40, 41)
    }
    if (x, y) in enum:
        assert (x, y) in L
    elif (x, y) in L:
        # small-coefficient enumeration may miss far-away representations
        c = L.int_coords((x, y))
        assert max(abs(t) for t in c) > 40
