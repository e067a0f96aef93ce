import random
from fractions import Fraction as Fr

import pytest

from gradval.errors import ParentMismatch, UsageError
from gradval.galois import (
    AutGroup,
    GradedAutomorphism,
    act_on_valuation,
    apply_aut,
    dominated_extension,
    fixed_subfield,
    inertia_pairing,
    named_automorphism,
    orbit_on_extensions,
    stabilizer_order,
)
from gradval.graded import GradedField, check_basis_product, efn
from gradval.grading import Lattice
from gradval.gvaluation import rings_equal

I = (Fr(0), Fr(1))


def test_apply_examples(ws, KB, K):
    u = KB.t((1,))
    iu = KB.monomial(I, (1,))
    conj = ws.groups["conj"].elements[1]
    assert apply_aut(conj, iu) == -iu
    g = ws.groups["chi_i"].elements[1]
    assert apply_aut(g, KB.const(K.from_int(3)) * u**2) == -(KB.const(K.from_int(3)) * u**2)
    assert g.order() == 4
    assert ws.groups["chi_i"].order == 4


@pytest.mark.parametrize("name,base,lattice", [
    ("conj", "Q", [(1,)]),
    ("chi_m", "K", [(2,)]),
    ("chi_i", "K", [(4,)]),
    ("sign", "Q", [(2,)]),
])
def test_fixed_fields(ws, name, base, lattice):
    G = ws.groups[name]
    L, ext = fixed_subfield(G)
    assert L == GradedField(ws.fields[base], Lattice(lattice))
    assert efn(ext)[2] == G.order
    assert check_basis_product(ext)


def test_order_eight(ws, KB):
    G = AutGroup.generated(KB, list(ws.groups["conj"].elements[1:]) + list(ws.groups["chi_i"].elements[1:2]))
    assert G.order == 8
    L, ext = fixed_subfield(G)
    assert L.base == ws.fields["Q"]
    assert L.gamma == Lattice([(4,)])
    assert efn(ext) == (4, 2, 8)


def test_fixed_elements_are_invariant(ws):
    for name in ("conj", "chi_m", "chi_i", "sign"):
        G = ws.groups[name]
        L, ext = fixed_subfield(G)
        for b in L.gamma.basis:
            x = ext.embed(L.t(b))
            assert all(apply_aut(g, x) == x for g in G.elements)


def test_pairing(ws):
    for name in ("conj", "chi_m", "chi_i", "sign"):
        p = inertia_pairing(ws.groups[name])
        assert p.ok
    assert inertia_pairing(ws.groups["conj"]).inertia.order == 1
    assert inertia_pairing(ws.groups["chi_i"]).inertia.order == 4


def test_action_swaps_split_primes(ws):
    conj = ws.groups["conj"].elements[1]
    Ap, Am = ws.valuations["A+"], ws.valuations["A-"]
    assert rings_equal(act_on_valuation(conj, Ap), Am)
    assert rings_equal(act_on_valuation(conj, Am), Ap)
    assert rings_equal(act_on_valuation(conj, ws.valuations["A3"]), ws.valuations["A3"])


def test_action_parent_mismatch(ws):
    with pytest.raises(ParentMismatch):
        act_on_valuation(ws.groups["sign"].elements[1], ws.valuations["A+"])


def test_orbits(ws):
    G = ws.groups["conj"]
    ext = fixed_subfield(G)[1]
    for rn, size in (("R5", 2), ("R3", 1), ("R2", 1), ("Rtriv", 1)):
        R = ws.valuations[rn]
        orbits = orbit_on_extensions(G, R, ext)
        assert len(orbits) == 1
        assert len(orbits[0]) == size
        assert all(stabilizer_order(G, A) * size == G.order for A in orbits[0])


def test_dominated_extension(ws):
    ext = fixed_subfield(ws.groups["conj"])[1]
    A = dominated_extension(ws.valuations["R5c"], ws.valuations["R5"], ws.valuations["A+"], ext)
    assert rings_equal(A, ws.valuations["D+"])
    A = dominated_extension(ws.valuations["R5"], ws.valuations["R5"], ws.valuations["A-"], ext)
    assert rings_equal(A, ws.valuations["A-"])
    with pytest.raises(UsageError):
        dominated_extension(ws.valuations["R5"], ws.valuations["R5c"], ws.valuations["D+"], ext)


def test_random_groups(ws, KB, K):
    rng = random.Random(11)
    roots = [K.one, K.neg(K.one), I, K.neg(I)]
    for _ in range(30):
        gens = [GradedAutomorphism(KB, named_automorphism(K, rng.choice(["id", "conj"])), [rng.choice(roots)])
                for _ in range(rng.randint(1, 2))]
        G = AutGroup.generated(KB, gens)
        assert G.order <= 8
        if not G.is_faithful:
            continue
        L, ext = fixed_subfield(G)
        e, f, n = efn(ext)
        assert n == G.order
        assert check_basis_product(ext)
        assert inertia_pairing(G).ok
