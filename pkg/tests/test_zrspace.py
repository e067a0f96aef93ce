from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradval.errors import IncompleteUniverse, NonHomogeneous, NotGStable, UsageError
from gradval.galois import apply_aut
from gradval.parse import parse_element
from gradval.zrspace import (
    RULE_ORDER,
    BasicSet,
    MembershipTable,
    basic_member,
    build_model,
    candidate_pool,
    check_neighborhood,
    nonvaluation_certificate,
    stable_affine_neighborhood,
)


def els(K, *texts):
    return [parse_element(s, K) for s in texts]


def test_hasse(ws):
    assert sorted(ws.models["M5"].hasse()) == [("A+", "eta"), ("A-", "eta"), ("D+", "A+"), ("D-", "A-")]
    assert ("E", "eta") in ws.models["M6"].hasse()


def test_action_permutes_points(ws):
    m = ws.models["M5"]
    assert m.orbit(m.index("A+")) == [m.index("A+"), m.index("A-")]
    assert m.orbit(m.index("eta")) == [m.index("eta")]


def test_model_needs_orbit(ws):
    with pytest.raises(NotGStable):
        build_model([ws.valuations["eta"], ws.valuations["A+"]], ws.groups["conj"], ["eta", "A+"])


def test_neighborhood_near_orbit(ws):
    m = ws.models["M5"]
    S = [m.index("A+"), m.index("A-")]
    U = [m.index(x) for x in ("eta", "A+", "A-")]
    res = stable_affine_neighborhood(m, S, U)
    assert [str(x) for x in res.basic_set.positive] == ["1*u^(-1)"]
    assert res.members == ["eta", "A+", "A-"]
    assert all(check_neighborhood(m, S, U, res.basic_set.positive).values())


def test_neighborhood_whole_space(ws):
    m = ws.models["M5"]
    res = stable_affine_neighborhood(m, [1, 2], list(range(5)))
    assert res.basic_set.positive == []


def test_neighborhood_avoids_trivial_point(ws):
    m = ws.models["M6"]
    S = [m.index("A+"), m.index("A-")]
    U = [i for i in range(6) if m.labels[i] != "E"]
    res = stable_affine_neighborhood(m, S, U)
    assert "E" not in res.members
    assert all(check_neighborhood(m, S, U, res.basic_set.positive).values())


def test_neighborhood_bad_inputs(ws):
    m = ws.models["M5"]
    with pytest.raises(UsageError):
        stable_affine_neighborhood(m, [m.index("A+")], list(range(5)))
    with pytest.raises(UsageError):
        stable_affine_neighborhood(m, [1, 2], [1, 2])


def test_pool_is_group_stable_after_closure(ws):
    m = ws.models["M6"]
    pool = candidate_pool(m)
    assert pool
    assert all(x.is_homogeneous and not x.is_zero for x in pool)


def test_basic_set_monotone(ws):
    m = ws.models["M6"]
    K = m.points[0].parent
    F = els(K, "u^(-1)", "u^(1)", "5", "(2+i)*u^(1)")
    for k in range(len(F)):
        small, big = BasicSet(F[:k]), BasicSet(F[: k + 1])
        for V in m.points:
            assert basic_member(big, V) <= basic_member(small, V)


@pytest.mark.parametrize("rule,universe,bits,k,F,G", [
    ("II", ["1", "-1"], [1, 0], ["1", "-1"], [], []),
    ("I_NEG", ["1", "5", "-5"], [1, 1, 0], ["1"], [], []),
    ("I", ["1", "4", "5"], [1, 1, 0], ["1"], [], []),
    ("III", ["1", "5", "25"], [1, 1, 0], ["1"], [], []),
    ("IV", ["1", "5", "1/5"], [1, 0, 0], ["1"], [], []),
    ("V", ["1", "5"], [1, 0], ["1"], ["5"], []),
    ("V_NEG", ["1", "5"], [1, 1], ["1"], [], ["5"]),
])
def test_each_rule(QZ, rule, universe, bits, k, F, G):
    t = MembershipTable(els(QZ, *universe), bits)
    k, F, G = els(QZ, *k), els(QZ, *F), els(QZ, *G)
    c = nonvaluation_certificate(t, k, F, G)
    assert c.rule == rule
    assert c.replay(t, k, F, G)


def test_rule_order_is_canonical(QZ):
    assert RULE_ORDER[0] == "II"
    t = MembershipTable(els(QZ, "1", "-1", "5", "25"), [1, 0, 1, 0])
    assert nonvaluation_certificate(t, els(QZ, "1", "-1")).rule == "II"


def test_genuine_table_has_no_certificate(ws):
    t = ws.tables["padic5"]
    assert nonvaluation_certificate(t, t.k_elems) is None


def test_incomplete_universe(QZ):
    t = MembershipTable(els(QZ, "5"), [1])
    with pytest.raises(IncompleteUniverse):
        nonvaluation_certificate(t)


def test_table_rejects_non_homogeneous(QZ):
    with pytest.raises(NonHomogeneous):
        MembershipTable(els(QZ, "1 + u^(1)"), [1])


def test_replay_rejects_other_tables(ws):
    t = ws.tables["square"]
    c = nonvaluation_certificate(t, t.k_elems)
    fixed = MembershipTable(t.universe, [1, 1, 1])
    assert not c.replay(fixed, t.k_elems)


@given(st.sets(st.integers(0, 13), min_size=1, max_size=3))
@settings(max_examples=60, deadline=None)
def test_perturbations_are_certified(ws, flips):
    t = ws.tables["padic5"]
    tt = t.flipped([t.universe[i] for i in flips])
    c = nonvaluation_certificate(tt, t.k_elems)
    assert c is not None and c.replay(tt, t.k_elems)


@given(st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=30, deadline=None)
def test_group_translates_preserve_membership(ws, a, d):
    G = ws.groups["conj"]
    m = ws.models["M5"]
    K = m.points[0].parent
    x = K.monomial((Fr(2), Fr(1)), (d,)) * K.monomial((Fr(a), Fr(1)), (0,))
    for g, perm in zip(G.elements, m.action):
        for i, V in enumerate(m.points):
            assert basic_member(BasicSet([x]), V) == basic_member(BasicSet([apply_aut(g, x)]), m.points[perm[i]])


def test_one_point_model(ws, KB):
    from gradval.galois import AutGroup

    m = build_model([ws.valuations["eta"]], AutGroup.generated(KB, []), ["eta"])
    assert m.hasse() == [] and m.orbit(0) == [0]
    assert stable_affine_neighborhood(m, [0], [0]).members == ["eta"]
