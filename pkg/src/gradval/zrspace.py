"""Basic sets, membership-table certificates, finite models with a group
action, and the search for a group-stable affine neighborhood of an orbit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .errors import (
    IncompleteUniverse,
    NoNeighborhoodInPool,
    NonHomogeneous,
    NotGStable,
    ParentMismatch,
    UsageError,
)
from .galois import act_on_valuation, apply_aut
from .graded import invert_homogeneous
from .gvaluation import gvalue, ring_containment, ring_member
from .valuations import value_str


@dataclass
class BasicSet:
    """``{O : positive ⊆ O, negative ∩ O = ∅}``."""

    positive: list = field(default_factory=list)
    negative: list = field(default_factory=list)

    @property
    def is_affine(self):
        return not self.negative

    def to_config(self):
        return {"positive": [str(x) for x in self.positive], "negative": [str(x) for x in self.negative]}


def basic_member(B, V):
    for x in list(B.positive) + list(B.negative):
        if x.parent != V.parent:
            raise ParentMismatch("basic set and valuation live on different fields")
    return all(ring_member(V, x) for x in B.positive) and not any(ring_member(V, x) for x in B.negative)


# --- certificates ----------------------------------------------------------------


class MembershipTable:
    """Claimed membership bits on a finite universe of homogeneous units."""

    def __init__(self, universe, bits):
        universe = list(universe)
        if len(universe) != len(bits):
            raise UsageError("one bit per universe element")
        if not universe:
            raise UsageError("empty universe")
        parent = universe[0].parent
        for x in universe:
            if x.parent != parent:
                raise ParentMismatch("universe mixes graded fields")
            if x.is_zero or not x.is_homogeneous:
                raise NonHomogeneous("universe elements must be nonzero and homogeneous")
        if len(set(universe)) != len(universe):
            raise UsageError("universe has duplicates")
        self.parent = parent
        self.universe = universe
        self.bits = {x: bool(b) for x, b in zip(universe, bits)}

    @classmethod
    def from_valuation(cls, universe, V):
        return cls(universe, [ring_member(V, x) for x in universe])

    def __contains__(self, x):
        return x in self.bits

    def bit(self, x):
        return self.bits[x]

    def flipped(self, elems):
        bits = [(not self.bits[x]) if x in elems else self.bits[x] for x in self.universe]
        return MembershipTable(self.universe, bits)


RULE_ORDER = ("II", "I_NEG", "I", "III", "IV", "V", "V_NEG")


@dataclass
class Certificate:
    rule: str
    witnesses: tuple

    def to_config(self):
        return {"rule": self.rule, "witnesses": [str(x) for x in self.witnesses]}

    def replay(self, table, k_elems=(), F=(), G=()):
        """Re-check the violation against ``table``."""
        w = self.witnesses
        inS = table.bit
        if self.rule == "II":
            return w[0] in k_elems and not inS(w[0])
        if self.rule == "I_NEG":
            return inS(w[0]) and not inS(-w[0])
        if self.rule == "I":
            a, b = w
            s = a + b
            return inS(a) and inS(b) and a.degree == b.degree and not s.is_zero and not inS(s)
        if self.rule == "III":
            a, b = w
            return inS(a) and inS(b) and not inS(a * b)
        if self.rule == "IV":
            a = w[0]
            return not inS(a) and not inS(invert_homogeneous(a))
        if self.rule == "V":
            return w[0] in F and not inS(w[0])
        if self.rule == "V_NEG":
            return w[0] in G and inS(w[0])
        return False


def _first(cands):
    if not cands:
        return None
    return min(cands, key=lambda ws: tuple(str(x) for x in ws))


def nonvaluation_certificate(t, k_elems=(), F=(), G=()):
    """First violated rule in canonical order, or None.

    Combinations whose result is absent from the universe are skipped; the
    elements the rules take as given (``1``, ``k_elems``, ``F``, ``G``) must be
    present, otherwise :class:`IncompleteUniverse` is raised.
    """
    one = t.parent.one
    for x in [one] + list(k_elems) + list(F) + list(G):
        if x not in t:
            raise IncompleteUniverse(f"{x} is missing from the universe")
    U = t.universe
    S = [x for x in U if t.bit(x)]
    notS = [x for x in U if not t.bit(x)]

    checks = {
        "II": lambda: [(a,) for a in k_elems if not t.bit(a)],
        "I_NEG": lambda: [(a,) for a in S if -a in t and not t.bit(-a)],
        "I": lambda: [
            (a, b)
            for a in S
            for b in S
            if a.degree == b.degree
            and not (s := a + b).is_zero
            and s in t
            and not t.bit(s)
        ],
        "III": lambda: [(a, b) for a in S for b in S if (p := a * b) in t and not t.bit(p)],
        "IV": lambda: [(a,) for a in notS if (q := invert_homogeneous(a)) in t and not t.bit(q)],
        "V": lambda: [(f,) for f in F if not t.bit(f)],
        "V_NEG": lambda: [(g,) for g in G if t.bit(g)],
    }
    for rule in RULE_ORDER:
        w = _first(checks[rule]())
        if w is not None:
            return Certificate(rule, w)
    return None


# --- finite models ------------------------------------------------------------------


@dataclass
class FiniteModel:
    labels: list
    points: list
    group: object
    order: list  # order[i][j]: O_i ⊆ O_j
    action: list  # action[g][i]: index of g(point i)

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise UsageError(f"unknown point {label!r}") from None

    def generalizations(self, idxs):
        return sorted({j for i in idxs for j in range(len(self.points)) if self.order[i][j]})

    def is_up_closed(self, idxs):
        idxs = set(idxs)
        return all(j in idxs for i in idxs for j in range(len(self.points)) if self.order[i][j])

    def orbit(self, i):
        return sorted({perm[i] for perm in self.action})

    def hasse(self):
        n = len(self.points)
        edges = []
        for i in range(n):
            for j in range(n):
                if i != j and self.order[i][j] and not self.order[j][i]:
                    if not any(
                        k not in (i, j) and self.order[i][k] and self.order[k][j] and not self.order[k][i]
                        and not self.order[j][k]
                        for k in range(n)
                    ):
                        edges.append((self.labels[i], self.labels[j]))
        return edges


def _match(V, points):
    for k, W in enumerate(points):
        if V.key() == W.key():
            return k
    for k, W in enumerate(points):
        if ring_containment(V, W) and ring_containment(W, V):
            return k
    return None


def build_model(points, G, labels=None):
    """Finite model on ``points`` (containment order, permutation action)."""
    points = list(points)
    labels = list(labels) if labels is not None else [f"P{i}" for i in range(len(points))]
    if len(set(labels)) != len(labels):
        raise UsageError("point labels must be unique")
    for V in points:
        if V.parent != G.parent:
            raise ParentMismatch("points and group live on different fields")
    action = []
    for g in G.elements:
        perm = []
        for i, V in enumerate(points):
            gV = act_on_valuation(g, V)
            k = _match(gV, points)
            if k is None:
                raise NotGStable(f"translate of {labels[i]} is missing", missing=repr(gV))
            perm.append(k)
        action.append(perm)
    n = len(points)
    order = [[bool(ring_containment(points[i], points[j])) if i != j else True for j in range(n)] for i in range(n)]
    return FiniteModel(labels, points, G, order, action)


# --- neighborhoods ----------------------------------------------------------------


def _g_closure(G, x):
    out = []
    for g in G.elements:
        y = apply_aut(g, x)
        if y not in out:
            out.append(y)
    return sorted(out, key=str)


def candidate_pool(model, pool_exponent=3):
    """Homogeneous candidates: monomials, base uniformizers of the points, products."""
    K = model.points[0].parent
    F = K.base
    gam = K.gamma
    mons = []
    for c in product(range(-pool_exponent, pool_exponent + 1), repeat=gam.rank):
        if any(c):
            mons.append(K.t(gam.point(c)))
    consts = []
    for V in model.points:
        for b in V.v1.value_lattice().basis:
            s = V.v1.section(b)
            for a in (s, F.inv(s)):
                x = K.const(a)
                if x not in consts:
                    consts.append(x)
    pool = list(mons) + consts
    pool += [a * m for a in consts for m in mons]
    seen, out = set(), []
    for x in pool:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


@dataclass
class NeighborhoodResult:
    basic_set: BasicSet
    members: list
    values: dict

    def to_config(self):
        return {
            "F": [str(x) for x in self.basic_set.positive],
            "negative": [],
            "points": self.members,
            "values": self.values,
        }


def stable_affine_neighborhood(m, S, U, pool_exponent=3, max_combination=4):
    """A ``G``-stable finite ``F`` with ``S ⊆ P{F} ⊆ U`` on the model."""
    S = sorted(set(S))
    U = sorted(set(U))
    if not set(S) <= set(U):
        raise UsageError("S must lie in U")
    if not S or set(m.orbit(S[0])) != set(S):
        raise UsageError("S must be a single group orbit")
    if not m.is_up_closed(U):
        raise UsageError("U must be up-closed")
    keep = m.generalizations(S)
    excluded = [i for i in range(len(m.points)) if i not in U]
    cands = []
    if excluded:
        seen = set()
        for f in candidate_pool(m, pool_exponent):
            clo = _g_closure(m.group, f)
            key = tuple(str(x) for x in clo)
            if key in seen:
                continue
            seen.add(key)
            if not all(ring_member(m.points[i], x) for i in keep for x in clo):
                continue
            covers = frozenset(i for i in excluded if not all(ring_member(m.points[i], x) for x in clo))
            if covers:
                cands.append((clo, covers))
    F = _min_cover(cands, excluded, max_combination)
    if F is None:
        covered = set().union(*(c for _, c in cands)) if cands else set()
        raise NoNeighborhoodInPool(
            "candidate pool does not separate every excluded point",
            uncovered=[m.labels[i] for i in excluded if i not in covered],
        )
    B = BasicSet(F, [])
    members = [m.labels[i] for i in range(len(m.points)) if basic_member(B, m.points[i])]
    values = {
        m.labels[i]: {str(x): value_str(gvalue(m.points[i], x)) for x in F} for i in range(len(m.points))
    }
    return NeighborhoodResult(B, members, values)


def _cost(sets):
    elems = []
    for clo in sets:
        for x in clo:
            if x not in elems:
                elems.append(x)
    return (len(elems), sorted(str(x) for x in elems)), sorted(elems, key=str)


def _min_cover(cands, excluded, max_combination):
    target = set(excluded)
    if not target:
        return []
    for k in range(1, max_combination + 1):
        best = None
        for combo in combinations(cands, k):
            if set().union(*(c for _, c in combo)) >= target:
                cost, elems = _cost([clo for clo, _ in combo])
                if best is None or cost < best[0]:
                    best = (cost, elems)
        if best is not None:
            return best[1]
    # greedy fallback
    chosen, covered = [], set()
    while covered < target:
        pick = max(cands, key=lambda c: (len(c[1] - covered), -len(c[0])), default=None)
        if pick is None or not (pick[1] - covered):
            return None
        chosen.append(pick[0])
        covered |= pick[1]
    return _cost(chosen)[1]


def check_neighborhood(m, S, U, F):
    """Verify the output conditions: affine, G-stable, ``S ⊆ X ⊆ U`` and up-closed."""
    B = BasicSet(list(F), [])
    X = [i for i in range(len(m.points)) if basic_member(B, m.points[i])]
    stable = all(apply_aut(g, x) in F for g in m.group.elements for x in F)
    return {
        "affine": B.is_affine,
        "g_stable": stable,
        "contains_S": set(S) <= set(X),
        "inside_U": set(X) <= set(U),
        "up_closed": m.is_up_closed(X),
        "points_stable": all(set(perm[i] for i in X) == set(X) for perm in m.action),
    }
