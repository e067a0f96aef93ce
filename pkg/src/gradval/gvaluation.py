"""Graded valuations ``(v1, psi)`` on split graded fields.

The homogeneous value of ``a t_g`` is ``v1(a)`` (padded with zeros to the
full rank) plus ``psi(g)``; the valuation ring consists of the elements all
of whose homogeneous parts have lex-nonnegative value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import (
    FieldMismatch,
    NonHomogeneous,
    ParentMismatch,
    UnsupportedComparison,
    UsageError,
    WrongMode,
)
from .graded import GradedField, efn
from .grading import Lattice, LatticeHom, hom_extend, vadd, vsub
from .linalg import common_denominator, left_kernel, rank, solve_left
from .valuations import (
    INF,
    base_extensions,
    base_restrict,
    coarsenings,
    element_pool,
    value_ge0,
    value_min,
)


def _pad(w, r):
    return tuple(w) + (Fraction(0),) * (r - len(w))


class GradedValuation:
    def __init__(self, parent: GradedField, v1, psi: LatticeHom):
        if v1.field != parent.base:
            raise FieldMismatch("v1 must live on the base field")
        if psi.source != parent.gamma:
            raise FieldMismatch("psi must be defined on the grading lattice")
        if psi.target_dim < v1.rank:
            raise UsageError("psi target must have at least the rank of v1")
        self.parent = parent
        self.v1 = v1
        self.psi = LatticeHom(parent.gamma, psi.matrix, psi.target_dim)
        self.rank = psi.target_dim

    @classmethod
    def from_rows(cls, parent, v1, rows, rank=None):
        rank = rank if rank is not None else (len(rows[0]) if rows else v1.rank)
        return cls(parent, v1, LatticeHom(parent.gamma, rows, rank))

    def hval(self, a, g):
        w = self.v1.value(a)
        if w is INF:
            return INF
        return vadd(_pad(w, self.rank), self.psi(g))

    def value_lattice(self):
        """``iota(Lambda) + psi(Gamma)`` inside ``Q^r``."""
        gens = [_pad(b, self.rank) for b in self.v1.value_lattice().basis]
        gens += list(self.psi.matrix)
        return Lattice.from_generators(gens, self.rank)

    def descriptor(self):
        return {
            "v1": self.v1.descriptor(),
            "psi": [[str(x) for x in r] for r in self.psi.matrix],
            "rank": self.rank,
        }

    def key(self):
        return json.dumps(self.descriptor(), sort_keys=True)

    def __eq__(self, other):
        return isinstance(other, GradedValuation) and self.parent == other.parent and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        rows = ", ".join("(" + ", ".join(str(x) for x in r) + ")" for r in self.psi.matrix)
        return f"GradedValuation({self.v1.kind}, psi=[{rows}])"


def _check_parent(V, x):
    if x.parent != V.parent:
        raise ParentMismatch("element and valuation live on different graded fields")


def gvalue(V, x):
    _check_parent(V, x)
    return value_min(V.hval(a, g) for g, a in x.terms.items())


def ring_member(V, x):
    _check_parent(V, x)
    return all(value_ge0(V.hval(a, g)) for g, a in x.terms.items())


def residue_graded(V):
    """Base field and grading lattice of the graded residue field."""
    lam = Lattice([_pad(b, V.rank) for b in V.v1.value_lattice().basis], V.rank)
    gamma = V.psi.preimage(lam)
    return GradedField(V.v1.residue_field, gamma, V.parent.var)


# --- containment ------------------------------------------------------------


@dataclass
class Containment:
    holds: bool
    witness: object = None
    reason: str = ""

    def __bool__(self):
        return self.holds


def _cone_implication(A, B, m):
    """Decide ``{z in Q^m : Az >=lex 0}`` is inside ``{z : Bz >=lex 0}``.

    Returns ``(True, None)`` or ``(False, z)`` with ``Az >=lex 0`` and
    ``Bz <lex 0``.
    """
    W = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]  # rows span W

    def restrict(M):
        return [[sum(r[k] * w[k] for k in range(m)) for w in W] for r in M]

    def lift(y):
        return [sum(y[i] * W[i][k] for i in range(len(W))) for k in range(m)]

    while True:
        if not W:
            return True, None
        RA, RB = restrict(A), restrict(B)
        b = next((r for r in RB if any(r)), None)
        if b is None:
            return True, None
        a = next((r for r in RA if any(r)), None)
        if a is None:
            y = _solve_functionals([b], [Fraction(-1)], len(W))
            return False, lift(y)
        c = _proportional(b, a)
        if c is None or c <= 0:
            if c is not None:
                y = _solve_functionals([a], [Fraction(1)], len(W))
            else:
                y = _solve_functionals([a, b], [Fraction(1), Fraction(-1)], len(W))
            return False, lift(y)
        # restrict to ker a
        ker = left_kernel([[x] for x in a])  # vectors y with sum y_i a_i = 0
        W = [lift(y) for y in ker]


def _proportional(b, a):
    k = next(i for i, x in enumerate(a) if x)
    c = b[k] / a[k]
    return c if all(y == c * x for x, y in zip(a, b)) else None


def _solve_functionals(rows, targets, n):
    """A vector ``y`` in Q^n with ``rows[i] . y = targets[i]`` (rows independent)."""
    cols = [[rows[i][j] for i in range(len(rows))] for j in range(n)]
    chosen = []
    basis = []
    for j, c in enumerate(cols):
        if rank(basis + [c]) > len(basis):
            basis.append(c)
            chosen.append(j)
    coeff = solve_left(basis, targets)
    y = [Fraction(0)] * len(cols)
    for j, c in zip(chosen, coeff):
        y[j] = c
    return y


def _base_relation(V, W):
    """Matrix ``P`` with ``v1'(a) = P v1(a)`` (as rows acting on v1 values), or None."""
    v, w = V.v1, W.v1
    for c, k in coarsenings(v):
        if (w.is_trivial and c.is_trivial) or c == w:
            return [[Fraction(int(i == j and i < k)) for j in range(v.rank)] for i in range(w.rank)]
    return None


def _homogeneous_witness(V, z):
    lam = V.v1.value_lattice()
    k = lam.rank
    den = common_denominator(z)
    z = [int(x * den) for x in z]
    a = V.v1.section(lam.point(z[:k])) if k else V.parent.base.one
    g = V.parent.gamma.point(z[k:])
    return V.parent.monomial(a, g)


def ring_containment(V, W):
    """Decide ``O_V ⊆ O_W``; a failing answer carries a homogeneous witness."""
    if V.parent != W.parent:
        raise ParentMismatch("valuations live on different graded fields")
    Pm = _base_relation(V, W)
    if Pm is None:
        wit = _pool_witness(V, W)
        if wit is None:
            raise UnsupportedComparison(
                f"no linear relation between {V.v1.kind} and {W.v1.kind} valuations"
            )
        return Containment(False, wit, "base rings are not nested")
    lam = V.v1.value_lattice()
    gam = V.parent.gamma
    k, g = lam.rank, gam.rank
    m = k + g
    A, B = [], []
    for i in range(V.rank):
        row = [(_pad(b, V.rank)[i]) for b in lam.basis] + [V.psi.matrix[j][i] for j in range(g)]
        A.append(row)
    for i in range(W.rank):
        row = []
        for b in lam.basis:
            pb = [sum(Pm[r][t] * b[t] for t in range(V.v1.rank)) for r in range(W.v1.rank)]
            row.append(_pad(pb, W.rank)[i])
        row += [W.psi.matrix[j][i] for j in range(g)]
        B.append(row)
    ok, z = _cone_implication(A, B, m)
    if ok:
        return Containment(True, None, "cone implication holds")
    return Containment(False, _homogeneous_witness(V, z), "cone implication fails")


def _pool_witness(V, W):
    """A degree-0 element in ``O_V`` but not in ``O_W``, searched in a pool."""
    a = _base_pool_witness(V.v1, W.v1)
    return None if a is None else V.parent.const(a)


def _base_pool_witness(v, w):
    F = v.field
    pool = []
    for a in element_pool(v) + element_pool(w):
        if a not in pool:
            pool.append(a)
    singles = pool + [F.inv(a) for a in pool]

    def good(a):
        return not value_ge0(w.value(a)) and value_ge0(v.value(a))

    def pairs():
        for i, a in enumerate(singles):
            for b in singles[i:]:
                yield F.mul(a, b)

    for tier in (singles, pairs()):
        hits = [a for a in tier if good(a)]
        if hits:
            return min(hits, key=lambda a: (len(F.to_str(a)), F.to_str(a)))
    return None


def base_containment(v, w):
    """Decide ``O_v ⊆ O_w`` for valuations of one base field.

    Holds exactly when ``w`` is a coarsening of ``v``; otherwise a pool
    element of ``O_v`` outside ``O_w`` is returned as witness.
    """
    if v.field != w.field:
        raise FieldMismatch("valuations live on different fields")
    for c, _ in coarsenings(v):
        if (w.is_trivial and c.is_trivial) or c == w:
            return Containment(True, None, "coarsening")
    a = _base_pool_witness(v, w)
    if a is None:
        raise UnsupportedComparison(f"no relation between {v.kind} and {w.kind} valuations")
    return Containment(False, a, "not a coarsening")


def rings_equal(V, W):
    return bool(ring_containment(V, W)) and bool(ring_containment(W, V))


# --- extensions ---------------------------------------------------------------


def _psi_on_small(ext, w, psi_R, r):
    """``psi_A`` on the small lattice: ``psi_R(g) - w(b_g)``."""
    rows = []
    for j, e in enumerate(ext.small.gamma.basis):
        wb = _pad(w.value(ext.twists[j]), r)
        rows.append(vsub(psi_R.matrix[j], wb))
    return LatticeHom(ext.small.gamma, rows, r)


def extend_valuation(R, ext):
    """All graded valuations of the big field restricting to ``R``."""
    if R.parent != ext.small:
        raise ParentMismatch("R must live on the small field of the extension")
    out = []
    for w in base_extensions(R.v1, ext.big.base, ext.base_embedding):
        psi_small = _psi_on_small(ext, w, R.psi, R.rank)
        psi = hom_extend(psi_small, ext.big.gamma)
        out.append(GradedValuation(ext.big, w, psi))
    return out


def restrict_valuation(A, ext):
    """The valuation ``A ∩ L`` on the small field."""
    if A.parent != ext.big:
        raise ParentMismatch("A must live on the big field of the extension")
    v = base_restrict(A.v1, ext.small.base)
    rows = []
    for j, e in enumerate(ext.small.gamma.basis):
        rows.append(vadd(A.psi(e), _pad(A.v1.value(ext.twists[j]), A.rank)))
    return GradedValuation(ext.small, v, LatticeHom(ext.small.gamma, rows, A.rank))


def extension_membership_oracle(A, ext, y, mode, R=None):
    """Membership of homogeneous ``y`` in ``A`` from ``R`` data and ``A1`` only.

    POWER_E (needs f = 1): ``y`` is in ``A`` iff ``y^e`` is in ``R``.
    FACTORIAL_N (needs e = 1): with ``N = f!``, ``y`` is in ``A`` iff
    ``y^N = unit * r`` for an ``A1``-unit and a homogeneous ``r`` of ``R``.
    """
    if y.parent != ext.big:
        raise ParentMismatch("y must live on the big field")
    if y.is_zero:
        return True
    if not y.is_homogeneous:
        raise NonHomogeneous("the oracle takes homogeneous elements")
    if R is None:
        R = restrict_valuation(A, ext)
    e, f, n = efn(ext)
    mode = mode.upper()
    if mode == "POWER_E":
        if f != 1:
            raise WrongMode("POWER_E needs residue degree 1")
        z = ext.preimage(y ** e)
        if z is None:
            raise FieldMismatch("y^e does not lie in the small field")
        return ring_member(R, z)
    if mode == "FACTORIAL_N":
        if e != 1:
            raise WrongMode("FACTORIAL_N needs ramification index 1")
        N = factorial(f)
        K1 = ext.big.base
        c, g = y.coefficient, y.degree
        gN = tuple(N * x for x in g)
        b = ext.twist(gN)
        target = vsub(tuple(N * x for x in A.v1.value(c)), A.v1.value(b))
        lam_R = R.v1.value_lattice()
        if target not in lam_R:
            return False
        d = R.v1.section(target)
        unit = K1.div(K1.power(c, N), K1.mul(ext.base_embedding(d), b))
        if any(A.v1.value(unit)):
            return False
        return ring_member(R, ext.small.monomial(d, gN))
    raise UsageError(f"unknown oracle mode {mode!r}")
