"""Grading groups and value groups as lattices in Q^d.

A :class:`Lattice` is a finitely generated subgroup of ``Q^d`` given by a
linearly independent basis.  Homomorphisms out of a lattice into the
lexicographically ordered ``Q^r`` are :class:`LatticeHom` objects, stored as
the images of the basis vectors.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import InfiniteIndex, NotASublattice, UsageError
from .linalg import (
    common_denominator,
    det,
    int_left_kernel,
    int_row_basis,
    rank,
    solve_left,
)

INFINITE = math.inf


def _vec(v):
    return tuple(Fraction(x) for x in v)


def lex_sign(v):
    """Sign (-1, 0, 1) of a vector in the lexicographic order."""
    for x in v:
        if x > 0:
            return 1
        if x < 0:
            return -1
    return 0


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a):
    return tuple(c * x for x in a)


class Lattice:
    """A lattice ``Z b_1 + ... + Z b_k`` inside ``Q^d``."""

    __slots__ = ("ambient_dim", "basis", "_memo")

    def __init__(self, basis, ambient_dim=None):
        basis = tuple(_vec(b) for b in basis)
        if ambient_dim is None:
            if not basis:
                raise UsageError("ambient dimension required for the zero lattice")
            ambient_dim = len(basis[0])
        if any(len(b) != ambient_dim for b in basis):
            raise UsageError("basis vectors must live in the same ambient space")
        if rank([list(b) for b in basis]) != len(basis):
            raise UsageError("lattice basis vectors must be linearly independent")
        self.ambient_dim = ambient_dim
        self.basis = basis
        self._memo = {}

    @classmethod
    def standard(cls, d):
        return cls([tuple(int(i == j) for j in range(d)) for i in range(d)], d)

    @classmethod
    def zero(cls, d):
        return cls([], d)

    @classmethod
    def from_generators(cls, gens, ambient_dim):
        """Lattice spanned by arbitrary (possibly dependent) rational vectors."""
        gens = [_vec(g) for g in gens if any(g)]
        if not gens:
            return cls.zero(ambient_dim)
        den = common_denominator(x for g in gens for x in g)
        ints = [[int(x * den) for x in g] for g in gens]
        rows = int_row_basis(ints, ambient_dim)
        return cls([[Fraction(x, den) for x in r] for r in rows], ambient_dim)

    @property
    def rank(self):
        return len(self.basis)

    def coords(self, v):
        """Rational coordinates of ``v`` in the basis, or None if outside the span."""
        v = _vec(v)
        if len(v) != self.ambient_dim:
            raise UsageError("vector has the wrong ambient dimension")
        return solve_left([list(b) for b in self.basis], list(v))

    def int_coords(self, v):
        v = _vec(v)
        if v in self._memo:
            return self._memo[v]
        c = self.coords(v)
        if c is None or any(x.denominator != 1 for x in c):
            out = None
        else:
            out = tuple(int(x) for x in c)
        if len(self._memo) < 100000:
            self._memo[v] = out
        return out

    def __contains__(self, v):
        return self.int_coords(v) is not None

    def point(self, coords):
        out = [Fraction(0)] * self.ambient_dim
        for c, b in zip(coords, self.basis):
            if c:
                out = [x + c * y for x, y in zip(out, b)]
        return tuple(out)

    def sublattice(self, int_rows):
        """Sublattice generated by integer coordinate combinations."""
        return Lattice.from_generators(
            [self.point(r) for r in int_rows], self.ambient_dim
        )

    def contains_lattice(self, other):
        return other.ambient_dim == self.ambient_dim and all(
            b in self for b in other.basis
        )

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        if self is other or (self.basis == other.basis and self.ambient_dim == other.ambient_dim):
            return True
        return self.contains_lattice(other) and other.contains_lattice(self)

    def __hash__(self):
        return hash((self.ambient_dim, self.rank))

    def __repr__(self):
        rows = ", ".join("(" + ", ".join(str(x) for x in b) + ")" for b in self.basis)
        return f"Lattice([{rows}])"

    def to_config(self):
        return [[str(x) for x in b] for b in self.basis]

    def coset_representatives(self, sub):
        """Coordinate vectors (in this lattice's basis) of reps of self/sub."""
        idx = lattice_index(self, sub)
        if idx == INFINITE:
            raise InfiniteIndex("infinitely many cosets")
        M = [list(self.int_coords(b)) for b in sub.basis]
        # sub is spanned by rows of M; HNF of M gives a box of representatives
        from .linalg import hnf

        H, _ = hnf(M)
        diag = [H[i][i] for i in range(len(H))]
        reps = [()]
        for i in range(self.rank - 1, -1, -1):
            reps = [(k,) + r for k in range(diag[i]) for r in reps]
        return reps

    def reduce_mod(self, sub, coords):
        """Canonical representative coordinates of ``coords + sub``.

        Returns ``(rep, quotient_coords)`` with ``self.point(coords) =
        self.point(rep) + sub.point(quotient_coords)``.
        """
        from .linalg import hnf

        M = [list(self.int_coords(b)) for b in sub.basis]
        H, U = hnf(M)
        c = list(coords)
        mult = [0] * len(H)
        for i in range(len(H)):
            q = c[i] // H[i][i]
            if q:
                c = [x - q * y for x, y in zip(c, H[i])]
            mult[i] = q
        # convert multipliers on H rows into multipliers on sub basis: H = U @ M
        qc = [sum(mult[i] * U[i][j] for i in range(len(H))) for j in range(len(M))]
        return tuple(c), tuple(qc)


def lattice_index(sup: Lattice, sub: Lattice):
    """``#(sup / sub)``; :data:`INFINITE` when ``sub`` has lower rank."""
    if sup.ambient_dim != sub.ambient_dim:
        raise NotASublattice("lattices live in different ambient spaces")
    rows = []
    for b in sub.basis:
        c = sup.int_coords(b)
        if c is None:
            raise NotASublattice(f"{b} is not in the ambient lattice")
        rows.append([Fraction(x) for x in c])
    if sub.rank < sup.rank:
        return INFINITE
    return abs(int(det(rows))) if rows else 1


def kernel_mod(lattice: Lattice, values, moduli):
    """Sublattice ``{c : sum_j c_j values[j] == 0 mod moduli}``.

    ``values[j]`` is an integer vector (one per basis vector); a modulus of 0
    means exact vanishing.
    """
    k = lattice.rank
    width = len(moduli)
    if width == 0:
        return lattice
    rows = [list(values[j]) for j in range(k)]
    for i, m in enumerate(moduli):
        if m:
            rows.append([m if t == i else 0 for t in range(width)])
    kern = int_left_kernel(rows)
    gens = [r[:k] for r in kern]
    return lattice.sublattice(gens)


class LatticeHom:
    """Homomorphism from a lattice into ``Q^r`` given on its basis."""

    __slots__ = ("source", "target_dim", "matrix")

    def __init__(self, source: Lattice, matrix, target_dim=None):
        matrix = tuple(_vec(r) for r in matrix)
        if len(matrix) != source.rank:
            raise UsageError("one image row per source basis vector is required")
        if target_dim is None:
            if not matrix:
                raise UsageError("target dimension required")
            target_dim = len(matrix[0])
        if any(len(r) != target_dim for r in matrix):
            raise UsageError("image rows have inconsistent length")
        self.source = source
        self.target_dim = target_dim
        self.matrix = matrix

    @classmethod
    def zero(cls, source, target_dim):
        return cls(source, [[0] * target_dim for _ in range(source.rank)], target_dim)

    def on_coords(self, c):
        out = [Fraction(0)] * self.target_dim
        for x, row in zip(c, self.matrix):
            if x:
                out = [a + x * b for a, b in zip(out, row)]
        return tuple(out)

    def __call__(self, v):
        c = self.source.int_coords(v)
        if c is None:
            raise UsageError(f"{v} is not in the source lattice")
        return self.on_coords(c)

    def restrict(self, sub: Lattice):
        rows = []
        for b in sub.basis:
            c = self.source.int_coords(b)
            if c is None:
                raise NotASublattice(f"{b} is not in the source lattice")
            rows.append(self.on_coords(c))
        return LatticeHom(sub, rows, self.target_dim)

    def preimage(self, target: Lattice):
        """Sublattice ``{g : self(g) in target}`` of the source."""
        r = self.target_dim
        # complete the target basis to a basis of Q^r
        basis = [list(b) for b in target.basis]
        for i in range(r):
            e = [Fraction(int(i == j)) for j in range(r)]
            if rank(basis + [e]) > len(basis):
                basis.append(e)
        t = target.rank
        coords = [solve_left(basis, list(row)) for row in self.matrix]
        den = common_denominator(x for c in coords for x in c) if coords else 1
        values = [[int(x * den) for x in c] for c in coords]
        moduli = [den] * t + [0] * (r - t)
        return kernel_mod(self.source, values, moduli)

    def __eq__(self, other):
        if not isinstance(other, LatticeHom):
            return NotImplemented
        if self.source != other.source or self.target_dim != other.target_dim:
            return False
        return all(self(b) == other(b) for b in self.source.basis)

    def __hash__(self):
        return hash(self.target_dim)

    def __repr__(self):
        return f"LatticeHom({self.source!r}, {[list(map(str, r)) for r in self.matrix]})"


def hom_extend(psi: LatticeHom, sup: Lattice) -> LatticeHom:
    """The unique Q-linear extension of ``psi`` from a finite-index sublattice."""
    sub = psi.source
    if lattice_index(sup, sub) == INFINITE:
        raise InfiniteIndex("cannot extend uniquely across an infinite-index inclusion")
    rows = []
    for b in sup.basis:
        c = sub.coords(b)
        rows.append(psi.on_coords(c))
    return LatticeHom(sup, rows, psi.target_dim)
