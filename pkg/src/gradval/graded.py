"""Split graded fields ``K1[Gamma]`` and extensions between them.

An element is a finite sum of terms ``a * t_g`` with ``a`` in the base field
and ``g`` a point of the grading lattice; terms are keyed by the point itself
(a tuple of Fractions in the ambient space), so that a sublattice grading
shares keys with the bigger one.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FieldMismatch, NonHomogeneous, ParentMismatch, UsageError, ZeroElement
from . import polys as P
from .fields import FieldHom, _prime_basis, _scalar
from .grading import INFINITE, Lattice, lattice_index, vadd
from .linalg import rank, solve_left


def _point(g):
    return tuple(Fraction(x) for x in g)


class GradedField:
    """``base[gamma]``; monomials print as ``u^(k)`` or ``u^(k1,k2)``."""

    def __init__(self, base, gamma: Lattice, var="u"):
        self.base = base
        self.gamma = gamma
        self.var = var

    @property
    def dim(self):
        return self.gamma.ambient_dim

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, GradedField)
            and self.base == other.base
            and self.gamma == other.gamma
            and self.var == other.var
        )

    def __hash__(self):
        return hash((self.base, self.gamma.rank, self.var))

    def __repr__(self):
        return f"{self.base}[{self.gamma}]"

    def element(self, terms):
        """Build an element from ``{point: coefficient}``, dropping zeros."""
        clean = {}
        for g, c in terms.items():
            g = _point(g)
            if g not in self.gamma:
                raise UsageError(f"degree {g} is not in the grading lattice")
            if not self.base.is_zero(c):
                clean[g] = c
        return GradedElement(self, clean)

    @property
    def zero(self):
        return GradedElement(self, {})

    @property
    def one(self):
        return self.monomial(self.base.one, (0,) * self.dim)

    def monomial(self, a, g):
        return self.element({_point(g): a})

    def const(self, a):
        return self.monomial(a, (0,) * self.dim)

    def t(self, g):
        return self.monomial(self.base.one, g)

    def descriptor(self):
        return {
            "base": self.base.descriptor(),
            "gamma": self.gamma.to_config(),
            "dim": self.dim,
            "var": self.var,
        }

    def homogeneous_units(self, coeffs, degrees):
        """All products ``c * t_g`` for ``c`` in coeffs and ``g`` in degrees."""
        return [self.monomial(c, g) for g in degrees for c in coeffs if not self.base.is_zero(c)]


class GradedElement:
    __slots__ = ("parent", "terms")

    def __init__(self, parent, terms):
        self.parent = parent
        self.terms = dict(terms)

    def _same(self, other):
        if not isinstance(other, GradedElement) or other.parent != self.parent:
            raise ParentMismatch("elements belong to different graded fields")

    def __add__(self, other):
        self._same(other)
        F = self.parent.base
        out = dict(self.terms)
        for g, c in other.terms.items():
            s = F.add(out[g], c) if g in out else c
            if F.is_zero(s):
                out.pop(g, None)
            else:
                out[g] = s
        return GradedElement(self.parent, out)

    def __neg__(self):
        F = self.parent.base
        return GradedElement(self.parent, {g: F.neg(c) for g, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._same(other)
        F = self.parent.base
        out = {}
        for g, a in self.terms.items():
            for h, b in other.terms.items():
                k = vadd(g, h)
                s = F.mul(a, b)
                if k in out:
                    s = F.add(out[k], s)
                if F.is_zero(s):
                    out.pop(k, None)
                else:
                    out[k] = s
        return GradedElement(self.parent, out)

    def __pow__(self, e):
        if e < 0:
            return invert_homogeneous(self) ** (-e)
        out = self.parent.one
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        if other.parent != self.parent or set(self.terms) != set(other.terms):
            return False
        F = self.parent.base
        return all(F.eq(c, other.terms[g]) for g, c in self.terms.items())

    def __hash__(self):
        return hash(tuple(sorted((g, repr(c)) for g, c in self.terms.items())))

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_homogeneous(self):
        return len(self.terms) <= 1

    def homogeneous_parts(self):
        return [GradedElement(self.parent, {g: c}) for g, c in sorted(self.terms.items())]

    @property
    def degree(self):
        if len(self.terms) != 1:
            raise NonHomogeneous("degree is defined for nonzero homogeneous elements")
        return next(iter(self.terms))

    @property
    def coefficient(self):
        self.degree
        return next(iter(self.terms.values()))

    def __str__(self):
        P = self.parent
        if not self.terms:
            return "0"
        parts = []
        for g in sorted(self.terms):
            c = P.base.to_str(self.terms[g])
            exp = ",".join(str(x) for x in g)
            if any(ch in c[1:] for ch in "+-/ "):
                c = f"({c})"
            parts.append(f"{c}*{P.var}^({exp})")
        return " + ".join(parts)

    def __repr__(self):
        return f"GradedElement({self})"


def gf_arith(op, x, y=None):
    op = op.upper()
    if op == "ADD":
        return x + y
    if op == "MUL":
        return x * y
    if op == "NEG":
        return -x
    raise UsageError(f"unknown operation {op}")


def invert_homogeneous(x):
    if x.is_zero:
        raise ZeroElement("zero has no inverse")
    if not x.is_homogeneous:
        raise NonHomogeneous("only homogeneous elements are invertible")
    g, a = next(iter(x.terms.items()))
    F = x.parent.base
    return GradedElement(x.parent, {tuple(-c for c in g): F.inv(a)})


class FieldExtension:
    """``big`` over ``small``.

    ``base_embedding`` maps ``small.base`` into ``big.base``; ``twists`` gives,
    for each basis vector ``e_j`` of ``small.gamma``, the coefficient ``b_j`` with
    ``t'_{e_j} -> b_j t_{e_j}`` (all ones by default).
    """

    def __init__(self, big, small, base_embedding=None, twists=None):
        if big.dim != small.dim or not big.gamma.contains_lattice(small.gamma):
            raise FieldMismatch("the small grading lattice must lie in the big one")
        if base_embedding is None:
            base_embedding = FieldHom.inclusion(small.base, big.base)
        if base_embedding.domain != small.base or base_embedding.codomain != big.base:
            raise FieldMismatch("base embedding does not match the fields")
        K1 = big.base
        if twists is None:
            twists = [K1.one] * small.gamma.rank
        if len(twists) != small.gamma.rank or any(K1.is_zero(b) for b in twists):
            raise UsageError("one nonzero twist per basis vector of the small lattice")
        self.big = big
        self.small = small
        self.base_embedding = base_embedding
        self.twists = list(twists)

    def twist(self, g):
        """``b_g`` for a point ``g`` of the small lattice."""
        c = self.small.gamma.int_coords(g)
        if c is None:
            raise UsageError(f"{g} is not in the small grading lattice")
        K1 = self.big.base
        out = K1.one
        for k, b in zip(c, self.twists):
            if k:
                out = K1.mul(out, K1.power(b, k))
        return out

    def embed(self, x):
        if x.parent != self.small:
            raise ParentMismatch("element is not in the small field")
        K1 = self.big.base
        terms = {g: K1.mul(self.base_embedding(a), self.twist(g)) for g, a in x.terms.items()}
        return self.big.element(terms)

    def preimage(self, y):
        """The element of the small field mapping to ``y``, or None."""
        if y.parent != self.big:
            raise ParentMismatch("element is not in the big field")
        K1 = self.big.base
        terms = {}
        for g, a in y.terms.items():
            if g not in self.small.gamma:
                return None
            b = self.base_embedding.preimage(K1.div(a, self.twist(g)))
            if b is None:
                return None
            terms[g] = b
        return self.small.element(terms)

    @property
    def is_identity(self):
        return self.big == self.small and self.base_embedding.is_identity() and all(
            self.big.base.eq(b, self.big.base.one) for b in self.twists
        )


def degree_f(K1, L1):
    tk = getattr(K1, "transcendental", False)
    tl = getattr(L1, "transcendental", False)
    if tk != tl:
        return INFINITE
    dk, dl = K1.abs_degree, L1.abs_degree
    if dk % dl:
        raise FieldMismatch("base degrees are incompatible")
    return dk // dl


def efn(ext):
    e = lattice_index(ext.big.gamma, ext.small.gamma)
    f = degree_f(ext.big.base, ext.small.base)
    n = INFINITE if INFINITE in (e, f) else e * f
    return e, f, n


def base_basis(ext):
    """A basis of the big base field over the small one (powers of a generator)."""
    K1, L1 = ext.big.base, ext.small.base
    f = degree_f(K1, L1)
    if f == INFINITE:
        raise UsageError("infinite residue degree")
    if f == 1:
        return [K1.one]
    gens = list(K1.generators().values())
    for g in gens + [K1.add(gens[0], gens[-1])]:
        cand = [K1.power(g, k) for k in range(f)]
        if _independent(ext, cand):
            return cand
    raise UsageError("no relative generator found")


def _const_layer(ext):
    """Finite fields ``(K, L, L -> K)`` over which coordinates are taken."""
    K1, L1 = ext.big.base, ext.small.base
    if getattr(K1, "transcendental", False):
        return K1.base, L1.base, FieldHom.inclusion(L1.base, K1.base)
    return K1, L1, ext.base_embedding


def _as_const(R, a):
    num, den = a
    if len(num) <= 1 and len(den) == 1:
        return num[0] if num else R.base.zero
    return None


def _scalars(F):
    return F.prime_field().scalars


def _span_rows(K, L, emb, elems):
    return [K.coords(K.mul(emb(l), b)) for b in elems for l in _prime_basis(L)]


def _independent(ext, elems):
    """Linear independence of elements of the big base over the small base."""
    K, L, emb = _const_layer(ext)
    if getattr(ext.big.base, "transcendental", False):
        elems = [_as_const(ext.big.base, b) for b in elems]
        if any(b is None for b in elems):
            return False
    rows = _span_rows(K, L, emb, elems)
    return rank(rows, _scalars(K)) == len(rows)


def _const_coords(K, L, emb, elems, c):
    """``c = sum emb(x_j) * elems[j]`` solved for ``x_j`` in ``L``."""
    rows = _span_rows(K, L, emb, elems)
    sol = solve_left(rows, K.coords(c), _scalars(K))
    if sol is None:
        raise FieldMismatch("coefficient outside the span of the base basis")
    pb = _prime_basis(L)
    out, k = [], 0
    for _ in elems:
        acc = L.zero
        for b in pb:
            acc = L.add(acc, L.mul(_scalar(L, sol[k]), b))
            k += 1
        out.append(acc)
    return out


def base_coords(ext, a):
    """Coordinates of ``a`` in :func:`base_basis` over the small base field."""
    bb = base_basis(ext)
    K1, L1 = ext.big.base, ext.small.base
    if len(bb) == 1:
        c = ext.base_embedding.preimage(a)
        if c is None:
            raise FieldMismatch("coefficient not in the small base field")
        return [c]
    K, L, emb = _const_layer(ext)
    if not getattr(K1, "transcendental", False):
        return _const_coords(K, L, emb, bb, a)
    consts = [_as_const(K1, b) for b in bb]
    num, den = a
    try:
        den_small = [_const_coords(K, L, emb, [K.one], c)[0] for c in den]
    except FieldMismatch:
        raise FieldMismatch("denominator must have coefficients in the small constant field")
    per_coeff = [_const_coords(K, L, emb, consts, c) for c in num]
    return [
        L1.normalize(P.trim(L, [row[j] for row in per_coeff]), P.trim(L, den_small))
        for j in range(len(bb))
    ]


def basis_product(ext):
    """``{b * t_g}`` for ``b`` a base basis and ``g`` coset representatives."""
    K = ext.big
    reps = K.gamma.coset_representatives(ext.small.gamma)
    return [K.monomial(b, K.gamma.point(r)) for r in reps for b in base_basis(ext)]


def check_basis_product(ext):
    """Verify that :func:`basis_product` is a basis of the big field over the small one.

    Independence and spanning reduce to two facts checked exactly: the base
    basis is a basis of ``K1`` over ``L1`` (rank computation over the prime
    field), and the degrees are a full set of distinct cosets.
    """
    L = ext.small
    e, f, n = efn(ext)
    if n == INFINITE:
        return False
    elems = basis_product(ext)
    if len(elems) != n:
        return False
    bb = base_basis(ext)
    Kc, Lc, _ = _const_layer(ext)
    if not _independent(ext, bb) or len(bb) * Lc.abs_degree != Kc.abs_degree:
        return False
    degs = sorted({x.degree for x in elems})
    if len(degs) != e:
        return False
    for i, g in enumerate(degs):
        for h in degs[i + 1:]:
            if tuple(a - b for a, b in zip(g, h)) in L.gamma:
                return False
    return True


def coordinates_over_small(ext, x):
    """Coordinates of ``x`` in :func:`basis_product` as elements of the small field."""
    K, L = ext.big, ext.small
    nb = len(base_basis(ext))
    reps = K.gamma.coset_representatives(L.gamma)
    out = [L.zero] * (nb * len(reps))
    for g, a in x.terms.items():
        rep, _ = K.gamma.reduce_mod(L.gamma, K.gamma.int_coords(g))
        ri = reps.index(tuple(rep))
        h = tuple(x - y for x, y in zip(g, K.gamma.point(rep)))
        for j, cj in enumerate(base_coords(ext, K.base.div(a, ext.twist(h)))):
            if not L.base.is_zero(cj):
                out[ri * nb + j] = out[ri * nb + j] + L.monomial(cj, h)
    return out
