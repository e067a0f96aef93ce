"""Graded automorphisms ``(sigma, chi)``, finite groups of them, fixed fields,
inertia, and the induced action on graded valuations.

``g = (sigma, chi)`` acts by ``a t_c -> sigma(a) chi(c) t_c`` where ``chi`` is
a character of the grading lattice with root-of-unity values in the base
field, given on the lattice basis.  Composition follows from the action:
``(g h)`` has ``sigma_g sigma_h`` and ``chi(c) = sigma_g(chi_h(c)) chi_g(c)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from . import polys as P
from .errors import (
    NoDominatedExtension,
    ParentMismatch,
    UnsupportedExtension,
    UsageError,
)
from .fields import (
    FieldHom,
    RationalFunctionField,
    SimpleExtension,
    _prime_basis,
    _scalar,
    kummer_irreducible,
)
from .graded import FieldExtension, GradedField
from .grading import Lattice, kernel_mod, lattice_index
from .gvaluation import (
    GradedValuation,
    extend_valuation,
    restrict_valuation,
    ring_containment,
    rings_equal,
)
from .linalg import left_kernel
from .valuations import twist

MAX_ORDER = 720


# --- base field automorphisms -------------------------------------------------


def base_automorphism(F, image):
    """The automorphism of ``F`` sending its top generator to ``image``.

    For rational function fields ``image`` is the image of the generator of the
    constant field (the variable is fixed).
    """
    if F.kind == "rational_functions":
        return _rff_hom(F, base_automorphism(F.base, image))
    if F.base is None:
        return FieldHom.identity(F)
    if not F.is_zero(P.evaluate(F, tuple(F.embed_base(c) for c in F.minpoly), image)):
        raise UsageError(f"{F.to_str(image)} is not a root of the minimal polynomial")
    return FieldHom(F, F, image)


class _ComposedHom:
    """``outer`` after ``inner`` as a callable from ``inner.domain``."""

    def __init__(self, inner, outer):
        self.inner, self.outer = inner, outer
        self.domain, self.codomain = inner.domain, outer.codomain

    def __call__(self, a):
        return self.outer(self.inner(a))


def _rff_hom(F, inner):
    hom = FieldHom.__new__(FieldHom)
    hom.domain = hom.codomain = F
    hom.gen_image = F.gen()
    hom.base_hom = _ComposedHom(inner, _Embed(F))
    hom.const_hom = inner
    return hom


class _Embed:
    def __init__(self, F):
        self.F = F
        self.domain, self.codomain = F.base, F

    def __call__(self, a):
        return self.F.embed_base(a)


def const_part(sigma):
    """The automorphism of the finite layer underlying ``sigma``."""
    return getattr(sigma, "const_hom", sigma)


def _finite_layer(F):
    return F.base if F.kind == "rational_functions" else F


def hom_key(sigma):
    c = const_part(sigma)
    D = c.domain
    if D.base is None:
        return "id"
    return D.to_str(c.gen_image)


def hom_is_identity(sigma):
    c = const_part(sigma)
    return c.domain.base is None or c.is_identity()


def compose_hom(s, t):
    """``s ∘ t`` for automorphisms of the same field."""
    F = s.domain
    cs, ct = const_part(s), const_part(t)
    L = cs.domain
    if L.base is None:
        h = cs
    else:
        h = FieldHom(L, L, cs(ct.gen_image))
    return _rff_hom(F, h) if F.kind == "rational_functions" else h


def named_automorphism(F, name):
    """``id``, ``conj`` (generator -> -generator), ``frob^k`` or ``v -> expr``."""
    L = _finite_layer(F)
    name = name.strip()
    if "->" in name:
        from .parse import parse_base

        var, expr = (x.strip() for x in name.split("->", 1))
        if L.base is None or var != L.var:
            raise UsageError(f"{var!r} is not the generator of {L.name()}")
        img = parse_base(expr, L)
    elif name == "id":
        img = L.gen() if L.base is not None else None
    elif name == "conj":
        if L.base is None:
            raise UsageError("conj needs a simple extension")
        img = L.neg(L.gen())
    elif name.startswith("frob"):
        k = int(name.split("^")[1]) if "^" in name else 1
        if L.char == 0 or L.base is None:
            raise UsageError("Frobenius needs a finite extension field")
        img = L.power(L.gen(), L.char**k)
    else:
        raise UsageError(f"unknown automorphism {name!r}")
    if img is None:
        sig = FieldHom.identity(L)
    else:
        sig = base_automorphism(L, img)
    return _rff_hom(F, sig) if F.kind == "rational_functions" else sig


def automorphism_name(sigma):
    c = const_part(sigma)
    L = c.domain
    if L.base is None or c.is_identity():
        return "id"
    if L.eq(c.gen_image, L.neg(L.gen())):
        return "conj"
    if L.char:
        for k in range(1, L.n):
            if L.eq(c.gen_image, L.power(L.gen(), L.char**k)):
                return f"frob^{k}"
    return f"{L.var} -> {L.to_str(c.gen_image)}"


def _root_order(F, z, bound=MAX_ORDER):
    w = z
    for k in range(1, bound + 1):
        if F.eq(w, F.one):
            return k
        w = F.mul(w, z)
    raise UsageError(f"{F.to_str(z)} is not a root of unity of small order")


# --- graded automorphisms -------------------------------------------------------


class GradedAutomorphism:
    def __init__(self, parent: GradedField, sigma, chi):
        F = parent.base
        if sigma.domain != F:
            raise ParentMismatch("sigma must act on the base field")
        chi = list(chi)
        if len(chi) != parent.gamma.rank:
            raise UsageError("chi needs one value per grading generator")
        for z in chi:
            _root_order(F, z)
        self.parent = parent
        self.sigma = sigma
        self.chi = chi

    def chi_at(self, g):
        c = self.parent.gamma.int_coords(g)
        if c is None:
            raise UsageError(f"{g} is not in the grading lattice")
        F = self.parent.base
        out = F.one
        for k, z in zip(c, self.chi):
            if k:
                out = F.mul(out, F.power(z, k))
        return out

    def __call__(self, x):
        return apply_aut(self, x)

    def __mul__(self, other):
        if other.parent != self.parent:
            raise ParentMismatch("automorphisms of different fields")
        F = self.parent.base
        chi = [F.mul(self.sigma(zh), zg) for zh, zg in zip(other.chi, self.chi)]
        return GradedAutomorphism(self.parent, compose_hom(self.sigma, other.sigma), chi)

    def key(self):
        F = self.parent.base
        return (hom_key(self.sigma), tuple(F.to_str(z) for z in self.chi))

    def __eq__(self, other):
        return isinstance(other, GradedAutomorphism) and self.parent == other.parent and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    @property
    def is_identity(self):
        F = self.parent.base
        return hom_is_identity(self.sigma) and all(F.eq(z, F.one) for z in self.chi)

    def order(self):
        g = self
        for k in range(1, MAX_ORDER + 1):
            if g.is_identity:
                return k
            g = g * self
        raise UsageError("automorphism does not have finite order")

    def inverse(self):
        k = self.order()
        out = identity_aut(self.parent)
        for _ in range(k - 1):
            out = out * self
        return out

    def to_config(self):
        F = self.parent.base
        return {"sigma": automorphism_name(self.sigma), "chi": [F.to_str(z) for z in self.chi]}

    def __repr__(self):
        c = self.to_config()
        return f"({c['sigma']}, chi={c['chi']})"


def identity_aut(parent):
    F = parent.base
    return GradedAutomorphism(parent, named_automorphism(F, "id"), [F.one] * parent.gamma.rank)


def apply_aut(g, x):
    if x.parent != g.parent:
        raise ParentMismatch("automorphism and element live on different fields")
    F = g.parent.base
    return g.parent.element({c: F.mul(g.sigma(a), g.chi_at(c)) for c, a in x.terms.items()})


class AutGroup:
    """A finite group with an action on ``parent`` through ``elements``.

    ``elements[i]`` is the automorphism by which group element ``i`` acts;
    ``table[i][j]`` is the index of the product.  Element 0 is the identity.
    """

    def __init__(self, parent, elements, table):
        self.parent = parent
        self.elements = list(elements)
        self.table = [list(r) for r in table]
        n = len(self.elements)
        if not self.elements[0].is_identity or any(self.table[0][j] != j for j in range(n)):
            raise UsageError("element 0 must be the identity")
        for i in range(n):
            for j in range(n):
                k = self.table[i][j]
                if self.elements[i] * self.elements[j] != self.elements[k]:
                    raise UsageError("multiplication table is incompatible with the action")
            if sorted(self.table[i]) != list(range(n)):
                raise UsageError("multiplication table is not a group table")

    @classmethod
    def generated(cls, parent, gens):
        """Closure of ``gens`` under composition, in breadth-first order."""
        elems = [identity_aut(parent)]
        frontier = [elems[0]]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = x * g
                    if y not in elems:
                        elems.append(y)
                        nxt.append(y)
                        if len(elems) > MAX_ORDER:
                            raise UsageError("group is too large")
            frontier = nxt
        idx = {e: i for i, e in enumerate(elems)}
        table = [[idx[a * b] for b in elems] for a in elems]
        return cls(parent, elems, table)

    @classmethod
    def cyclic_action(cls, parent, n, g):
        """``Z/n`` acting through the powers of ``g`` (which need not be faithful)."""
        if not _power(g, n).is_identity:
            raise UsageError("g^n must be the identity")
        elems = [_power(g, k) for k in range(n)]
        table = [[(i + j) % n for j in range(n)] for i in range(n)]
        return cls(parent, elems, table)

    @property
    def order(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def inverse_index(self, i):
        return self.table[i].index(0)

    @property
    def is_faithful(self):
        return len(set(self.elements)) == len(self.elements)

    def subgroup(self, indices):
        indices = sorted(indices)
        pos = {i: k for k, i in enumerate(indices)}
        table = [[pos[self.table[i][j]] for j in indices] for i in indices]
        return AutGroup(self.parent, [self.elements[i] for i in indices], table)

    def to_config(self):
        return {"elements": [e.to_config() for e in self.elements], "table": self.table}


def _power(g, k):
    out = identity_aut(g.parent)
    for _ in range(k):
        out = out * g
    return out


# --- fixed fields -----------------------------------------------------------------


def _distinct_sigmas(G):
    seen, out = set(), []
    for g in G.elements:
        k = hom_key(g.sigma)
        if k not in seen:
            seen.add(k)
            out.append(const_part(g.sigma))
    return out


def _fixed_space(L, sigmas):
    """Basis (over the prime field) of the fixed vectors of ``sigmas`` on ``L``."""
    basis = _prime_basis(L)
    scal = L.prime_field().scalars
    # solve sum_k y_k (s(b_k) - b_k) = 0 for every s
    rows = []
    for k, b in enumerate(basis):
        row = []
        for s in sigmas:
            row += L.coords(L.sub(s(b), b))
        rows.append(row)
    ker = left_kernel(rows, scal)
    out = []
    for y in ker:
        acc = L.zero
        for c, b in zip(y, basis):
            acc = L.add(acc, L.mul(_scalar(L, c), b))
        out.append(acc)
    return out


def _fixed_finite(L, sigmas):
    """``(L0, embedding L0 -> L)`` for the fixed field of ``sigmas`` on a finite layer."""
    if all(s.domain.base is None or s.is_identity() for s in sigmas):
        return L, FieldHom.identity(L)
    fixed = _fixed_space(L, sigmas)
    d = len(fixed)
    if d == 1:
        P0 = L.prime_field()
        return P0, FieldHom.inclusion(P0, L)
    cands = list(fixed)
    cands += [L.add(a, b) for i, a in enumerate(fixed) for b in fixed[i + 1:]]
    if L.char == 0:
        for beta in cands:
            c = L.power(beta, d)
            if all(x == 0 for x in c[1:]):
                a = c[0]
                if a.denominator == 1 and kummer_irreducible(d, a):
                    L0 = SimpleExtension.kummer(d, a, _fresh_var(L))
                    return L0, FieldHom(L0, L, beta)
        raise UnsupportedExtension("no Kummer generator for the fixed field")
    Fp = L.prime_field()
    for beta in cands:
        mp = _minpoly_fp(L, beta)
        if P.deg(mp) == d:
            L0 = SimpleExtension(Fp, list(mp), _fresh_var(L))
            return L0, FieldHom(L0, L, beta)
    raise UnsupportedExtension("no primitive element for the fixed field")


def _fresh_var(L):
    return L.var + "0"


def _minpoly_fp(L, beta):
    Fp = L.prime_field()
    powers = [L.coords(L.power(beta, k)) for k in range(L.n + 1)]
    for d in range(1, L.n + 1):
        ker = left_kernel(powers[: d + 1], Fp)
        if ker:
            y = ker[0]
            return P.monic(Fp, P.trim(Fp, tuple(y)))
    raise UsageError("minimal polynomial not found")


def fixed_base_field(G):
    F = G.parent.base
    sigmas = _distinct_sigmas(G)
    if F.kind == "rational_functions":
        L0, emb = _fixed_finite(F.base, sigmas)
        if L0 == F.base:
            return F, FieldHom.identity(F)
        R0 = RationalFunctionField(L0, F.var)
        hom = FieldHom(R0, F, F.gen(), _ComposedHom(emb, _Embed(F)))
        return R0, hom
    return _fixed_finite(F, sigmas)


def inertia_indices(G):
    return [i for i, g in enumerate(G.elements) if hom_is_identity(g.sigma)]


def _cyclic_logs(F, values):
    """A common order ``M`` and discrete logs of root-of-unity ``values``."""
    M = 1
    for z in values:
        o = _root_order(F, z)
        M = M * o // gcd(M, o)
    group = [F.one]
    gens = list(values)
    # enumerate the generated group and pick an element of order M
    frontier = [F.one]
    while frontier:
        nxt = []
        for x in frontier:
            for z in gens:
                y = F.mul(x, z)
                if not any(F.eq(y, w) for w in group):
                    group.append(y)
                    nxt.append(y)
        frontier = nxt
    zeta = next(z for z in group if _root_order(F, z) == M)
    powers = [F.power(zeta, k) for k in range(M)]
    logs = [next(k for k, w in enumerate(powers) if F.eq(w, z)) for z in values]
    return M, logs, zeta


def invariant_lattice(G, indices=None):
    """``{c : chi_g(c) = 1 for g in the given elements}`` (default: inertia)."""
    Gam = G.parent.gamma
    F = G.parent.base
    idx = inertia_indices(G) if indices is None else indices
    if not idx or Gam.rank == 0:
        return Gam
    vals = [G.elements[i].chi[j] for i in idx for j in range(Gam.rank)]
    M, logs, _ = _cyclic_logs(F, vals)
    values = [[logs[t * Gam.rank + j] for t in range(len(idx))] for j in range(Gam.rank)]
    return kernel_mod(Gam, values, [M] * len(idx))


def _twisted_trace(G, x, e):
    F = G.parent.base
    acc = F.zero
    for g in G.elements:
        acc = F.add(acc, F.mul(g.sigma(x), g.chi_at(e)))
    return acc


def fixed_subfield(G):
    """``(L, K/L)`` with ``L`` the graded subfield fixed by ``G``."""
    K = G.parent
    F = K.base
    L1, emb = fixed_base_field(G)
    V = invariant_lattice(G)
    twists = []
    pool = [F.one] + [F.coerce(b, _finite_layer(F)) for b in _prime_basis(_finite_layer(F))]
    pool += [F.add(pool[-1], F.one)]
    for e in V.basis:
        for x in pool:
            c = _twisted_trace(G, x, e)
            if not F.is_zero(c):
                break
        else:
            raise UnsupportedExtension("twisted trace vanished on the whole pool")
        if emb.preimage(c) is not None:
            c = F.one
        else:
            c = _normalize_scalar(F, c)
        twists.append(c)
    L = GradedField(L1, V, K.var)
    return L, FieldExtension(K, L, emb, twists)


def _normalize_scalar(F, c):
    """Divide by the first nonzero prime-field coordinate (a fixed scalar)."""
    layer = _finite_layer(F)
    if F.kind == "rational_functions":
        num, den = c
        if len(num) != 1 or den != (layer.one,):
            return c
        lead = next(x for x in layer.coords(num[0]) if x)
    else:
        lead = next(x for x in F.coords(c) if x)
    scal = _scalar(F.prime_field(), lead)
    return F.div(c, F.coerce(scal, F.prime_field()))


def invariant_subalgebra(G, Aprime=None):
    if Aprime is not None and Aprime != G.parent:
        raise ParentMismatch("group does not act on this algebra")
    return fixed_subfield(G)


@dataclass
class InertiaPairing:
    inertia: AutGroup
    inertia_indices: list
    V: Lattice
    reps: list
    xi: dict
    biadditive: bool
    nondegenerate_left: bool
    nondegenerate_right: bool
    index: int

    @property
    def ok(self):
        return (
            self.biadditive
            and self.nondegenerate_left
            and self.nondegenerate_right
            and self.index == self.inertia.order
        )


def inertia_pairing(G):
    K = G.parent
    F = K.base
    idx = inertia_indices(G)
    I = G.subgroup(idx)
    V = invariant_lattice(G)
    Gam = K.gamma
    reps = Gam.coset_representatives(V)
    pts = [Gam.point(r) for r in reps]
    xi = {(a, b): I.elements[a].chi_at(pts[b]) for a in range(I.order) for b in range(len(reps))}
    # biadditive in both variables
    bi = True
    for a in range(I.order):
        for a2 in range(I.order):
            c = I.table[a][a2]
            for b in range(len(reps)):
                if not F.eq(xi[(c, b)], F.mul(xi[(a, b)], xi[(a2, b)])):
                    bi = False
        for b in range(len(reps)):
            for b2 in range(len(reps)):
                s = tuple(x + y for x, y in zip(reps[b], reps[b2]))
                r, _ = Gam.reduce_mod(V, s)
                k = reps.index(tuple(r))
                if not F.eq(xi[(a, k)], F.mul(xi[(a, b)], xi[(a, b2)])):
                    bi = False
    zero = reps.index(tuple([0] * Gam.rank))
    left = all(
        any(not F.eq(xi[(a, b)], F.one) for b in range(len(reps)))
        for a in range(I.order)
        if not I.elements[a].is_identity
    ) and I.is_faithful
    right = all(
        any(not F.eq(xi[(a, b)], F.one) for a in range(I.order))
        for b in range(len(reps))
        if b != zero
    )
    index = lattice_index(Gam, V)
    return InertiaPairing(I, idx, V, reps, xi, bi, left, right, index)


# --- action on valuations -----------------------------------------------------------


def act_on_valuation(g, V):
    """The valuation whose ring is ``g(O_V)``: ``(v1 ∘ sigma^-1, psi)``."""
    if g.parent != V.parent:
        raise ParentMismatch("automorphism and valuation live on different fields")
    if hom_is_identity(g.sigma):
        return V
    ginv = g.inverse()
    v = twist(V.v1, ginv.sigma)
    return GradedValuation(V.parent, v, V.psi)


def _index_of(A, pool):
    for k, B in enumerate(pool):
        if A.key() == B.key():
            return k
    for k, B in enumerate(pool):
        if rings_equal(A, B):
            return k
    return None


def orbit_on_extensions(G, R, ext):
    """Partition the extensions of ``R`` into ``G``-orbits (canonical order)."""
    exts = extend_valuation(R, ext)
    parent = list(range(len(exts)))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for i, A in enumerate(exts):
        for g in G.elements:
            k = _index_of(act_on_valuation(g, A), exts)
            if k is None:
                raise UsageError("group does not permute the extensions")
            a, b = find(i), find(k)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups = {}
    for i in range(len(exts)):
        groups.setdefault(find(i), []).append(exts[i])
    return [groups[k] for k in sorted(groups)]


def stabilizer_order(G, A):
    return sum(1 for g in G.elements if rings_equal(act_on_valuation(g, A), A))


def dominated_extension(R, Rp, Ap, ext):
    """An extension ``A`` of ``R`` with ``O_A ⊆ O_Ap`` (first in canonical order)."""
    if not ring_containment(R, Rp):
        raise UsageError("R is not contained in Rp")
    back = restrict_valuation(Ap, ext)
    if not rings_equal(back, Rp):
        raise UsageError("Ap does not extend Rp")
    cands = extend_valuation(R, ext)
    report = []
    for A in cands:
        c = ring_containment(A, Ap)
        report.append((repr(A), c.holds, str(c.witness) if c.witness is not None else None))
        if c:
            return A
    raise NoDominatedExtension(
        "no extension of R is dominated by Ap", diagnostics={"candidates": report, "R": repr(R), "Ap": repr(Ap)}
    )
