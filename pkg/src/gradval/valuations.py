"""Valuations on base fields, residues, and the extension oracle.

A valuation has a ``rank`` r and takes nonzero elements to vectors in Q^r
(compared lexicographically); zero goes to :data:`INF`.  Every valuation
knows its value lattice, residue field, a residue map on its ring, a lift back
from the residue field, and a multiplicative ``section`` (an element of each
prescribed value).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from sympy import integer_nthroot, isprime

from . import polys as P
from .errors import (
    FieldMismatch,
    NegativeValue,
    UnsupportedExtension,
    UsageError,
    ZeroElement,
)
from .fields import (
    BaseField,
    FieldHom,
    PrimeField,
    RationalFunctionField,
    Rationals,
    SimpleExtension,
    field_from_descriptor,
)
from .grading import Lattice, lex_sign
from .linalg import common_denominator, xgcd
from .padic import factor_valuation, kummer_local_factors, vp


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"


INF = _Infinity()


def value_ge0(w):
    return w is INF or lex_sign(w) >= 0


def value_gt0(w):
    return w is INF or lex_sign(w) > 0


def value_cmp(a, b):
    """-1, 0, 1 comparing two values (INF is the largest)."""
    if a is INF:
        return 0 if b is INF else 1
    if b is INF:
        return -1
    return lex_sign(tuple(x - y for x, y in zip(a, b)))


def value_min(values):
    best = INF
    for w in values:
        if value_cmp(w, best) < 0:
            best = w
    return best


def value_str(w):
    if w is INF:
        return "inf"
    if len(w) == 1:
        return str(w[0])
    return "(" + ", ".join(str(x) for x in w) + ")"


@dataclass(frozen=True)
class ResidueElement:
    field: BaseField
    value: object

    def __str__(self):
        return self.field.to_str(self.value)


class BaseValuation:
    kind = "abstract"

    def __eq__(self, other):
        return isinstance(other, BaseValuation) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def key(self):
        return json.dumps(self.descriptor(), sort_keys=True)

    def __repr__(self):
        return f"<{self.kind} valuation {self.key()}>"

    @property
    def is_trivial(self):
        return False

    def _check(self, a):
        if not self.field.contains(a):
            raise FieldMismatch(f"{a!r} is not an element of {self.field}")

    def in_ring(self, a):
        return value_ge0(self.value(a))

    def is_unit(self, a):
        w = self.value(a)
        return w is not INF and lex_sign(w) == 0


class TrivialValuation(BaseValuation):
    kind = "trivial"

    def __init__(self, field, rank=1):
        self.field = field
        self.rank = rank

    @property
    def is_trivial(self):
        return True

    def value(self, a):
        self._check(a)
        if self.field.is_zero(a):
            return INF
        return (Fraction(0),) * self.rank

    def value_lattice(self):
        return Lattice.zero(self.rank)

    @property
    def residue_field(self):
        return self.field

    def residue(self, a):
        return a

    def lift(self, r):
        return r

    def section(self, w):
        if any(w):
            raise UsageError("the trivial valuation only takes the value 0")
        return self.field.one

    def descriptor(self):
        return {"kind": "trivial", "field": self.field.descriptor(), "rank": self.rank}


class PAdicValuation(BaseValuation):
    kind = "padic"
    rank = 1

    def __init__(self, p):
        self.field = Rationals()
        self.p = int(p)
        PrimeField(self.p)  # validates primality

    def value(self, a):
        self._check(a)
        if a == 0:
            return INF
        return (Fraction(vp(a, self.p)),)

    def value_lattice(self):
        return Lattice.standard(1)

    @property
    def residue_field(self):
        return PrimeField(self.p)

    def residue(self, a):
        w = self.value(a)
        if not value_ge0(w):
            raise NegativeValue(f"{a} has negative {self.p}-adic value")
        if value_gt0(w):
            return 0
        return PrimeField(self.p).from_fraction(a)

    def lift(self, r):
        return Fraction(r)

    def section(self, w):
        k = Fraction(w[0])
        if k.denominator != 1:
            raise UsageError(f"{k} is not in the value group")
        return Fraction(self.p) ** int(k)

    def descriptor(self):
        return {"kind": "padic", "p": self.p}


# --- extensions of p-adic valuations to Kummer fields ----------------------


def _poly_int(field, beta):
    """``beta = h(alpha) / D`` with integer ``h``; returns ``(h, D)``."""
    D = common_denominator(beta)
    return [int(c * D) for c in beta], D


def _charpoly(M):
    """Characteristic polynomial (low degree first, monic) via Faddeev-LeVerrier."""
    n = len(M)
    A = [[Fraction(x) for x in r] for r in M]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = [[Fraction(0)] * n for _ in range(n)]
    I = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    c = Fraction(1)
    for k in range(1, n + 1):
        Mk = [
            [sum(A[i][t] * Mk[t][j] for t in range(n)) + (c * I[i][j]) for j in range(n)]
            for i in range(n)
        ]
        AM = [[sum(A[i][t] * Mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        c = -sum(AM[i][i] for i in range(n)) / k
        coeffs[n - k] = c
    return coeffs


def _mult_matrix(g, h, mod):
    """Matrix of multiplication by ``h`` on Z[x]/(g) (monic ``g``) modulo ``mod``."""
    d = len(g) - 1
    cols = []
    cur = [c % mod for c in h] + [0] * max(0, d - len(h))
    # reduce h mod g
    def reduce(poly):
        poly = list(poly)
        for i in range(len(poly) - 1, d - 1, -1):
            c = poly[i]
            if c:
                for j in range(d + 1):
                    poly[i - d + j] = (poly[i - d + j] - c * g[j]) % mod
        return (poly + [0] * d)[:d]

    cur = reduce(cur)
    for _ in range(d):
        cols.append(cur)
        cur = reduce([0] + cur)
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def _residue_degree(g_factor, h, j, p):
    """Degree over F_p of the residue of ``h(theta)/p^j`` (a unit)."""
    d = g_factor.degree
    N = j * d + 2
    g = list(g_factor.approx(N))
    M = _mult_matrix(g, h, p**N)
    chi = _charpoly(M)  # integer polynomial; chi_beta(y) = p^{-jd} chi(p^j y)
    Fp = PrimeField(p)
    red = []
    for k, c in enumerate(chi):
        c = int(c) * p ** (j * k)
        red.append(Fp.from_int(c // p ** (j * d)) if c % p ** (j * d) == 0 else None)
    if any(r is None for r in red):
        return None
    red = P.trim(Fp, red)
    x = (0, 1)
    for deg in range(1, d + 1):
        h2 = P.sub(Fp, P.powmod(Fp, x, p**deg, red), x)
        gg = P.gcd(Fp, red, h2)
        if P.deg(gg) > 0:
            return deg, gg
    return None


class KummerPrimeValuation(BaseValuation):
    """An extension of the p-adic valuation to ``Q(alpha)``, ``alpha^n = a``.

    It is attached to one irreducible factor of ``x^n - a`` over ``Q_p``;
    values are normalized to restrict to ``v_p`` on ``Q``.
    """

    kind = "prime"
    rank = 1

    def __init__(self, field, p, index, family):
        self.field = field
        self.p = p
        self.index = index
        self._family = family
        self.factor = family.factors[index]
        self._e = self._f = None
        self._cache = {}

    def value(self, a):
        self._check(a)
        if a in self._cache:
            return self._cache[a]
        if self.field.is_zero(a):
            return INF
        h, D = _poly_int(self.field, a)
        w = (factor_valuation(self.factor, h, self.p) - vp(D, self.p),)
        if len(self._cache) < 200000:
            self._cache[a] = w
        return w

    def _analyse(self):
        if self._e is not None:
            return
        F, p = self.field, self.p
        alpha = F.gen()
        values = {}
        units = []
        cands = []
        for k in range(1, F.n):
            ak = F.power(alpha, k)
            for r in range(0, min(p * p, 50)):
                cands.append((k, r, F.sub(ak, F.from_int(r))))
        for k, r, beta in cands:
            w = self.value(beta)[0]
            if w != 0:
                values.setdefault(w, beta)
            # scale to a unit when possible
            if w.denominator == 1:
                u = F.mul(beta, F.from_fraction(Fraction(p) ** (-int(w))))
                units.append((u, int(w)))
        L = 1
        for w in values:
            L = L * w.denominator // gcd(L, w.denominator)
        e = L
        f = 1
        best = None
        for u, j in units:
            h, D = _poly_int(F, u)
            if D % p == 0:
                jj = vp(D, p)
            else:
                jj = 0
            # u = h(alpha)/D; only handle D = p^jj * unit
            if D // p**jj % p == 0:
                continue
            unit_scale = D // p**jj
            res = _residue_degree(self.factor, [c * pow(unit_scale, -1, p ** (jj * self.factor.degree + 2)) for c in h], jj, p)
            if res is None:
                continue
            deg, hpoly = res
            if deg > f:
                f, best = deg, (u, hpoly)
        if e * f != self.factor.degree:
            raise UnsupportedExtension(
                f"could not certify ramification data for {self.factor.label} over {p}"
            )
        self._e, self._f = e, f
        # uniformizer: combine found values with Bezout to reach 1/e
        target = Fraction(1, e)
        pi = F.from_int(p)
        acc_val = Fraction(1)
        for w, beta in sorted(values.items()):
            g_, x, y = xgcd(int(acc_val * e), int(w * e))
            if g_ < int(acc_val * e):
                pi = F.mul(F.power(pi, x), F.power(beta, y))
                acc_val = Fraction(g_, e)
            if acc_val == target:
                break
        if acc_val != target:
            raise UnsupportedExtension("no uniformizer found")
        self._pi = pi
        if f == 1:
            self._res_field = PrimeField(p)
            self._res_gen = None
        else:
            u, hpoly = best
            self._res_field = SimpleExtension(PrimeField(p), list(hpoly), "r")
            self._res_gen = u

    @property
    def e(self):
        self._analyse()
        return self._e

    @property
    def f(self):
        self._analyse()
        return self._f

    def value_lattice(self):
        return Lattice([(Fraction(1, self.e),)])

    @property
    def residue_field(self):
        self._analyse()
        return self._res_field

    def lift(self, r):
        self._analyse()
        F = self.field
        if self._res_gen is None:
            return F.from_int(int(r))
        acc, pw = F.zero, F.one
        for c in r:
            acc = F.add(acc, F.mul(F.from_int(int(c)), pw))
            pw = F.mul(pw, self._res_gen)
        return acc

    def residue(self, a):
        w = self.value(a)
        if not value_ge0(w):
            raise NegativeValue("element has negative value")
        R = self.residue_field
        if value_gt0(w):
            return R.zero
        elems = R.elements()
        for rho in elems:
            if value_gt0(self.value(self.field.sub(a, self.lift(rho)))):
                return rho
        raise UnsupportedExtension("residue not found")

    def section(self, w):
        k = Fraction(w[0]) * self.e
        if k.denominator != 1:
            raise UsageError(f"{w[0]} is not in the value group")
        self._analyse()
        return self.field.power(self._pi, int(k))

    def descriptor(self):
        N = self._family.precision
        return {
            "kind": "prime",
            "field": self.field.descriptor(),
            "p": self.p,
            "factor": list(self.factor.approx(N)),
            "precision": N,
        }


class _KummerFamily:
    def __init__(self, field, p):
        self.field = field
        self.p = p
        self.factors = kummer_local_factors(field.n, field.kummer_a, p)
        N = 1
        while len({f.approx(N) for f in self.factors}) < len(self.factors):
            N += 1
        self.precision = N
        self.valuations = [KummerPrimeValuation(field, p, i, self) for i in range(len(self.factors))]
        self.valuations.sort(key=lambda v: v.key())


@lru_cache(maxsize=None)
def _family(field_key, p):
    field = field_from_descriptor(json.loads(field_key))
    return _KummerFamily(field, p)


def kummer_extensions(field, p):
    """All extensions of ``v_p`` to a Kummer field, in canonical order."""
    if field.kind != "simple_extension" or field.kummer_a is None:
        raise UnsupportedExtension(f"{field} is not a Kummer extension of Q")
    return list(_family(json.dumps(field.descriptor(), sort_keys=True), p).valuations)


def prime_valuation(field, generator):
    """The unique extension of a p-adic valuation with positive value on ``generator``.

    ``p`` is taken from the norm of the generator.
    """
    h, D = _poly_int(field, generator)
    from .padic import resultant

    norm = resultant([-field.kummer_a] + [0] * (field.n - 1) + [1], h)
    if norm == 0:
        raise UsageError("generator must be nonzero")
    primes = [q for q in _small_prime_factors(abs(norm))]
    hits = []
    for q in primes:
        for v in kummer_extensions(field, q):
            if value_gt0(v.value(generator)):
                hits.append(v)
    if len(hits) != 1:
        raise UsageError(
            f"{field.to_str(generator)} does not single out one prime ({len(hits)} candidates)"
        )
    return hits[0]


def _small_prime_factors(n):
    from sympy import primefactors

    return primefactors(n)


# --- rational function fields ----------------------------------------------


class GaussValuation(BaseValuation):
    """Minimum of the inner valuation over the coefficients."""

    kind = "gauss"

    def __init__(self, field, inner):
        if field.kind != "rational_functions" or inner.field != field.base:
            raise UsageError("Gauss valuations live on k(x) over a valuation of k")
        self.field = field
        self.inner = inner
        self.rank = inner.rank

    def _poly_value(self, p):
        return value_min(self.inner.value(c) for c in p)

    def value(self, a):
        self._check(a)
        if self.field.is_zero(a):
            return INF
        vn = self._poly_value(a[0])
        vd = self._poly_value(a[1])
        return tuple(x - y for x, y in zip(vn, vd))

    def value_lattice(self):
        return self.inner.value_lattice()

    @property
    def residue_field(self):
        return RationalFunctionField(self.inner.residue_field, self.field.var)

    def _normalized_residue(self, poly):
        B = self.field.base
        m = self._poly_value(poly)
        c = next(c for c in poly if value_cmp(self.inner.value(c), m) == 0)
        ci = B.inv(c)
        red = tuple(self.inner.residue(B.mul(ci, x)) for x in poly)
        return c, P.trim(self.inner.residue_field, red)

    def residue(self, a):
        w = self.value(a)
        if not value_ge0(w):
            raise NegativeValue("element has negative Gauss value")
        R = self.residue_field
        if value_gt0(w):
            return R.zero
        cn, rn = self._normalized_residue(a[0])
        cd, rd = self._normalized_residue(a[1])
        k = self.inner.residue(self.field.base.div(cn, cd))
        return R.mul(R.embed_base(k), R.normalize(rn, rd))

    def lift(self, r):
        B = self.field.base
        num = tuple(self.inner.lift(c) for c in r[0])
        den = tuple(self.inner.lift(c) for c in r[1])
        return self.field.normalize(P.trim(B, num), P.trim(B, den))

    def section(self, w):
        return self.field.embed_base(self.inner.section(w))

    def descriptor(self):
        return {"kind": "gauss", "var": self.field.var, "inner": self.inner.descriptor()}


class PlaceValuation(BaseValuation):
    """Order of vanishing at ``x = point`` (or at infinity), trivial on constants."""

    kind = "place"
    rank = 1

    def __init__(self, field, point=None):
        if field.kind != "rational_functions":
            raise UsageError("places live on rational function fields")
        self.field = field
        self.point = point

    def _linear(self):
        B = self.field.base
        return (B.neg(self.point), B.one)

    def _ord(self, poly):
        B = self.field.base
        if self.point is None:
            return -P.deg(poly)
        k = 0
        lin = self._linear()
        while True:
            q, r = P.divmod_(B, poly, lin)
            if r:
                return k
            poly, k = q, k + 1

    def value(self, a):
        self._check(a)
        if self.field.is_zero(a):
            return INF
        return (Fraction(self._ord(a[0]) - self._ord(a[1])),)

    def value_lattice(self):
        return Lattice.standard(1)

    @property
    def residue_field(self):
        return self.field.base

    def residue(self, a):
        w = self.value(a)
        if not value_ge0(w):
            raise NegativeValue("element has a pole at this place")
        B = self.field.base
        if value_gt0(w):
            return B.zero
        num, den = a
        if self.point is None:
            return B.div(num[-1], den[-1])
        lin = self._linear()
        k = self._ord(num)
        for _ in range(k):
            num = P.divmod_(B, num, lin)[0]
            den = P.divmod_(B, den, lin)[0]
        return B.div(P.evaluate(B, num, self.point), P.evaluate(B, den, self.point))

    def lift(self, r):
        return self.field.embed_base(r)

    def section(self, w):
        k = Fraction(w[0])
        if k.denominator != 1:
            raise UsageError(f"{k} is not in the value group")
        F = self.field
        if self.point is None:
            return F.power(F.inv(F.gen()), int(k))
        return F.power(F.from_poly(self._linear()), int(k))

    def descriptor(self):
        pt = "inf" if self.point is None else self.field.base.to_str(self.point)
        return {"kind": "place", "field": self.field.descriptor(), "point": pt}


class CompositeValuation(BaseValuation):
    """``outer`` refined by ``inner`` on the residue field of ``outer``."""

    kind = "composite"

    def __init__(self, outer, inner):
        if inner.field != outer.residue_field:
            raise UsageError("inner valuation must live on the residue field of the outer one")
        self.outer = outer
        self.inner = inner
        self.field = outer.field
        self.rank = outer.rank + inner.rank

    def value(self, a):
        w = self.outer.value(a)
        if w is INF:
            return INF
        u = self.field.div(a, self.outer.section(w))
        return tuple(w) + tuple(self.inner.value(self.outer.residue(u)))

    def value_lattice(self):
        lo, li = self.outer.value_lattice(), self.inner.value_lattice()
        basis = [tuple(b) + (0,) * self.inner.rank for b in lo.basis]
        basis += [(0,) * self.outer.rank + tuple(b) for b in li.basis]
        return Lattice(basis, self.rank)

    @property
    def residue_field(self):
        return self.inner.residue_field

    def residue(self, a):
        w = self.value(a)
        if not value_ge0(w):
            raise NegativeValue("element has negative composite value")
        if value_gt0(self.outer.value(a)):
            return self.residue_field.zero
        return self.inner.residue(self.outer.residue(a))

    def lift(self, r):
        return self.outer.lift(self.inner.lift(r))

    def section(self, w):
        wo, wi = tuple(w[: self.outer.rank]), tuple(w[self.outer.rank:])
        return self.field.mul(self.outer.section(wo), self.outer.lift(self.inner.section(wi)))

    def descriptor(self):
        return {"kind": "composite", "outer": self.outer.descriptor(), "inner": self.inner.descriptor()}


# --- public operations -------------------------------------------------------


def base_eval(v, a):
    return v.value(a)


def base_residue(v, a):
    return ResidueElement(v.residue_field, v.residue(a))


def base_extensions(v, F, embedding=None):
    """Every extension of ``v`` (on a subfield) to ``F``, in canonical order."""
    Fp = v.field
    if embedding is not None and embedding.domain != Fp:
        raise FieldMismatch("embedding domain differs from the valuation's field")
    if embedding is not None and not _is_canonical(embedding):
        raise UnsupportedExtension("only canonical subfield inclusions are supported")
    if F == Fp:
        return [v]
    if v.is_trivial:
        return [TrivialValuation(F, v.rank)]
    if v.kind == "padic" and F.kind == "simple_extension" and getattr(F, "kummer_a", None) is not None:
        return kummer_extensions(F, v.p)
    if (
        v.kind == "gauss"
        and F.kind == "rational_functions"
        and Fp.kind == "rational_functions"
    ):
        inner = base_extensions(v.inner, F.base)
        return sorted((GaussValuation(F, w) for w in inner), key=lambda w: w.key())
    raise UnsupportedExtension(f"no extension oracle for {v.kind} from {Fp} to {F}")


def _is_canonical(hom):
    try:
        canon = FieldHom.inclusion(hom.domain, hom.codomain)
    except FieldMismatch:
        return False
    if hom.domain.base is None:
        return True
    return hom.codomain.eq(hom.gen_image, canon.gen_image)


def twist(v, pullback, candidates=None):
    """The valuation ``a -> v(pullback(a))`` expressed canonically.

    ``pullback`` is the inverse of a field automorphism.  For Kummer primes
    the result is matched among the sibling extensions.
    """
    if v.is_trivial or v.kind in ("padic",):
        return v
    if v.kind == "prime":
        fam = kummer_extensions(v.field, v.p)
        pool = _distinguishing_pool(v.field, v.p)
        sig = tuple(v.value(pullback(b)) for b in pool)
        hits = [w for w in fam if tuple(w.value(b) for b in pool) == sig]
        if len(hits) != 1:
            raise UnsupportedExtension("could not identify the twisted valuation")
        return hits[0]
    if v.kind == "gauss":
        F = v.field

        def const_pullback(c):
            num, den = pullback(F.embed_base(c))
            if len(num) > 1 or den != (F.base.one,):
                raise UnsupportedExtension("automorphism does not preserve constants")
            return num[0] if num else F.base.zero

        return GaussValuation(F, twist(v.inner, const_pullback))
    raise UnsupportedExtension(f"cannot twist a {v.kind} valuation")


@lru_cache(maxsize=None)
def _pool_cache(field_key, p):
    F = field_from_descriptor(json.loads(field_key))
    fam = kummer_extensions(F, p)
    alpha = F.gen()
    pool = []
    for k in range(1, F.n):
        for r in range(0, min(p * p, 50)):
            pool.append(F.sub(F.power(alpha, k), F.from_int(r)))
    # keep only elements that separate something, and check completeness
    sigs = [tuple(w.value(b) for b in pool) for w in fam]
    if len(set(sigs)) != len(fam):
        raise UnsupportedExtension("sibling extensions are not separated by the pool")
    keep = [b for i, b in enumerate(pool) if len({s[i] for s in sigs}) > 1]
    return tuple(keep)


def _distinguishing_pool(F, p):
    return list(_pool_cache(json.dumps(F.descriptor(), sort_keys=True), p))


def restriction_agrees(w, v, samples):
    """Check ``O_w ∩ F' = O_v`` on sample elements of the smaller field."""
    hom = FieldHom.inclusion(v.field, w.field)
    return all(w.in_ring(hom(a)) == v.in_ring(a) for a in samples)


# --- d-th power test ---------------------------------------------------------


def _finite_order(F):
    return F.order


def _is_power_const(F, c, d):
    if F.kind == "rationals":
        c = Fraction(c)
        if c < 0 and d % 2 == 0:
            return False
        _, ok1 = integer_nthroot(abs(c.numerator), d)
        _, ok2 = integer_nthroot(c.denominator, d)
        return ok1 and ok2
    if F.kind in ("prime", "simple_extension") and F.char:
        q = F.order
        return F.eq(F.power(c, (q - 1) // gcd(d, q - 1)), F.one)
    raise UnsupportedExtension(f"no d-th power test over {F}")


def _monic_root_coprime(B, N, d):
    """Monic d-th root of monic ``N`` when ``d`` is invertible in ``B``, else None."""
    m, rem = divmod(P.deg(N), d)
    if rem:
        return None
    S = tuple(reversed(N))  # reversed, constant term 1
    R = [B.one]
    dinv = B.inv(B.from_int(d))
    for k in range(1, m + 1):
        trial = tuple(R) + (B.zero,)
        pw = P.power(B, trial, d)
        coeff = pw[k] if k < len(pw) else B.zero
        R.append(B.mul(B.sub(S[k] if k < len(S) else B.zero, coeff), dinv))
    Q = P.trim(B, tuple(reversed(R)))
    return Q if P.power(B, Q, d) == P.trim(B, N) else None


def _frob_root(B, c):
    """p-th root in a finite field."""
    return B.power(c, B.order // B.char)


def _is_power_poly(B, N, d):
    if P.deg(N) == 0:
        return True
    p = B.char
    while p and d % p == 0:
        # N must be a polynomial in x^p
        if any(not B.is_zero(c) for i, c in enumerate(N) if i % p):
            return False
        N = tuple(_frob_root(B, N[i]) for i in range(0, len(N), p))
        d //= p
    if d == 1:
        return True
    return _monic_root_coprime(B, N, d) is not None


def residue_power_test(r, d):
    """Whether the residue ``r`` is a ``d``-th power in its field."""
    F, a = r.field, r.value
    if d < 1:
        raise UsageError("d must be positive")
    if F.is_zero(a):
        raise ZeroElement("zero residue")
    if F.kind == "rational_functions":
        B = F.base
        num, den = a
        c = num[-1]
        N = P.monic(B, num)
        return _is_power_const(B, c, d) and _is_power_poly(B, N, d) and _is_power_poly(B, den, d)
    return _is_power_const(F, a, d)


# --- descriptors --------------------------------------------------------------


def valuation_from_descriptor(d, field):
    kind = d["kind"]
    if kind == "trivial":
        return TrivialValuation(field, int(d.get("rank", 1)))
    if kind == "padic":
        v = PAdicValuation(d["p"])
        if field != v.field:
            raise FieldMismatch("p-adic valuations live on Q")
        return v
    if kind == "prime":
        if "generator" in d:
            from .parse import parse_base

            g = parse_base(str(d["generator"]), field)
            if field.kind == "rationals":
                if g.denominator != 1 or not isprime(abs(g.numerator)):
                    raise UsageError(f"{g} is not a prime number")
                return PAdicValuation(abs(g.numerator))
            return prime_valuation(field, g)
        fam = kummer_extensions(field, int(d["p"]))
        target = [int(c) for c in d["factor"]]
        for v in fam:
            if list(v.factor.approx(int(d["precision"]))) == target:
                return v
        raise UsageError("no prime matches the descriptor")
    if kind == "gauss":
        return GaussValuation(field, valuation_from_descriptor(d["inner"], field.base))
    if kind == "place":
        pt = d.get("point", "inf")
        if str(pt) == "inf":
            return PlaceValuation(field, None)
        from .parse import parse_base

        return PlaceValuation(field, parse_base(str(pt), field.base))
    if kind == "composite":
        outer = valuation_from_descriptor(d["outer"], field)
        inner = valuation_from_descriptor(d["inner"], outer.residue_field)
        return CompositeValuation(outer, inner)
    raise UsageError(f"unknown valuation kind {kind!r}")


def base_restrict(w, F):
    """The restriction of ``w`` to the subfield ``F`` of its field."""
    if F == w.field:
        return w
    if w.is_trivial:
        return TrivialValuation(F, w.rank)
    if w.kind == "prime" and F.kind == "rationals":
        return PAdicValuation(w.p)
    if w.kind == "gauss" and F.kind == "rational_functions":
        return GaussValuation(F, base_restrict(w.inner, F.base))
    if w.kind == "composite":
        outer = base_restrict(w.outer, F)
        if outer.residue_field == w.outer.residue_field:
            return CompositeValuation(outer, w.inner)
    raise UnsupportedExtension(f"cannot restrict a {w.kind} valuation to {F}")


def coarsenings(v):
    """``v`` and its coarsenings (prefix valuations), finest first, ending trivial.

    Each entry is ``(valuation, k)`` where the coarsening reads the first ``k``
    value coordinates.
    """
    out = [(v, v.rank)]
    cur = v
    while cur.kind == "composite":
        cur = cur.outer
        out.append((cur, cur.rank))
    if not v.is_trivial:
        out.append((TrivialValuation(v.field, 1), 0))
    return out


def element_pool(v):
    """Sample elements of ``v.field`` useful as witnesses."""
    F = v.field
    pool = []
    lat = v.value_lattice()
    for b in lat.basis:
        for s in (1, -1):
            pool.append(v.section(tuple(s * x for x in b)))
    if v.kind == "prime":
        pool += _distinguishing_pool(F, v.p)
    if v.kind == "composite":
        pool += element_pool(v.outer)
    gens = list(F.generators().values())
    for g in gens:
        pool += [g, F.add(g, F.one), F.sub(g, F.one)]
    pool.append(F.from_int(2))
    return [a for a in pool if not F.is_zero(a)]
